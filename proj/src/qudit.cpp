#include "qmse/qudit.hpp"

#include <cmath>
#include <string>

#include "qmse/errors.hpp"

namespace qmse {
namespace {

void require_dimension(int d) {
  if (d < 1) throw InvalidDimension("dimension must be >= 1, got " + std::to_string(d));
}

}  // namespace

AmplitudeVector normalize(const AmplitudeVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateVector("cannot normalize a zero-norm vector");
  return v / n;
}

bool is_normalized(const AmplitudeVector& v, double tol) {
  return std::abs(v.squaredNorm() - 1.0) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.size() == 0) return false;
  const ComplexMatrix defect = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

double squared_error(const AmplitudeVector& z, const AmplitudeVector& w) {
  if (z.size() != w.size())
    throw DimensionError("squared_error: sizes " + std::to_string(z.size()) + " and " +
                         std::to_string(w.size()));
  return (z - w).squaredNorm();
}

double hs_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw DimensionError("hs_distance: shape mismatch");
  return (u - v).squaredNorm();
}

AmplitudeVector haar_random_state(int d, RngStream& rng) {
  require_dimension(d);
  AmplitudeVector z(d);
  for (int i = 0; i < d; ++i) z(i) = rng.complex_normal();
  return normalize(z);
}

ComplexMatrix haar_random_unitary(int d, RngStream& rng) {
  require_dimension(d);
  ComplexMatrix ginibre(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) ginibre(i, j) = rng.complex_normal();

  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  // Absorb the phases of diag(R) into Q, otherwise Q is not Haar distributed.
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix gram_schmidt(const ComplexMatrix& m) {
  ComplexMatrix q = m;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const Complex overlap = q.col(i).dot(q.col(j));  // <q_i, q_j>
      q.col(j) -= overlap * q.col(i);
    }
    const double pivot = q.col(j).norm();
    if (!(pivot >= kRankTolerance))
      throw RankDeficient("gram_schmidt: column " + std::to_string(j) + " is linearly dependent");
    q.col(j) /= pivot;
  }
  return q;
}

ComplexMatrix closest_unitary(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("closest_unitary: matrix is not square");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma(sigma.size() - 1) > kRankTolerance))
    throw SingularMatrix("closest_unitary: matrix is singular");
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace qmse
