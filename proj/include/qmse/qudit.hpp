#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qmse/rng.hpp"

namespace qmse {

using Complex = std::complex<double>;

/// Complex probability amplitudes of a qudit. Unit norm when it describes a
/// physical state; CSPSA iterates are allowed to drift off the unit sphere.
using AmplitudeVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kRankTolerance = 1e-12;

/// v / |v|. Throws DegenerateVector on a zero (or non-finite) norm.
AmplitudeVector normalize(const AmplitudeVector& v);

bool is_normalized(const AmplitudeVector& v, double tol = kNormTolerance);

/// max_ij |(M^H M - 1)_ij| <= tol
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTolerance);

/// Sum_i |z_i - w_i|^2. Sensitive to global phase.
double squared_error(const AmplitudeVector& z, const AmplitudeVector& w);

/// Tr[(U - V)(U - V)^H].
double hs_distance(const ComplexMatrix& u, const ComplexMatrix& v);

AmplitudeVector haar_random_state(int d, RngStream& rng);
ComplexMatrix haar_random_unitary(int d, RngStream& rng);

/// Modified Gram-Schmidt on the columns, in ascending column order.
/// Throws RankDeficient when a pivot norm drops below kRankTolerance.
ComplexMatrix gram_schmidt(const ComplexMatrix& m);

/// Unitary polar factor of m, i.e. the unitary closest to m in
/// Hilbert-Schmidt distance. Computed from the SVD m = V S W^H as V W^H.
/// Throws SingularMatrix if the smallest singular value is below
/// kRankTolerance.
ComplexMatrix closest_unitary(const ComplexMatrix& m);

}  // namespace qmse
