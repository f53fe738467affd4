#include "qmse/cspsa.hpp"

#include <cmath>
#include <string>

#include "qmse/errors.hpp"

namespace qmse {

void GainSchedule::validate() const {
  const bool ok = a > 0.0 && A >= 0.0 && s > 0.0 && b > 0.0 && r > 0.0 && std::isfinite(a) &&
                  std::isfinite(A) && std::isfinite(s) && std::isfinite(b) && std::isfinite(r);
  if (!ok) throw InvalidGain("gain schedule requires a, s, b, r > 0 and A >= 0");
}

Gains gains_at(const GainSchedule& sched, std::uint64_t k) {
  const double kk = static_cast<double>(k);
  return {sched.a / std::pow(kk + 1.0 + sched.A, sched.s), sched.b / std::pow(kk + 1.0, sched.r)};
}

PerturbationVector sample_perturbation(int d, RngStream& rng) {
  if (d < 1) throw InvalidDimension("sample_perturbation: dimension must be >= 1");
  static const Complex kValues[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  PerturbationVector delta(d);
  for (int i = 0; i < d; ++i) delta(i) = kValues[rng.below(4)];
  return delta;
}

std::pair<AmplitudeVector, AmplitudeVector> probes(const CspsaState& state,
                                                   const PerturbationVector& delta, double c_k) {
  if (state.iterate.size() != delta.size()) throw DimensionError("probes: dimension mismatch");
  return {state.iterate + c_k * delta, state.iterate - c_k * delta};
}

Eigen::VectorXcd gradient_estimate(double f_plus, double f_minus, double c_k,
                                   const PerturbationVector& delta) {
  if (!(c_k > 0.0)) throw InvalidGain("gradient_estimate: c_k must be positive");
  const double numerator = f_plus - f_minus;
  Eigen::VectorXcd g(delta.size());
  for (Eigen::Index i = 0; i < delta.size(); ++i)
    g(i) = numerator / (2.0 * c_k * std::conj(delta(i)));
  return g;
}

CspsaState step(const CspsaState& state, const Eigen::VectorXcd& g, double a_k) {
  if (state.iterate.size() != g.size()) throw DimensionError("step: dimension mismatch");
  CspsaState next{state.iterate - a_k * g, state.iteration + 1};
  const double n = next.iterate.norm();
  if (!(n >= kNormTolerance) || !std::isfinite(n))
    throw DegenerateIterate("CSPSA iterate collapsed to zero norm at iteration " +
                            std::to_string(next.iteration));
  return next;
}

}  // namespace qmse
