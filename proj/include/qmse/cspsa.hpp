#pragma once

#include <cstdint>
#include <utility>

#include "qmse/qudit.hpp"

namespace qmse {

/// Gain sequences a_k = a / (k + 1 + A)^s and c_k = b / (k + 1)^r.
///
/// The defaults are the conventional SPSA choices (s = 1 for the fastest
/// asymptotic decay of a_k, r = 1/6 for two-measurement gradient estimates)
/// with a and b tuned for squared-error objectives on the unit sphere.
struct GainSchedule {
  double a = 3.0;
  double A = 0.0;
  double s = 1.0;
  double b = 0.35;
  double r = 1.0 / 6.0;

  /// Throws InvalidGain unless a, s, b, r > 0 and A >= 0.
  void validate() const;
};

struct Gains {
  double a_k;
  double c_k;
};

Gains gains_at(const GainSchedule& sched, std::uint64_t k);

/// Entries drawn i.i.d. uniformly from {+1, -1, +i, -i}.
using PerturbationVector = Eigen::VectorXcd;

PerturbationVector sample_perturbation(int d, RngStream& rng);

/// Current (possibly unnormalized) iterate and the number of updates applied.
struct CspsaState {
  AmplitudeVector iterate;
  std::uint64_t iteration = 0;
};

/// Probe points iterate +/- c_k * delta. Left unnormalized.
std::pair<AmplitudeVector, AmplitudeVector> probes(const CspsaState& state,
                                                   const PerturbationVector& delta, double c_k);

/// Simultaneous-perturbation estimate of the Wirtinger gradient d f / d z*:
///   g_i = (f_plus - f_minus) / (2 c_k conj(delta_i)).
/// Throws InvalidGain for c_k <= 0.
Eigen::VectorXcd gradient_estimate(double f_plus, double f_minus, double c_k,
                                   const PerturbationVector& delta);

/// iterate - a_k g. Throws DegenerateIterate if the result has (numerically)
/// zero norm; the caller is expected to restart from a fresh guess.
CspsaState step(const CspsaState& state, const Eigen::VectorXcd& g, double a_k);

}  // namespace qmse
