#pragma once

#include <cstdint>
#include <vector>

#include "qmse/qudit.hpp"

namespace qmse {

/// Detection probabilities at the 2d detectors of the multi-arm
/// interferometer. Path k of the output beam splitters yields
/// plus[k] = |z_k + probe_k|^2 / 4 and minus[k] = |z_k - probe_k|^2 / 4.
struct OutcomeDistribution {
  Eigen::VectorXd plus;
  Eigen::VectorXd minus;

  /// Probability of a click on any minus-port detector; equals SE / 4.
  double minus_total() const { return minus.sum(); }
};

/// Outcome of measuring an ensemble of `shots` copies against one probe.
struct MeasurementRecord {
  AmplitudeVector probe;
  std::vector<std::uint64_t> counts_plus;
  std::vector<std::uint64_t> counts_minus;
  std::uint64_t shots = 0;

  std::uint64_t minus_clicks() const;
};

/// Both inputs must be unit norm (within 1e-9) and of equal dimension,
/// otherwise ContractViolation / DimensionError.
OutcomeDistribution outcome_probabilities(const AmplitudeVector& z, const AmplitudeVector& probe);

/// Draws a multinomial record over the 2d outcomes. Throws EmptyEnsemble for
/// shots == 0.
MeasurementRecord sample_record(const AmplitudeVector& z, const AmplitudeVector& probe,
                                std::uint64_t shots, RngStream& rng);

/// 4 * (minus-port clicks) / shots, the measured squared error.
double estimate_se(const MeasurementRecord& record);

/// Shot-noise-free value of estimate_se: 4 * sum(minus) = squared_error.
double exact_se_oracle(const AmplitudeVector& z, const AmplitudeVector& probe);

}  // namespace qmse
