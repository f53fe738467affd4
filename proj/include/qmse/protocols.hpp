#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmse/cspsa.hpp"
#include "qmse/mle.hpp"

namespace qmse {

struct EstimationConfig {
  int d = 2;
  std::uint64_t shots = 1000;  // N, copies per probe per iteration
  std::uint64_t k_max = 100;
  GainSchedule gains;
  SimplexOptions simplex;
  bool mle_enabled = true;
  /// Use exact squared errors instead of sampled counts. With MLE enabled the
  /// likelihood is built from expected counts (the N -> infinity limit).
  bool noiseless = false;

  void validate() const;
};

struct StatePoint {
  std::uint64_t k = 0;
  AmplitudeVector estimate;  // unit norm
  double se = 0.0;           // squared_error(target, estimate)
  std::uint64_t shots_used = 0;
};

struct EstimationTrajectory {
  std::uint64_t shots_per_probe = 0;
  std::vector<StatePoint> points;  // one per iteration, k = 1..k_max
  AmplitudeVector final_estimate;
  std::uint64_t restarts = 0;  // degenerate-iterate restarts
  std::uint64_t preparations = 0;  // copies actually drawn from the source
};

/// Adaptive pure-state estimation: CSPSA on the measured squared error, each
/// iterate refined by maximum likelihood over all data gathered so far.
EstimationTrajectory estimate_state(const AmplitudeVector& target, const EstimationConfig& config,
                                    const AmplitudeVector& initial_guess, RngStream& rng);

/// Same, with a Haar-random initial guess drawn from `rng`.
EstimationTrajectory estimate_state(const AmplitudeVector& target, const EstimationConfig& config,
                                    RngStream& rng);

enum class PostProcessing { none, closest_unitary, gram_schmidt };

struct UnitaryEstimationOptions {
  PostProcessing post_processing = PostProcessing::closest_unitary;
  /// Feed the post-processed columns back as the next column iterates.
  bool re_update = false;

  void validate() const;
};

struct UnitaryPoint {
  std::uint64_t k = 0;
  ComplexMatrix raw;   // columns are the normalized column estimates
  ComplexMatrix post;  // post-processed estimate; equals raw when none/fallback
  double hs_raw = 0.0;
  double hs_post = 0.0;
  bool post_fallback = false;  // projection failed, raw columns were kept
  std::uint64_t shots_per_column = 0;
  std::uint64_t shots_total = 0;
};

struct UnitaryTrajectory {
  int d = 0;
  std::uint64_t shots_per_probe = 0;
  PostProcessing post_processing = PostProcessing::none;
  std::vector<UnitaryPoint> points;
  std::uint64_t restarts = 0;
  std::uint64_t fallbacks = 0;
};

/// Column-wise unitary estimation. Column j is estimated as the state U|j>,
/// with its own perturbations and data log.
UnitaryTrajectory estimate_unitary(const ComplexMatrix& target, const EstimationConfig& config,
                                   const UnitaryEstimationOptions& options,
                                   const ComplexMatrix& initial_guess, RngStream& rng);

UnitaryTrajectory estimate_unitary(const ComplexMatrix& target, const EstimationConfig& config,
                                   const UnitaryEstimationOptions& options, RngStream& rng);

/// N_T = 2 N k after each iteration k.
std::uint64_t total_copies(std::uint64_t shots, std::uint64_t k);
/// N_T* = d N_T, copies spent on all d columns of a unitary.
std::uint64_t total_copies_unitary(int d, std::uint64_t shots, std::uint64_t k);

std::vector<std::uint64_t> shot_accounting(const EstimationTrajectory& traj);
/// Per-column N_T, or the all-columns N_T* when `all_columns` is set.
std::vector<std::uint64_t> shot_accounting(const UnitaryTrajectory& traj, bool all_columns);

}  // namespace qmse
