#include "qmse/protocols.hpp"

#include <iostream>
#include <string>

#include "qmse/errors.hpp"

namespace qmse {

void EstimationConfig::validate() const {
  if (d < 1) throw ConfigError("d must be >= 1, got " + std::to_string(d));
  if (shots < 1) throw ConfigError("shots (N) must be >= 1");
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  try {
    gains.validate();
    simplex.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void UnitaryEstimationOptions::validate() const {
  if (re_update && post_processing == PostProcessing::none)
    throw ConfigError("re_update requires a post-processing method (closest or gs)");
}

namespace {

// One CSPSA + MLE estimation of a single pure state. Used directly for state
// estimation and once per column for unitaries.
class StateRun {
 public:
  StateRun(const AmplitudeVector& target, const EstimationConfig& config,
           const AmplitudeVector& guess, RngStream rng)
      : target_(target), config_(config), rng_(std::move(rng)), state_{guess, 0}, log_(config.d) {}

  // Performs iteration k (1-based) and returns the normalized estimate.
  AmplitudeVector advance(std::uint64_t k) {
    const Gains gains = gains_at(config_.gains, k);
    const PerturbationVector delta = sample_perturbation(config_.d, rng_);

    AmplitudeVector probe_plus, probe_minus;
    while (true) {
      auto [z_plus, z_minus] = probes(state_, delta, gains.c_k);
      try {
        probe_plus = normalize(z_plus);
        probe_minus = normalize(z_minus);
        break;
      } catch (const DegenerateVector&) {
        restart("probe collapsed to zero norm");
      }
    }

    double f_plus = 0.0, f_minus = 0.0;
    if (config_.noiseless) {
      f_plus = exact_se_oracle(target_, probe_plus);
      f_minus = exact_se_oracle(target_, probe_minus);
      if (config_.mle_enabled) {
        log_.append_expected(probe_plus, outcome_probabilities(target_, probe_plus), config_.shots);
        log_.append_expected(probe_minus, outcome_probabilities(target_, probe_minus), config_.shots);
      }
    } else {
      const MeasurementRecord rec_plus = sample_record(target_, probe_plus, config_.shots, rng_);
      const MeasurementRecord rec_minus = sample_record(target_, probe_minus, config_.shots, rng_);
      preparations_ += rec_plus.shots + rec_minus.shots;
      f_plus = estimate_se(rec_plus);
      f_minus = estimate_se(rec_minus);
      if (config_.mle_enabled) {
        log_.append(rec_plus);
        log_.append(rec_minus);
      }
    }

    const Eigen::VectorXcd g = gradient_estimate(f_plus, f_minus, gains.c_k, delta);
    try {
      state_ = step(state_, g, gains.a_k);
    } catch (const DegenerateIterate&) {
      restart("iterate collapsed to zero norm");
    }
    // Keep the iterate on the unit sphere. The perturbation estimate of the
    // gradient of a normalized objective has a radial component, and left
    // alone it inflates the iterate norm until the effective gain vanishes.
    state_.iterate = normalize(state_.iterate);

    if (config_.mle_enabled && !log_.empty())
      state_.iterate = refine(state_.iterate, log_, config_.simplex);
    return normalize(state_.iterate);
  }

  void replace_iterate(const AmplitudeVector& z) { state_.iterate = normalize(z); }

  std::uint64_t restarts() const { return restarts_; }
  std::uint64_t preparations() const { return preparations_; }

 private:
  void restart(const char* why) {
    std::clog << "qmse: " << why << " at iteration " << state_.iteration
              << "; restarting from a random guess\n";
    state_.iterate = haar_random_state(config_.d, rng_);
    ++restarts_;
  }

  AmplitudeVector target_;
  const EstimationConfig& config_;
  RngStream rng_;
  CspsaState state_;
  DataLog log_;
  std::uint64_t restarts_ = 0;
  std::uint64_t preparations_ = 0;
};

void check_target_state(const AmplitudeVector& target, int d) {
  if (target.size() != d) throw DimensionError("target dimension does not match config.d");
  if (!is_normalized(target, 1e-9)) throw ContractViolation("target state must be normalized");
}

}  // namespace

EstimationTrajectory estimate_state(const AmplitudeVector& target, const EstimationConfig& config,
                                    const AmplitudeVector& initial_guess, RngStream& rng) {
  config.validate();
  check_target_state(target, config.d);
  if (initial_guess.size() != config.d) throw DimensionError("initial guess has the wrong dimension");
  normalize(initial_guess);  // rejects a zero guess

  StateRun run(target, config, initial_guess, rng.fork(0));
  EstimationTrajectory traj;
  traj.shots_per_probe = config.shots;
  traj.points.reserve(config.k_max);
  for (std::uint64_t k = 1; k <= config.k_max; ++k) {
    AmplitudeVector estimate = run.advance(k);
    const double se = squared_error(target, estimate);
    traj.points.push_back({k, std::move(estimate), se, total_copies(config.shots, k)});
  }
  traj.final_estimate = traj.points.back().estimate;
  traj.restarts = run.restarts();
  traj.preparations = run.preparations();
  return traj;
}

EstimationTrajectory estimate_state(const AmplitudeVector& target, const EstimationConfig& config,
                                    RngStream& rng) {
  const AmplitudeVector guess = haar_random_state(config.d, rng);
  return estimate_state(target, config, guess, rng);
}

UnitaryTrajectory estimate_unitary(const ComplexMatrix& target, const EstimationConfig& config,
                                   const UnitaryEstimationOptions& options,
                                   const ComplexMatrix& initial_guess, RngStream& rng) {
  config.validate();
  options.validate();
  const int d = config.d;
  if (target.rows() != d || target.cols() != d) throw DimensionError("target unitary has the wrong shape");
  if (!is_unitary(target, 1e-9)) throw ContractViolation("target matrix is not unitary");
  if (initial_guess.rows() != d || initial_guess.cols() != d)
    throw DimensionError("initial unitary guess has the wrong shape");

  std::vector<StateRun> columns;
  columns.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    columns.emplace_back(target.col(j), config, initial_guess.col(j),
                         rng.fork(static_cast<std::uint64_t>(j) + 1));

  UnitaryTrajectory traj;
  traj.d = d;
  traj.shots_per_probe = config.shots;
  traj.post_processing = options.post_processing;
  traj.points.reserve(config.k_max);

  ComplexMatrix raw(d, d);
  for (std::uint64_t k = 1; k <= config.k_max; ++k) {
    for (int j = 0; j < d; ++j) raw.col(j) = columns[static_cast<std::size_t>(j)].advance(k);

    UnitaryPoint point;
    point.k = k;
    point.raw = raw;
    point.post = raw;
    try {
      if (options.post_processing == PostProcessing::closest_unitary)
        point.post = closest_unitary(raw);
      else if (options.post_processing == PostProcessing::gram_schmidt)
        point.post = gram_schmidt(raw);
    } catch (const Error& e) {
      std::clog << "qmse: post-processing failed at iteration " << k << " (" << e.what()
                << "); keeping raw columns\n";
      point.post = raw;
      point.post_fallback = true;
      ++traj.fallbacks;
    }
    if (options.re_update && !point.post_fallback)
      for (int j = 0; j < d; ++j) columns[static_cast<std::size_t>(j)].replace_iterate(point.post.col(j));

    point.hs_raw = hs_distance(target, point.raw);
    point.hs_post = hs_distance(target, point.post);
    point.shots_per_column = total_copies(config.shots, k);
    point.shots_total = total_copies_unitary(d, config.shots, k);
    traj.points.push_back(std::move(point));
  }
  for (const auto& c : columns) traj.restarts += c.restarts();
  return traj;
}

UnitaryTrajectory estimate_unitary(const ComplexMatrix& target, const EstimationConfig& config,
                                   const UnitaryEstimationOptions& options, RngStream& rng) {
  const ComplexMatrix guess = haar_random_unitary(config.d, rng);
  return estimate_unitary(target, config, options, guess, rng);
}

std::uint64_t total_copies(std::uint64_t shots, std::uint64_t k) { return 2 * shots * k; }

std::uint64_t total_copies_unitary(int d, std::uint64_t shots, std::uint64_t k) {
  return static_cast<std::uint64_t>(d) * total_copies(shots, k);
}

std::vector<std::uint64_t> shot_accounting(const EstimationTrajectory& traj) {
  std::vector<std::uint64_t> out;
  out.reserve(traj.points.size());
  for (const auto& p : traj.points) out.push_back(total_copies(traj.shots_per_probe, p.k));
  return out;
}

std::vector<std::uint64_t> shot_accounting(const UnitaryTrajectory& traj, bool all_columns) {
  std::vector<std::uint64_t> out;
  out.reserve(traj.points.size());
  for (const auto& p : traj.points)
    out.push_back(all_columns ? total_copies_unitary(traj.d, traj.shots_per_probe, p.k)
                              : total_copies(traj.shots_per_probe, p.k));
  return out;
}

}  // namespace qmse
