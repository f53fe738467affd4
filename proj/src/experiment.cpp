#include "qmse/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "qmse/errors.hpp"

namespace qmse {
namespace {

// Stream purposes, kept distinct so targets, initial guesses and noise never
// share a random stream.
constexpr std::uint64_t kTargetStream = 1;
constexpr std::uint64_t kRunStream = 2;

// Runs task(i) for i in [0, count) on `threads` workers. Results must be
// written to per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

RngStream target_stream(const ExperimentConfig& c, std::uint64_t target) {
  return RngStream(c.seed, derive_stream(kTargetStream, target));
}

RngStream run_stream(const ExperimentConfig& c, std::size_t shot_index, std::uint64_t target,
                     std::uint64_t run) {
  return RngStream(c.seed, derive_stream(derive_stream(kRunStream, shot_index), target, run));
}

// errors[(target * runs + run) * k_max + (k - 1)] for one shot count and one
// variant; aggregates into rows, first over runs (MSE per target) and then
// over targets.
void append_rows(ResultsTable& table, const ExperimentConfig& c, std::uint64_t shots,
                 const std::string& variant, const std::vector<double>& errors) {
  const std::uint64_t m = c.targets, n = c.runs, kmax = c.k_max;
  std::vector<double> per_target(m);
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    for (std::uint64_t i = 0; i < m; ++i) {
      double sum = 0.0;
      for (std::uint64_t j = 0; j < n; ++j) sum += errors[(i * n + j) * kmax + (k - 1)];
      per_target[i] = sum / static_cast<double>(n);
    }
    const SampleStatistics stats = summary_statistics(per_target);
    ResultsRow row;
    row.mode = c.mode;
    row.d = c.d;
    row.shots = shots;
    row.k = k;
    row.n_total = total_copies(shots, k);
    row.variant = variant;
    row.mean_mse = stats.mean;
    row.median_mse = stats.median;
    row.q1 = stats.q1;
    row.q3 = stats.q3;
    row.gm_benchmark = gill_massar_mse(2 * c.d, row.n_total);
    row.samples = m * n;
    row.std_error = standard_error(per_target);
    table.rows.push_back(std::move(row));
  }
}

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(Mode mode) { return mode == Mode::state ? "state" : "unitary"; }

const char* to_string(PostProcessing post) {
  switch (post) {
    case PostProcessing::none:
      return "none";
    case PostProcessing::closest_unitary:
      return "closest";
    case PostProcessing::gram_schmidt:
      return "gs";
  }
  return "none";
}

void ExperimentConfig::validate() const {
  if (d < 2) throw ConfigError("d: must be >= 2, got " + std::to_string(d));
  if (shots.empty()) throw ConfigError("shots: at least one shot count is required");
  for (auto s : shots)
    if (s < 1) throw ConfigError("shots: every shot count must be >= 1");
  if (k_max < 1) throw ConfigError("k_max: must be >= 1");
  if (targets < 1) throw ConfigError("targets: must be >= 1");
  if (runs < 1) throw ConfigError("runs: must be >= 1");
  try {
    gains.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("gain: ") + e.what());
  }
  try {
    simplex.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("simplex: ") + e.what());
  }
  if (mode == Mode::unitary) unitary.validate();
}

EstimationConfig ExperimentConfig::estimation(std::uint64_t n_shots) const {
  EstimationConfig e;
  e.d = d;
  e.shots = n_shots;
  e.k_max = k_max;
  e.gains = gains;
  e.simplex = simplex;
  e.mle_enabled = mle_enabled;
  e.noiseless = noiseless;
  return e;
}

const ResultsRow* ResultsTable::find(std::uint64_t shots, const std::string& variant,
                                     std::uint64_t k) const {
  for (const auto& r : rows)
    if (r.shots == shots && r.k == k && r.variant == variant) return &r;
  return nullptr;
}

ResultsTable run_state_experiment(const ExperimentConfig& config) {
  if (config.mode != Mode::state) throw ConfigError("mode: run_state_experiment needs mode = state");
  config.validate();

  std::vector<AmplitudeVector> targets;
  for (std::uint64_t i = 0; i < config.targets; ++i) {
    RngStream rng = target_stream(config, i);
    targets.push_back(haar_random_state(config.d, rng));
  }

  ResultsTable table;
  const std::uint64_t cells = config.targets * config.runs;
  for (std::size_t s = 0; s < config.shots.size(); ++s) {
    const EstimationConfig est = config.estimation(config.shots[s]);
    std::vector<double> errors(cells * config.k_max);
    std::vector<std::uint64_t> restarts(cells), preparations(cells);
    parallel_for(cells, config.threads, [&](std::size_t cell) {
      const std::uint64_t i = cell / config.runs, j = cell % config.runs;
      RngStream rng = run_stream(config, s, i, j);
      const EstimationTrajectory traj = estimate_state(targets[i], est, rng);
      for (std::uint64_t k = 0; k < config.k_max; ++k) errors[cell * config.k_max + k] = traj.points[k].se;
      restarts[cell] = traj.restarts;
      preparations[cell] = traj.preparations;
    });
    append_rows(table, config, config.shots[s], "raw", errors);
    for (std::uint64_t c = 0; c < cells; ++c) {
      table.diagnostics.restarts += restarts[c];
      table.diagnostics.preparations += preparations[c];
    }
  }
  return table;
}

ResultsTable run_unitary_experiment(const ExperimentConfig& config) {
  if (config.mode != Mode::unitary) throw ConfigError("mode: run_unitary_experiment needs mode = unitary");
  config.validate();

  std::vector<ComplexMatrix> targets;
  for (std::uint64_t i = 0; i < config.targets; ++i) {
    RngStream rng = target_stream(config, i);
    targets.push_back(haar_random_unitary(config.d, rng));
  }

  const bool has_post = config.unitary.post_processing != PostProcessing::none;
  ResultsTable table;
  const std::uint64_t cells = config.targets * config.runs;
  for (std::size_t s = 0; s < config.shots.size(); ++s) {
    const EstimationConfig est = config.estimation(config.shots[s]);
    std::vector<double> raw(cells * config.k_max), post(cells * config.k_max);
    std::vector<std::uint64_t> restarts(cells), fallbacks(cells);
    std::vector<double> defect(cells, 0.0);
    parallel_for(cells, config.threads, [&](std::size_t cell) {
      const std::uint64_t i = cell / config.runs, j = cell % config.runs;
      RngStream rng = run_stream(config, s, i, j);
      const UnitaryTrajectory traj = estimate_unitary(targets[i], est, config.unitary, rng);
      for (std::uint64_t k = 0; k < config.k_max; ++k) {
        const UnitaryPoint& p = traj.points[k];
        raw[cell * config.k_max + k] = p.hs_raw;
        post[cell * config.k_max + k] = p.hs_post;
        if (has_post && !p.post_fallback) defect[cell] = std::max(defect[cell], unitarity_defect(p.post));
      }
      restarts[cell] = traj.restarts;
      fallbacks[cell] = traj.fallbacks;
    });
    append_rows(table, config, config.shots[s], "raw", raw);
    if (has_post) append_rows(table, config, config.shots[s], to_string(config.unitary.post_processing), post);
    for (std::uint64_t c = 0; c < cells; ++c) {
      table.diagnostics.restarts += restarts[c];
      table.diagnostics.fallbacks += fallbacks[c];
      table.diagnostics.max_unitarity_defect = std::max(table.diagnostics.max_unitarity_defect, defect[c]);
      if (!config.noiseless)
        table.diagnostics.preparations +=
            static_cast<std::uint64_t>(config.d) * total_copies(config.shots[s], config.k_max);
    }
  }
  return table;
}

ResultsTable run_experiment(const ExperimentConfig& config) {
  return config.mode == Mode::state ? run_state_experiment(config) : run_unitary_experiment(config);
}

std::vector<FitReportEntry> fit_report(const ResultsTable& table,
                                       const std::vector<IterationWindow>& windows) {
  // Series keyed by (N, variant), in order of first appearance.
  std::vector<std::pair<std::uint64_t, std::string>> keys;
  std::map<std::pair<std::uint64_t, std::string>, std::vector<FitPoint>> series;
  std::map<std::pair<std::uint64_t, std::string>, const ResultsRow*> exemplar;
  for (const auto& row : table.rows) {
    auto key = std::make_pair(row.shots, row.variant);
    if (!series.count(key)) {
      keys.push_back(key);
      exemplar[key] = &row;
    }
    series[key].push_back({row.k, 2.0 * static_cast<double>(row.k) * static_cast<double>(row.shots),
                           row.mean_mse});
  }

  std::vector<FitReportEntry> report;
  for (const auto& key : keys) {
    const auto& pts = series[key];
    std::uint64_t k_lo = pts.front().k, k_hi = pts.front().k;
    for (const auto& p : pts) {
      k_lo = std::min(k_lo, p.k);
      k_hi = std::max(k_hi, p.k);
    }
    for (const auto& w : windows) {
      if (w.lo < k_lo || w.hi > k_hi || w.lo >= w.hi)
        throw RangeError("fit window " + std::to_string(w.lo) + ":" + std::to_string(w.hi) +
                         " lies outside the data range " + std::to_string(k_lo) + ":" +
                         std::to_string(k_hi));
      const ResultsRow& ex = *exemplar[key];
      report.push_back({ex.mode, ex.d, key.first, key.second, power_law_fit(pts, w)});
    }
  }
  return report;
}

const char* const kCsvHeader =
    "mode,d,N,k,N_T,variant,mean_mse,median_mse,q1,q3,gm_benchmark,samples";

void write_csv(const ResultsTable& table, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : table.rows) {
    out << to_string(r.mode) << ',' << r.d << ',' << r.shots << ',' << r.k << ',' << r.n_total << ','
        << r.variant << ',' << format_double(r.mean_mse) << ',' << format_double(r.median_mse) << ','
        << format_double(r.q1) << ',' << format_double(r.q3) << ',' << format_double(r.gm_benchmark)
        << ',' << r.samples << '\n';
  }
}

void emit_csv(const ResultsTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(table, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

ResultsTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw InvalidData("CSV header does not match the results schema");
  ResultsTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 12) throw InvalidData("CSV line " + std::to_string(line_no) + ": expected 12 fields");
    try {
      ResultsRow r;
      if (f[0] == "state")
        r.mode = Mode::state;
      else if (f[0] == "unitary")
        r.mode = Mode::unitary;
      else
        throw InvalidData("unknown mode '" + f[0] + "'");
      r.d = std::stoi(f[1]);
      r.shots = std::stoull(f[2]);
      r.k = std::stoull(f[3]);
      r.n_total = std::stoull(f[4]);
      r.variant = f[5];
      r.mean_mse = std::stod(f[6]);
      r.median_mse = std::stod(f[7]);
      r.q1 = std::stod(f[8]);
      r.q3 = std::stod(f[9]);
      r.gm_benchmark = std::stod(f[10]);
      r.samples = std::stoull(f[11]);
      table.rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw InvalidData("CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

ResultsTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_csv(in);
}

}  // namespace qmse
