#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmse/metrics.hpp"
#include "qmse/protocols.hpp"

namespace qmse {

enum class Mode { state, unitary };

const char* to_string(Mode mode);
const char* to_string(PostProcessing post);

/// Monte Carlo experiment over m Haar-random targets with n independent
/// estimation runs each, repeated for every shot count in `shots`.
struct ExperimentConfig {
  Mode mode = Mode::state;
  int d = 2;
  std::vector<std::uint64_t> shots{1000};
  std::uint64_t k_max = 100;
  std::uint64_t targets = 20;  // m
  std::uint64_t runs = 10;     // n
  std::uint64_t seed = 1;
  GainSchedule gains;
  SimplexOptions simplex;
  UnitaryEstimationOptions unitary;
  bool mle_enabled = true;
  bool noiseless = false;
  unsigned threads = 0;  // 0: one per hardware thread
  std::string output;    // empty: standard output

  /// Throws ConfigError naming the offending field.
  void validate() const;
  EstimationConfig estimation(std::uint64_t n_shots) const;
};

struct ResultsRow {
  Mode mode = Mode::state;
  int d = 0;
  std::uint64_t shots = 0;  // N
  std::uint64_t k = 0;
  std::uint64_t n_total = 0;  // N_T = 2 N k (per column in unitary mode)
  std::string variant;        // raw | closest | gs
  double mean_mse = 0.0;
  double median_mse = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double gm_benchmark = 0.0;  // gill_massar_mse(2d, N_T)
  std::uint64_t samples = 0;  // m * n
  double std_error = 0.0;     // of mean_mse across targets; not serialized
};

struct RunDiagnostics {
  std::uint64_t restarts = 0;
  std::uint64_t fallbacks = 0;
  std::uint64_t preparations = 0;
  /// Largest |U^H U - 1| entry over every post-processed unitary estimate.
  double max_unitarity_defect = 0.0;
};

struct ResultsTable {
  std::vector<ResultsRow> rows;
  RunDiagnostics diagnostics;

  /// Row for (N, variant, k) or nullptr.
  const ResultsRow* find(std::uint64_t shots, const std::string& variant, std::uint64_t k) const;
};

ResultsTable run_state_experiment(const ExperimentConfig& config);
ResultsTable run_unitary_experiment(const ExperimentConfig& config);
/// Dispatches on config.mode.
ResultsTable run_experiment(const ExperimentConfig& config);

struct FitReportEntry {
  Mode mode = Mode::state;
  int d = 0;
  std::uint64_t shots = 0;
  std::string variant;
  PowerLawFit fit;
};

/// Power-law fit of mean_mse against N_T = 2kN for every (N, variant) series
/// and window. Throws RangeError if a window reaches outside the table.
std::vector<FitReportEntry> fit_report(const ResultsTable& table,
                                       const std::vector<IterationWindow>& windows);

extern const char* const kCsvHeader;

void write_csv(const ResultsTable& table, std::ostream& out);
/// Overwrites `path`. Throws IoError mentioning the path on failure.
void emit_csv(const ResultsTable& table, const std::string& path);
ResultsTable read_csv(std::istream& in);
ResultsTable read_csv_file(const std::string& path);

/// Flat `key = value` format, '#' starts a comment. Keys are applied on top
/// of `base`; unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Parses "lo:hi".
IterationWindow parse_window(const std::string& text);

}  // namespace qmse
