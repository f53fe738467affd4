#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qmse/interferometer.hpp"

namespace qmse {

/// One likelihood term: a probe setting and the (possibly fractional) number
/// of clicks at each of the 2d detectors. Sampled records give integer
/// weights; noiseless runs store expected counts shots * p.
struct LogEntry {
  AmplitudeVector probe;
  Eigen::VectorXd weight_plus;
  Eigen::VectorXd weight_minus;
  std::uint64_t shots = 0;
};

/// Append-only log of every measurement made during one estimation run.
class DataLog {
 public:
  explicit DataLog(int dimension);

  void append(const MeasurementRecord& record);
  /// Noiseless limit of `append`: stores shots * p for every outcome.
  void append_expected(const AmplitudeVector& probe, const OutcomeDistribution& dist,
                       std::uint64_t shots);

  int dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t total_shots() const { return total_shots_; }
  const std::vector<LogEntry>& entries() const { return entries_; }

  /// Log-likelihood of a unit-norm candidate given as d contiguous values.
  double log_likelihood_unit(const Complex* candidate) const;

 private:
  void push(const AmplitudeVector& probe, const Eigen::VectorXd& plus, const Eigen::VectorXd& minus,
            std::uint64_t shots);

  int dimension_;
  std::uint64_t total_shots_ = 0;
  std::vector<LogEntry> entries_;
  // Flattened copies of the entries, laid out entry-major, for the hot loop.
  std::vector<Complex> probes_;
  std::vector<double> plus_;
  std::vector<double> minus_;
};

struct SimplexOptions {
  std::uint64_t max_evaluations = 0;  // 0 selects 200 * (number of parameters)
  double x_tolerance = 1e-8;
  double f_tolerance = 1e-10;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_step = 0.05;

  /// Throws ContractViolation if a coefficient is outside its admissible range.
  void validate() const;
  std::uint64_t budget(std::size_t n) const { return max_evaluations ? max_evaluations : 200 * n; }
};

struct SimplexResult {
  Eigen::VectorXd point;
  double value = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead search for a maximum of `objective`. The returned value is
/// never below objective(start). Throws InvalidStart if objective(start) is
/// not finite.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, const SimplexOptions& opts);

/// Sum over entries and outcomes of counts * ln p, with p from
/// outcome_probabilities(normalize(candidate), probe). Zero-count outcomes
/// contribute nothing; observed outcomes use max(p, 1e-300).
double log_likelihood(const AmplitudeVector& candidate, const DataLog& log);

/// Maximum-likelihood refinement of `start` over the full log. Candidates are
/// parametrized by the 2d real and imaginary parts and normalized inside the
/// objective, so the phase relative to the probes is estimated too.
AmplitudeVector refine(const AmplitudeVector& start, const DataLog& log, const SimplexOptions& opts);

}  // namespace qmse
