#include "qmse/interferometer.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qmse/errors.hpp"

namespace qmse {
namespace {

constexpr double kInputNormTolerance = 1e-9;

void check_inputs(const AmplitudeVector& z, const AmplitudeVector& probe) {
  if (z.size() != probe.size())
    throw DimensionError("interferometer: state has dimension " + std::to_string(z.size()) +
                         ", probe has " + std::to_string(probe.size()));
  if (!is_normalized(z, kInputNormTolerance))
    throw ContractViolation("interferometer: unknown state is not normalized");
  if (!is_normalized(probe, kInputNormTolerance))
    throw ContractViolation("interferometer: probe state is not normalized");
}

}  // namespace

std::uint64_t MeasurementRecord::minus_clicks() const {
  return std::accumulate(counts_minus.begin(), counts_minus.end(), std::uint64_t{0});
}

OutcomeDistribution outcome_probabilities(const AmplitudeVector& z, const AmplitudeVector& probe) {
  check_inputs(z, probe);
  OutcomeDistribution dist;
  dist.plus = (z + probe).cwiseAbs2() / 4.0;
  dist.minus = (z - probe).cwiseAbs2() / 4.0;
  return dist;
}

MeasurementRecord sample_record(const AmplitudeVector& z, const AmplitudeVector& probe,
                                std::uint64_t shots, RngStream& rng) {
  if (shots == 0) throw EmptyEnsemble("sample_record: an ensemble needs at least one copy");
  const OutcomeDistribution dist = outcome_probabilities(z, probe);
  const auto d = static_cast<std::size_t>(z.size());

  MeasurementRecord record;
  record.probe = probe;
  record.shots = shots;
  record.counts_plus.assign(d, 0);
  record.counts_minus.assign(d, 0);

  // Multinomial as a chain of conditional binomials over the 2d outcomes.
  std::uint64_t remaining = shots;
  double mass_left = dist.plus.sum() + dist.minus.sum();
  auto draw = [&](double p) -> std::uint64_t {
    if (remaining == 0 || mass_left <= 0.0) return 0;
    const double conditional = std::min(1.0, p / mass_left);
    const std::uint64_t c = rng.binomial(remaining, conditional);
    remaining -= c;
    mass_left -= p;
    return c;
  };
  for (std::size_t k = 0; k < d; ++k) record.counts_plus[k] = draw(dist.plus(k));
  for (std::size_t k = 0; k + 1 < d; ++k) record.counts_minus[k] = draw(dist.minus(k));
  // Last outcome takes whatever is left, unless it has zero probability (the
  // leftover is then rounding noise and goes to the most likely detector).
  if (dist.minus(d - 1) > 0.0) {
    record.counts_minus[d - 1] = remaining;
  } else if (remaining > 0) {
    Eigen::Index best = 0;
    dist.plus.maxCoeff(&best);
    record.counts_plus[static_cast<std::size_t>(best)] += remaining;
  }
  return record;
}

double estimate_se(const MeasurementRecord& record) {
  if (record.shots == 0) throw EmptyEnsemble("estimate_se: record has no shots");
  return 4.0 * static_cast<double>(record.minus_clicks()) / static_cast<double>(record.shots);
}

double exact_se_oracle(const AmplitudeVector& z, const AmplitudeVector& probe) {
  return 4.0 * outcome_probabilities(z, probe).minus_total();
}

}  // namespace qmse
