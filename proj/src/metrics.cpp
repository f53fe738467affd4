#include "qmse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmse/errors.hpp"

namespace qmse {

double gill_massar_mse(int d, std::uint64_t n_total) {
  if (d < 2) throw InvalidDimension("gill_massar_mse: d must be >= 2");
  if (n_total < 1) throw InvalidData("gill_massar_mse: N_T must be >= 1");
  return static_cast<double>(d - 1) / static_cast<double>(n_total);
}

double mse_over_estimates(const AmplitudeVector& target, std::span<const AmplitudeVector> estimates) {
  if (estimates.empty()) throw EmptyData("mse_over_estimates: no estimates");
  double sum = 0.0;
  for (const auto& e : estimates) sum += squared_error(target, e);
  return sum / static_cast<double>(estimates.size());
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyData("quantile: empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SampleStatistics summary_statistics(std::span<const double> values) {
  if (values.empty()) throw EmptyData("summary_statistics: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SampleStatistics s;
  s.count = sorted.size();
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
  s.median = quantile_sorted(sorted, 0.5);
  s.q1 = quantile_sorted(sorted, 0.25);
  s.q3 = quantile_sorted(sorted, 0.75);
  return s;
}

double standard_error(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

PowerLawFit power_law_fit(std::span<const FitPoint> points, IterationWindow window) {
  if (window.lo >= window.hi)
    throw InvalidData("power_law_fit: window [" + std::to_string(window.lo) + ", " +
                      std::to_string(window.hi) + "] is empty");
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (p.k < window.lo || p.k > window.hi) continue;
    if (!(p.n_total > 0.0) || !(p.mse > 0.0))
      throw InvalidData("power_law_fit: nonpositive value at k = " + std::to_string(p.k));
    xs.push_back(std::log(p.n_total));
    ys.push_back(std::log(p.mse));
  }
  if (xs.size() < 3) throw InvalidData("power_law_fit: need at least 3 points in the window");

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidData("power_law_fit: all N_T values coincide");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  PowerLawFit fit;
  fit.p = std::exp(intercept);
  fit.a = -slope;
  fit.window = window;
  fit.residual = std::sqrt(ss / n);
  fit.points = xs.size();
  return fit;
}

double predicted_unitary_mse(int d, double alpha, double n_total_star) {
  if (d < 2) throw InvalidDimension("predicted_unitary_mse: d must be >= 2");
  const double dd = static_cast<double>(d);
  return dd * dd * (2.0 * dd + alpha) / n_total_star;
}

}  // namespace qmse
