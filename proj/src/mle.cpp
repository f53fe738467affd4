#include "qmse/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qmse/errors.hpp"

namespace qmse {
namespace {

constexpr double kProbabilityFloor = 1e-300;

}  // namespace

DataLog::DataLog(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw InvalidDimension("DataLog: dimension must be >= 1");
}

void DataLog::push(const AmplitudeVector& probe, const Eigen::VectorXd& plus,
                   const Eigen::VectorXd& minus, std::uint64_t shots) {
  if (probe.size() != dimension_ || plus.size() != dimension_ || minus.size() != dimension_)
    throw DimensionError("DataLog: entry dimension does not match log dimension " +
                         std::to_string(dimension_));
  entries_.push_back({probe, plus, minus, shots});
  total_shots_ += shots;
  for (int k = 0; k < dimension_; ++k) {
    probes_.push_back(probe(k));
    plus_.push_back(plus(k));
    minus_.push_back(minus(k));
  }
}

void DataLog::append(const MeasurementRecord& record) {
  Eigen::VectorXd plus(dimension_), minus(dimension_);
  if (record.counts_plus.size() != static_cast<std::size_t>(dimension_) ||
      record.counts_minus.size() != static_cast<std::size_t>(dimension_))
    throw DimensionError("DataLog: record has the wrong number of outcomes");
  for (int k = 0; k < dimension_; ++k) {
    plus(k) = static_cast<double>(record.counts_plus[static_cast<std::size_t>(k)]);
    minus(k) = static_cast<double>(record.counts_minus[static_cast<std::size_t>(k)]);
  }
  push(record.probe, plus, minus, record.shots);
}

void DataLog::append_expected(const AmplitudeVector& probe, const OutcomeDistribution& dist,
                              std::uint64_t shots) {
  const double n = static_cast<double>(shots);
  push(probe, dist.plus * n, dist.minus * n, shots);
}

double DataLog::log_likelihood_unit(const Complex* candidate) const {
  const std::size_t d = static_cast<std::size_t>(dimension_);
  double total = 0.0;
  for (std::size_t base = 0; base < probes_.size(); base += d) {
    for (std::size_t k = 0; k < d; ++k) {
      const Complex x = candidate[k];
      const Complex m = probes_[base + k];
      const double wp = plus_[base + k];
      const double wm = minus_[base + k];
      if (wp > 0.0) total += wp * std::log(std::max(std::norm(x + m) * 0.25, kProbabilityFloor));
      if (wm > 0.0) total += wm * std::log(std::max(std::norm(x - m) * 0.25, kProbabilityFloor));
    }
  }
  return total;
}

void SimplexOptions::validate() const {
  const bool ok = reflection > 0.0 && expansion > 1.0 && contraction > 0.0 && contraction < 1.0 &&
                  shrink > 0.0 && shrink < 1.0 && x_tolerance > 0.0 && f_tolerance > 0.0 &&
                  initial_step > 0.0;
  if (!ok) throw ContractViolation("SimplexOptions: coefficient or tolerance out of range");
}

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, const SimplexOptions& opts) {
  opts.validate();
  const auto n = static_cast<std::size_t>(start.size());
  const std::uint64_t budget = opts.budget(n);

  std::uint64_t evaluations = 0;
  // Minimize the negated objective; NaN counts as the worst possible value.
  auto cost = [&](const Eigen::VectorXd& x) {
    ++evaluations;
    const double v = objective(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  };

  const double start_cost = cost(start);
  if (!std::isfinite(start_cost)) throw InvalidStart("nelder_mead: objective not finite at start");

  std::vector<Eigen::VectorXd> x(n + 1, start);
  std::vector<double> h(n + 1, start_cost);
  for (std::size_t i = 0; i < n; ++i) {
    x[i + 1](static_cast<Eigen::Index>(i)) += opts.initial_step;
    h[i + 1] = cost(x[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });
    std::vector<Eigen::VectorXd> xs(n + 1);
    std::vector<double> hs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs[i] = std::move(x[order[i]]);
      hs[i] = h[order[i]];
    }
    x.swap(xs);
    h.swap(hs);
  };

  bool converged = false;
  Eigen::VectorXd centroid(static_cast<Eigen::Index>(n));
  while (true) {
    sort_simplex();
    double f_spread = 0.0;
    double x_spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      f_spread = std::max(f_spread, std::abs(h[i] - h[0]));
      x_spread = std::max(x_spread, (x[i] - x[0]).cwiseAbs().maxCoeff());
    }
    if (f_spread <= opts.f_tolerance && x_spread <= opts.x_tolerance) {
      converged = true;
      break;
    }
    if (evaluations >= budget) break;

    centroid.setZero();
    for (std::size_t i = 0; i < n; ++i) centroid += x[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + opts.reflection * (centroid - x[n]);
    const double hr = cost(xr);
    if (hr < h[0]) {
      Eigen::VectorXd xe = centroid + opts.expansion * (xr - centroid);
      const double he = cost(xe);
      if (he < hr) {
        x[n] = std::move(xe);
        h[n] = he;
      } else {
        x[n] = xr;
        h[n] = hr;
      }
      continue;
    }
    if (hr < h[n - 1]) {
      x[n] = xr;
      h[n] = hr;
      continue;
    }
    const bool outside = hr < h[n];
    Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + opts.contraction * (xr - centroid))
                                 : Eigen::VectorXd(centroid + opts.contraction * (x[n] - centroid));
    const double hc = cost(xc);
    if (hc < (outside ? hr : h[n])) {
      x[n] = std::move(xc);
      h[n] = hc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      x[i] = x[0] + opts.shrink * (x[i] - x[0]);
      h[i] = cost(x[i]);
    }
  }

  return {x[0], -h[0], evaluations, converged};
}

double log_likelihood(const AmplitudeVector& candidate, const DataLog& log) {
  if (log.empty()) throw EmptyData("log_likelihood: data log is empty");
  if (candidate.size() != log.dimension()) throw DimensionError("log_likelihood: dimension mismatch");
  const AmplitudeVector unit = normalize(candidate);
  return log.log_likelihood_unit(unit.data());
}

AmplitudeVector refine(const AmplitudeVector& start, const DataLog& log, const SimplexOptions& opts) {
  if (log.empty()) throw EmptyData("refine: data log is empty");
  const Eigen::Index d = log.dimension();
  if (start.size() != d) throw DimensionError("refine: dimension mismatch");
  const AmplitudeVector unit_start = normalize(start);

  Eigen::VectorXd x0(2 * d);
  x0.head(d) = unit_start.real();
  x0.tail(d) = unit_start.imag();

  std::vector<Complex> buffer(static_cast<std::size_t>(d));
  auto objective = [&](const Eigen::VectorXd& x) {
    const double norm = x.norm();
    if (!(norm > 0.0)) return -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < d; ++k)
      buffer[static_cast<std::size_t>(k)] = Complex(x(k), x(d + k)) / norm;
    return log.log_likelihood_unit(buffer.data());
  };

  const SimplexResult best = nelder_mead(objective, x0, opts);
  AmplitudeVector z(d);
  for (Eigen::Index k = 0; k < d; ++k) z(k) = Complex(best.point(k), best.point(d + k));
  return normalize(z);
}

}  // namespace qmse
