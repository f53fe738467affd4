#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmse/qudit.hpp"

namespace qmse {

/// Gill-Massar lower bound on the mean squared error of a pure qudit state
/// estimated from n_total copies with separable measurements: (d - 1) / N_T.
/// Throws InvalidDimension for d < 2.
double gill_massar_mse(int d, std::uint64_t n_total);

/// Mean of squared_error(target, e) over the estimates. Throws EmptyData.
double mse_over_estimates(const AmplitudeVector& target, std::span<const AmplitudeVector> estimates);

struct SampleStatistics {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::size_t count = 0;

  double iqr() const { return q3 - q1; }
};

/// Quantile with linear interpolation between order statistics at
/// h = (n - 1) q (the "inclusive" rule). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double q);

SampleStatistics summary_statistics(std::span<const double> values);

/// Standard error of the mean, s / sqrt(n) with the n - 1 sample variance.
double standard_error(std::span<const double> values);

struct IterationWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

struct FitPoint {
  std::uint64_t k = 0;
  double n_total = 0.0;  // N_T
  double mse = 0.0;
};

/// mse ~ p / N_T^a, fitted by least squares on ln(mse) = ln(p) - a ln(N_T)
/// over the points with k in [lo, hi]. `residual` is the RMS of the
/// log-space residuals.
struct PowerLawFit {
  double p = 0.0;
  double a = 0.0;
  IterationWindow window;
  double residual = 0.0;
  std::size_t points = 0;
};

/// Throws InvalidData for fewer than 3 points in the window or for
/// nonpositive values.
PowerLawFit power_law_fit(std::span<const FitPoint> points, IterationWindow window);

/// d^2 (2d + alpha) / N_T*, the expected unitary accuracy when every column
/// reaches (2d + alpha) / N_T.
double predicted_unitary_mse(int d, double alpha, double n_total_star);

}  // namespace qmse
