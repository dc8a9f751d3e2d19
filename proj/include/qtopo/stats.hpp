#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qtopo {

enum class Trend { Increasing, Decreasing, NoTrend };

std::string_view to_string(Trend trend);

struct TrendResult {
  double s = 0;         // sum of pairwise signs
  double variance = 0;  // tie-corrected variance of s
  double z = 0;         // continuity-corrected statistic
  Trend verdict = Trend::NoTrend;
};

/// Mann-Kendall trend test. `critical` is the two-sided normal quantile
/// (1.96 for alpha = 0.05). Throws std::invalid_argument below 4 points.
TrendResult mann_kendall(std::span<const double> series, double critical = 1.96);

struct Interval {
  double mean = 0;
  double lo = 0;
  double hi = 0;
};

/// Normal-approximation interval mean +- z * s / sqrt(n) with the sample
/// standard deviation. Throws below 2 samples.
Interval confidence_interval(std::span<const double> samples, double z = 1.96);

/// Ordinary least-squares slope. Throws when fewer than two distinct xs.
double linreg_slope(std::span<const double> xs, std::span<const double> ys);

struct Histogram {
  std::vector<double> edges;  // bins + 1 values
  std::vector<std::size_t> counts;
};

/// Fixed-width bins over [0, upper]; upper defaults to the largest value
/// (1 when that is not positive). The last bin is closed. Values outside
/// the range are clamped into the end bins.
Histogram histogram(std::span<const double> values, std::size_t bins = 20, double upper = 0);

}  // namespace qtopo
