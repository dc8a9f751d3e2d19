#include "qtopo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qtopo {

std::string_view to_string(Trend trend) {
  switch (trend) {
    case Trend::Increasing: return "increasing";
    case Trend::Decreasing: return "decreasing";
    case Trend::NoTrend: return "no_trend";
  }
  return "no_trend";
}

TrendResult mann_kendall(std::span<const double> series, double critical) {
  const std::size_t n = series.size();
  if (n < 4) throw std::invalid_argument("Mann-Kendall needs at least 4 points");
  TrendResult r;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      r.s += (series[j] > series[i]) - (series[j] < series[i]);
    }
  }
  std::map<double, double> ties;
  for (double x : series) ties[x] += 1;
  const double nn = static_cast<double>(n);
  double var = nn * (nn - 1) * (2 * nn + 5);
  for (const auto& [value, t] : ties) var -= t * (t - 1) * (2 * t + 5);
  r.variance = var / 18;
  if (r.s > 0) {
    r.z = (r.s - 1) / std::sqrt(r.variance);
  } else if (r.s < 0) {
    r.z = (r.s + 1) / std::sqrt(r.variance);
  }
  if (r.z > critical) {
    r.verdict = Trend::Increasing;
  } else if (r.z < -critical) {
    r.verdict = Trend::Decreasing;
  }
  return r;
}

Interval confidence_interval(std::span<const double> samples, double z) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("confidence interval needs at least 2 samples");
  double mean = 0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double half = z * std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  return {mean, mean - half, mean + half};
}

double linreg_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("xs and ys differ in length");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("regression needs at least 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("regression needs two distinct xs");
  return sxy / sxx;
}

Histogram histogram(std::span<const double> values, std::size_t bins, double upper) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  if (upper <= 0) {
    for (double v : values) upper = std::max(upper, v);
    if (upper <= 0) upper = 1;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = upper * static_cast<double>(i) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (double v : values) {
    const double pos = v / upper * static_cast<double>(bins);
    const auto bin = pos <= 0 ? std::size_t{0} : std::min(static_cast<std::size_t>(pos), bins - 1);
    ++h.counts[bin];
  }
  return h;
}

}  // namespace qtopo
