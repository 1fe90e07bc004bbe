#include "prm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace prm::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("standard deviation needs at least two samples");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double kolmogorov_q(double lambda) noexcept {
  if (lambda < 1e-3) return 1.0;
  // Below ~0.2 the alternating series converges slowly; use the Jacobi theta form of 1 - Q.
  if (lambda < 1.18) {
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
    double sum = 0.0;
    for (int j = 1; j <= 40; j += 2) sum += std::pow(y, j * j);
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic(std::span<const double> xs, double mu, double sd) {
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf((sorted[i] - mu) / sd);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

TestReport ks_normal_test(std::span<const double> xs) {
  if (xs.size() < 8) throw std::invalid_argument("K-S normality test needs at least 8 samples");
  const double mu = mean(xs);
  const double sd = sample_std(xs);
  if (!(sd > 0.0)) throw std::invalid_argument("K-S normality test on a zero-variance sample");
  const double d = ks_statistic(xs, mu, sd);
  const double rn = std::sqrt(static_cast<double>(xs.size()));
  const double p = kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
  return TestReport{d, p, p < kAlpha, true};
}

TestReport z_test_greater(std::span<const double> a, std::span<const double> b) {
  const double va = sample_std(a) * sample_std(a) / static_cast<double>(a.size());
  const double vb = sample_std(b) * sample_std(b) / static_cast<double>(b.size());
  const double se = std::sqrt(va + vb);
  if (!(se > 0.0)) throw std::invalid_argument("Z-test on samples with zero variance");
  const double z = (mean(a) - mean(b)) / se;
  const double p = normal_cdf(-z);
  return TestReport{z, p, p < kAlpha, a.size() >= 30 && b.size() >= 30};
}

TestReport z_test_positive_mean(std::span<const double> d) {
  const double se = sample_std(d) / std::sqrt(static_cast<double>(d.size()));
  if (!(se > 0.0)) throw std::invalid_argument("Z-test on a zero-variance sample");
  const double z = mean(d) / se;
  const double p = normal_cdf(-z);
  return TestReport{z, p, p < kAlpha, d.size() >= 30};
}

double silverman_bandwidth(std::span<const double> xs) {
  const double sd = sample_std(xs);
  if (!(sd > 0.0)) throw std::invalid_argument("KDE of a zero-variance sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(xs.size()), -0.2);
}

std::vector<std::pair<double, double>> kde_points(std::span<const double> xs, std::size_t n_points) {
  if (n_points < 2) throw std::invalid_argument("KDE needs at least two evaluation points");
  const double h = silverman_bandwidth(xs);
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;
  const double norm = 1.0 / (static_cast<double>(xs.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<std::pair<double, double>> out;
  out.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
    double acc = 0.0;
    for (double xi : xs) {
      const double u = (x - xi) / h;
      acc += std::exp(-0.5 * u * u);
    }
    out.emplace_back(x, acc * norm);
  }
  return out;
}

} // namespace prm::stats
