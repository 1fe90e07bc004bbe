#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace prm::stats {

inline constexpr double kAlpha = 0.05;

struct TestReport {
  double statistic{0.0};
  double p_value{1.0};
  bool reject{false};        // p < alpha
  bool large_sample{true};   // every sample had n >= 30 (Z-tests only)
};

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator).
double sample_std(std::span<const double> xs);
/// Linear-interpolation quantile on sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

double normal_cdf(double z) noexcept;

/// Kolmogorov survival function Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda) noexcept;

/// sup_x |F_emp(x) - Phi((x - mean) / sd)|, checked on both sides of every sample point.
double ks_statistic(std::span<const double> xs, double mu, double sd);

/// One-sample K-S normality test with the sample mean and standard deviation
/// plugged in. The p-value uses the asymptotic Kolmogorov distribution at
/// (sqrt(n) + 0.12 + 0.11 / sqrt(n)) D. With estimated parameters this test is
/// conservative. Requires n >= 8 and a non-zero spread.
TestReport ks_normal_test(std::span<const double> xs);

/// One-sided two-sample Z-test, H0: E[a] <= E[b], unpooled variances.
TestReport z_test_greater(std::span<const double> a, std::span<const double> b);

/// One-sided one-sample Z-test, H0: E[d] <= 0.
TestReport z_test_positive_mean(std::span<const double> d);

/// Silverman's rule: 0.9 min(sd, IQR / 1.34) n^(-1/5). Falls back to sd when the IQR is zero.
double silverman_bandwidth(std::span<const double> xs);

/// Gaussian KDE on n_points evenly spaced over [min - 3h, max + 3h].
std::vector<std::pair<double, double>> kde_points(std::span<const double> xs, std::size_t n_points);

} // namespace prm::stats
