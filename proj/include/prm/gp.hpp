#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "prm/rng.hpp"

namespace prm::gp {

inline constexpr std::size_t kGridPoints = 201;

/// Gaussian kernel with unit length-scale: exp(-(a - b)^2 / 2).
double kernel(double a, double b) noexcept;

/// Mean-variance normalization with population std. A single element or a
/// zero-variance list maps to all zeros.
std::vector<double> normalize(std::span<const double> raw);

/// 201 evenly spaced strategies on [-1, 1].
const std::vector<double>& strategy_grid();

struct GpOptions {
  double noise{0.1};         // observation noise variance added to the kernel diagonal
  std::size_t capacity{200}; // FIFO eviction beyond this many observations
  double jitter{1e-6};
};

/// Observed strategies with their normalized targets (zero prior mean).
struct Observations {
  std::vector<double> s;
  std::vector<double> y;
};

struct Posterior {
  std::vector<double> mean;
  std::vector<double> variance;
};

struct PosteriorGrid {
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> variance;
};

/// Lower Cholesky factor of K(s, s) + (noise + jitter) I, maintained one
/// observation at a time.
class CholeskyFactor {
public:
  CholeskyFactor(double diagonal_shift) : shift_(diagonal_shift) {}

  /// Appends a row for a new point. Throws std::runtime_error if the pivot is not positive.
  void append(double s);
  /// Drops the oldest point (rank-one update of the trailing block).
  void remove_front();

  /// Solves (L L^T) x = b in place.
  void solve_in_place(std::span<double> b) const;
  /// Solves L x = b in place.
  void forward_in_place(std::span<double> b) const;
  /// Solves the system into x, refining twice against the kernel matrix
  /// held in extended precision.
  void refined_solve(std::span<const long double> rhs, std::span<double> x) const;

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }

private:
  double shift_;
  std::vector<double> points_;
  std::vector<std::vector<double>> rows_;  // row i holds L[i][0..i]
  std::vector<std::vector<long double>> gram_;  // row i holds K[i][0..i], shift included
};

/// Posterior mean and marginal variance at the queries, solved from scratch.
/// Empty observations give the prior (0, 1). Throws std::invalid_argument on
/// non-finite or inconsistent input.
Posterior posterior(const Observations& obs, std::span<const double> queries, double noise,
                    double jitter = 1e-6);

/// A GP over normalized pps keyed by strategy, updated incrementally.
class GaussianProcess {
public:
  explicit GaussianProcess(GpOptions opts = {});

  /// Appends (s, pps); evicts the oldest beyond capacity and re-normalizes
  /// the retained raw pps.
  void add(double s, double pps);

  [[nodiscard]] std::size_t size() const noexcept { return raw_.size(); }
  [[nodiscard]] bool empty() const noexcept { return raw_.empty(); }
  [[nodiscard]] const std::vector<double>& strategies() const noexcept { return factor_.points(); }
  [[nodiscard]] const std::vector<double>& raw_pps() const noexcept { return raw_; }
  [[nodiscard]] const std::vector<double>& targets() const noexcept { return y_; }
  [[nodiscard]] const GpOptions& options() const noexcept { return opts_; }

  [[nodiscard]] Posterior posterior(std::span<const double> queries, bool with_variance = true) const;
  [[nodiscard]] PosteriorGrid posterior_grid(bool with_variance = true) const;

private:
  void refresh_weights();

  GpOptions opts_;
  CholeskyFactor factor_;
  std::vector<double> raw_;
  std::vector<double> y_;
  std::vector<double> alpha_;  // (K + shift I)^{-1} y
};

/// Draws f_j ~ N(mu_j, sigma_j^2) independently per grid point, scores
/// mu + tau (f - mu) and returns the best grid strategy (ties to the lowest s).
/// tau = 0 is a pure argmax of the mean.
double acquire(const PosteriorGrid& post, double tau, Rng& rng);

} // namespace prm::gp
