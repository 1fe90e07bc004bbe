#include "prm/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <stdexcept>
#include <string>

namespace prm::gp {

double kernel(double a, double b) noexcept {
  const double d = a - b;
  return std::exp(-0.5 * d * d);
}

long double kernel_ld(double a, double b) noexcept {
  const long double d = static_cast<long double>(a) - b;
  return std::exp(-0.5L * d * d);
}

std::vector<double> normalize(std::span<const double> raw) {
  std::vector<double> out(raw.size(), 0.0);
  if (raw.size() < 2) return out;
  const double n = static_cast<double>(raw.size());
  const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : raw) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - mean) / sd;
  return out;
}

const std::vector<double>& strategy_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g(kGridPoints);
    const int half = static_cast<int>(kGridPoints / 2);
    for (std::size_t j = 0; j < kGridPoints; ++j) {
      g[j] = static_cast<double>(static_cast<int>(j) - half) / half;
    }
    return g;
  }();
  return grid;
}

void CholeskyFactor::append(double s) {
  const std::size_t n = points_.size();
  std::vector<double> row(n + 1);
  for (std::size_t j = 0; j < n; ++j) row[j] = kernel(points_[j], s);
  std::vector<long double> gram_row(n + 1);
  for (std::size_t j = 0; j < n; ++j) gram_row[j] = kernel_ld(points_[j], s);
  gram_row[n] = 1.0L + shift_;
  // Forward substitution against the existing factor.
  for (std::size_t j = 0; j < n; ++j) {
    double acc = row[j];
    const auto& rj = rows_[j];
    for (std::size_t m = 0; m < j; ++m) acc -= rj[m] * row[m];
    row[j] = acc / rj[j];
  }
  double pivot = 1.0 + shift_;
  for (std::size_t j = 0; j < n; ++j) pivot -= row[j] * row[j];
  if (!(pivot > 0.0)) {
    throw std::runtime_error("GP kernel system became singular; observations are corrupted");
  }
  row[n] = std::sqrt(pivot);
  rows_.push_back(std::move(row));
  gram_.push_back(std::move(gram_row));
  points_.push_back(s);
}

void CholeskyFactor::remove_front() {
  if (points_.empty()) return;
  const std::size_t n = points_.size();
  // x = L[1:, 0]; the trailing block becomes chol(L22 L22^T + x x^T).
  std::vector<double> x(n - 1);
  for (std::size_t i = 1; i < n; ++i) x[i - 1] = rows_[i][0];
  rows_.erase(rows_.begin());
  gram_.erase(gram_.begin());
  points_.erase(points_.begin());
  for (auto& row : rows_) row.erase(row.begin());
  for (auto& row : gram_) row.erase(row.begin());

  const std::size_t m = n - 1;
  for (std::size_t k = 0; k < m; ++k) {
    const double lkk = rows_[k][k];
    const double r = std::hypot(lkk, x[k]);
    const double c = r / lkk;
    const double sn = x[k] / lkk;
    rows_[k][k] = r;
    for (std::size_t i = k + 1; i < m; ++i) {
      rows_[i][k] = (rows_[i][k] + sn * x[i]) / c;
      x[i] = c * x[i] - sn * rows_[i][k];
    }
  }
}

void CholeskyFactor::forward_in_place(std::span<double> b) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& ri = rows_[i];
    double acc = b[i];
    for (std::size_t j = 0; j < i; ++j) acc -= ri[j] * b[j];
    b[i] = acc / ri[i];
  }
}

void CholeskyFactor::solve_in_place(std::span<double> b) const {
  forward_in_place(b);
  for (std::size_t ii = rows_.size(); ii-- > 0;) {
    double acc = b[ii];
    for (std::size_t j = ii + 1; j < rows_.size(); ++j) acc -= rows_[j][ii] * b[j];
    b[ii] = acc / rows_[ii][ii];
  }
}

void CholeskyFactor::refined_solve(std::span<const long double> rhs, std::span<double> x) const {
  const std::size_t n = rows_.size();
  std::copy(rhs.begin(), rhs.end(), x.begin());
  solve_in_place(x);
  std::vector<long double> r(n);
  std::vector<double> correction(n);
  for (int step = 0; step < 2; ++step) {
    std::copy(rhs.begin(), rhs.end(), r.begin());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& gi = gram_[i];
      for (std::size_t j = 0; j < i; ++j) {
        r[i] -= gi[j] * x[j];
        r[j] -= gi[j] * x[i];
      }
      r[i] -= gi[i] * x[i];
    }
    std::copy(r.begin(), r.end(), correction.begin());
    solve_in_place(correction);
    for (std::size_t i = 0; i < n; ++i) x[i] += correction[i];
  }
}

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string("non-finite GP ") + what);
  }
}

Posterior evaluate(const CholeskyFactor& factor, std::span<const double> alpha,
                   std::span<const double> queries, bool with_variance) {
  const auto& pts = factor.points();
  Posterior out;
  out.mean.resize(queries.size(), 0.0);
  out.variance.resize(queries.size(), 1.0);
  if (pts.empty()) return out;
  std::vector<long double> kstar(pts.size());
  std::vector<double> v(pts.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    long double mu = 0.0L;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      kstar[j] = kernel_ld(queries[q], pts[j]);
      mu += kstar[j] * alpha[j];
    }
    out.mean[q] = static_cast<double>(mu);
    if (with_variance) {
      factor.refined_solve(kstar, v);
      long double reduction = 0.0L;
      for (std::size_t j = 0; j < v.size(); ++j) reduction += kstar[j] * v[j];
      out.variance[q] = std::max(0.0, static_cast<double>(1.0L - reduction));
    }
  }
  return out;
}

} // namespace

Posterior posterior(const Observations& obs, std::span<const double> queries, double noise,
                    double jitter) {
  if (obs.s.size() != obs.y.size()) throw std::invalid_argument("GP observation lists differ in length");
  if (!(noise >= 0.0)) throw std::invalid_argument("GP noise variance must be >= 0");
  require_finite(obs.s, "strategy");
  require_finite(obs.y, "target");
  require_finite(queries, "query");
  CholeskyFactor factor(noise + jitter);
  for (double s : obs.s) factor.append(s);
  const std::vector<long double> rhs(obs.y.begin(), obs.y.end());
  std::vector<double> alpha(rhs.size());
  factor.refined_solve(rhs, alpha);
  return evaluate(factor, alpha, queries, true);
}

GaussianProcess::GaussianProcess(GpOptions opts) : opts_(opts), factor_(opts.noise + opts.jitter) {
  if (!(opts_.noise >= 0.0)) throw std::invalid_argument("GP noise variance must be >= 0");
  if (opts_.capacity < 1) throw std::invalid_argument("GP capacity must be >= 1");
}

void GaussianProcess::add(double s, double pps) {
  if (!std::isfinite(s) || !std::isfinite(pps)) throw std::invalid_argument("non-finite GP observation");
  if (raw_.size() >= opts_.capacity) {
    factor_.remove_front();
    raw_.erase(raw_.begin());
  }
  factor_.append(s);
  raw_.push_back(pps);
  refresh_weights();
}

void GaussianProcess::refresh_weights() {
  y_ = normalize(raw_);
  const std::vector<long double> rhs(y_.begin(), y_.end());
  alpha_.resize(rhs.size());
  factor_.refined_solve(rhs, alpha_);
}

Posterior GaussianProcess::posterior(std::span<const double> queries, bool with_variance) const {
  require_finite(queries, "query");
  return evaluate(factor_, alpha_, queries, with_variance);
}

PosteriorGrid GaussianProcess::posterior_grid(bool with_variance) const {
  const auto& grid = strategy_grid();
  auto post = posterior(grid, with_variance);
  return PosteriorGrid{grid, std::move(post.mean), std::move(post.variance)};
}

double acquire(const PosteriorGrid& post, double tau, Rng& rng) {
  tau = std::clamp(tau, 0.0, 1.0);
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < post.grid.size(); ++j) {
    double score = post.mean[j];
    if (tau > 0.0) score += tau * std::sqrt(post.variance[j]) * rng.normal();
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return post.grid[best];
}

} // namespace prm::gp
