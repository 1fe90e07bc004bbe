#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "prm/gp.hpp"

using namespace prm;
using namespace prm::gp;

namespace {

Posterior eigen_posterior(const Observations& obs, const std::vector<double>& q, double noise, double jitter) {
  const auto n = static_cast<Eigen::Index>(obs.s.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(obs.s[static_cast<std::size_t>(i)], obs.s[static_cast<std::size_t>(j)]);
  }
  k.diagonal().array() += noise + jitter;
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(obs.y.data(), n);
  const auto lu = k.fullPivLu();
  const Eigen::VectorXd alpha = lu.solve(y);
  Posterior out;
  for (double x : q) {
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i) ks(i) = kernel(x, obs.s[static_cast<std::size_t>(i)]);
    out.mean.push_back(ks.dot(alpha));
    out.variance.push_back(1.0 - ks.dot(lu.solve(ks)));
  }
  return out;
}

} // namespace

TEST_CASE("kernel") {
  CHECK(kernel(0.3, 0.3) == 1.0);
  CHECK(kernel(0.0, 1.0) == doctest::Approx(0.60653).epsilon(1e-5));
  CHECK(kernel(-1.0, 1.0) == doctest::Approx(0.13534).epsilon(1e-4));
}

TEST_CASE("normalize") {
  const auto y = normalize(std::vector<double>{1, 2, 3});
  CHECK(y[0] == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(y[1] == doctest::Approx(0.0));
  CHECK(y[2] == doctest::Approx(1.2247).epsilon(1e-4));
  CHECK(normalize(std::vector<double>{5}) == std::vector<double>{0.0});
  CHECK(normalize(std::vector<double>{4, 4, 4}) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("posterior hand cases") {
  const std::vector<double> q{0.5};
  const auto prior = posterior(Observations{}, q, 0.1);
  CHECK(prior.mean[0] == 0.0);
  CHECK(prior.variance[0] == 1.0);

  const Observations one{{0.0}, {2.0}};
  const std::vector<double> at{0.0, 1.0};
  const auto p = posterior(one, at, 0.0, 0.0);
  CHECK(p.mean[0] == doctest::Approx(2.0));
  CHECK(p.variance[0] == doctest::Approx(0.0));
  CHECK(p.mean[1] == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-9));
  CHECK(p.variance[1] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("posterior rejects bad input") {
  const std::vector<double> q{0.0};
  CHECK_THROWS_AS(posterior(Observations{{0.0, 1.0}, {1.0}}, q, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(posterior(Observations{{NAN}, {1.0}}, q, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(posterior(Observations{{0.0}, {1.0}}, q, -1.0), std::invalid_argument);
}

TEST_CASE("posterior matches a dense LU oracle") {
  Rng rng(11);
  const double noises[] = {0.0, 0.01, 0.1};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 50));
    Observations obs;
    for (std::size_t i = 0; i < n; ++i) {
      obs.s.push_back(rng.uniform(-1.0, 1.0));
      obs.y.push_back(rng.normal());
    }
    std::vector<double> q;
    for (int i = 0; i < 20; ++i) q.push_back(rng.uniform(-1.0, 1.0));
    const double noise = noises[rng.uniform_int(0, 2)];
    const auto a = posterior(obs, q, noise);
    const auto b = eigen_posterior(obs, q, noise, 1e-6);
    for (std::size_t i = 0; i < q.size(); ++i) {
      worst = std::max(worst, std::abs(a.mean[i] - b.mean[i]));
      worst = std::max(worst, std::abs(a.variance[i] - b.variance[i]));
      REQUIRE(a.variance[i] >= -1e-12);
      REQUIRE(a.variance[i] <= 1.0 + 1e-12);
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("incremental process matches a from-scratch solve through eviction") {
  Rng rng(12);
  GpOptions opts;
  opts.capacity = 30;
  GaussianProcess gp(opts);
  std::vector<double> all_s, all_pps;
  for (int i = 0; i < 80; ++i) {
    const double s = std::round(rng.uniform(-1.0, 1.0) * 100.0) / 100.0;  // repeats are common
    const double pps = rng.exponential(0.1);
    gp.add(s, pps);
    all_s.push_back(s);
    all_pps.push_back(pps);
    const auto keep = std::min<std::size_t>(all_s.size(), opts.capacity);
    REQUIRE(gp.size() == keep);
    Observations obs;
    obs.s.assign(all_s.end() - static_cast<std::ptrdiff_t>(keep), all_s.end());
    const std::vector<double> raw(all_pps.end() - static_cast<std::ptrdiff_t>(keep), all_pps.end());
    obs.y = normalize(raw);
    const std::vector<double> q{-1.0, -0.3, 0.0, 0.55, 1.0};
    const auto a = gp.posterior(q);
    const auto b = eigen_posterior(obs, q, opts.noise, opts.jitter);
    for (std::size_t j = 0; j < q.size(); ++j) {
      REQUIRE(std::abs(a.mean[j] - b.mean[j]) < 1e-8);
      REQUIRE(std::abs(a.variance[j] - b.variance[j]) < 1e-8);
    }
  }
}

TEST_CASE("kernel matrix is positive semidefinite") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(2, 40));
    Eigen::MatrixXd k(n, n);
    std::vector<double> s;
    for (int i = 0; i < n; ++i) s.push_back(rng.uniform(-1.0, 1.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) k(i, j) = kernel(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
    }
    CHECK((k - k.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("grid") {
  const auto& g = strategy_grid();
  REQUIRE(g.size() == kGridPoints);
  CHECK(g.front() == -1.0);
  CHECK(g[100] == 0.0);
  CHECK(g.back() == 1.0);
}

TEST_CASE("acquisition") {
  Rng rng(14);
  GaussianProcess empty;
  const auto prior = empty.posterior_grid();
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    CHECK(prior.mean[i] == 0.0);
    CHECK(prior.variance[i] == 1.0);
  }
  CHECK(acquire(prior, 0.0, rng) == -1.0);

  std::vector<int> hits(kGridPoints, 0);
  for (int i = 0; i < 10000; ++i) {
    const double s = acquire(prior, 1.0, rng);
    ++hits[static_cast<std::size_t>(std::lround((s + 1.0) * 100.0))];
  }
  int covered = 0;
  for (int h : hits) covered += h > 0 ? 1 : 0;
  CHECK(covered == static_cast<int>(kGridPoints));

  Observations strong{{0.4}, {3.0}};
  const auto post = posterior(strong, strategy_grid(), 0.1);
  PosteriorGrid pg{strategy_grid(), post.mean, post.variance};
  CHECK(acquire(pg, 0.0, rng) == doctest::Approx(0.4));
}
