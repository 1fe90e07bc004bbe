#include "prm/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "prm/gp.hpp"
#include "prm/lob.hpp"
#include "prm/prb.hpp"
#include "prm/prsh.hpp"
#include "prm/rng.hpp"
#include "prm/stats.hpp"

namespace prm {

namespace {

// Gaussian elimination with partial pivoting; A is n x n row-major, overwritten.
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i * n + j] * x[j];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

double gp_oracle_error(Rng& rng) {
  const std::size_t n = 1 + rng.uniform_int(0, 29);
  const double noises[] = {0.0, 0.01, 0.1};
  const double noise = noises[rng.uniform_int(0, 2)];
  gp::Observations obs;
  for (std::size_t i = 0; i < n; ++i) {
    obs.s.push_back(rng.uniform(-1.0, 1.0));
    obs.y.push_back(rng.normal());
  }
  std::vector<double> q;
  for (int i = 0; i < 10; ++i) q.push_back(rng.uniform(-1.0, 1.0));
  const auto post = gp::posterior(obs, q, noise);

  const double shift = noise + 1e-6;
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i * n + j] = gp::kernel(obs.s[i], obs.s[j]) + (i == j ? shift : 0.0);
  }
  const auto alpha = dense_solve(k, obs.y);
  double err = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i) ks[i] = gp::kernel(q[a], obs.s[i]);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += ks[i] * alpha[i];
    const auto v = dense_solve(k, ks);
    double var = 1.0;
    for (std::size_t i = 0; i < n; ++i) var -= ks[i] * v[i];
    err = std::max({err, std::abs(mu - post.mean[a]), std::abs(var - post.variance[a])});
  }
  return err;
}

} // namespace

int run_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  };

  {
    Rng rng(derive_seed(1, {hash_label("selftest.gp")}));
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) worst = std::max(worst, gp_oracle_error(rng));
    check("gp posterior vs dense solve", worst <= 1e-8, fmt::format("max abs error {:.3g}", worst));
  }
  {
    gp::Observations obs{{0.0}, {1.0}};
    const double q[] = {0.0};
    const auto post = gp::posterior(obs, q, 0.0, 0.0);
    check("gp interpolates a noiseless point", std::abs(post.mean[0] - 1.0) < 1e-12 && std::abs(post.variance[0]) < 1e-12,
          fmt::format("mean {:.6g} variance {:.3g}", post.mean[0], post.variance[0]));
  }
  {
    OrderBook book;
    book.submit_and_match({1, Side::Ask, 100, 0});
    book.submit_and_match({2, Side::Ask, 100, 1});
    const auto t = book.submit_and_match({3, Side::Bid, 105, 2});
    check("price-time priority", t && t->price == 100 && t->seller_id == 1,
          t ? fmt::format("trade at {} with seller {}", t->price, t->seller_id) : "no trade");
  }
  {
    Tick total = 0;
    bool ok = true;
    for (int k = 2; k <= 16 && ok; ++k) {
      const Tick w = prsh::window_ticks(k, 128.0);
      const auto p = prsh::stage_count(1000, k, w);
      for (Tick t = 0; t < p * k * w; ++t) {
        const auto pos = prsh::window_of(t, k, w);
        ok = ok && pos.stage == t / (k * w) && pos.slot == static_cast<int>((t % (k * w)) / w);
        ++total;
      }
    }
    check("stage and window schedule", ok, fmt::format("{} ticks checked", total));
  }
  {
    Rng rng(derive_seed(1, {hash_label("selftest.softmax")}));
    const auto w = prb::softmax_weights(std::vector<double>{1.0, 0.0});
    int kept_second = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) kept_second += prb::draw_without_replacement(w, 1, rng)[0] == 1 ? 1 : 0;
    const double rate = static_cast<double>(kept_second) / draws;
    check("softmax survival", std::abs(rate - 0.2689) <= 0.02, fmt::format("rate {:.4f}", rate));
  }
  {
    Rng rng(derive_seed(1, {hash_label("selftest.z")}));
    int rejects = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
      std::vector<double> a(50), b(50);
      for (auto& x : a) x = rng.normal();
      for (auto& x : b) x = rng.normal();
      rejects += stats::z_test_greater(a, b).reject ? 1 : 0;
    }
    const double rate = static_cast<double>(rejects) / trials;
    check("z-test size under the null", rate >= 0.01 && rate <= 0.11, fmt::format("rejection rate {:.3f}", rate));
  }
  {
    const auto r = stats::z_test_positive_mean(std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0});
    check("z-test on a positive sample", r.reject, fmt::format("z {:.4f} p {:.3g}", r.statistic, r.p_value));
  }
  out << (failures == 0 ? "selftest passed" : fmt::format("selftest: {} failure(s)", failures)) << '\n';
  return failures;
}

} // namespace prm
