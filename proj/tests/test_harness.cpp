#include <doctest.h>

#include <set>
#include <sstream>
#include <string>

#include "prm/harness.hpp"

using namespace prm;
using namespace prm::harness;

namespace {

SessionConfig small_base() {
  SessionConfig cfg;
  cfg.duration = 120.0;
  cfg.population = {{Algo::GVWY, 2}, {Algo::ZIC, 2}, {Algo::SHVR, 2}, {Algo::ZIP, 2}, {Algo::PRSH, 2}, {Algo::PRB, 2}};
  return cfg;
}

} // namespace

TEST_CASE("cell keys and grids") {
  const SweepCell c{Algo::PRSH, 6, 128.0, prsh::Mutation::M3};
  CHECK(c.key() == "PRSH:k=6:v=128:m=m3");
  CHECK(SweepCell{Algo::PRB, 2, 32.0, prsh::Mutation::M1}.key() == "PRB:k=2:v=32");
  CHECK(prsh_grid({2, 4, 6, 8, 10, 12, 14, 16}, {32, 64, 128, 256}, {prsh::Mutation::M1, prsh::Mutation::M2, prsh::Mutation::M3}).size() == 96);
  CHECK(prb_grid({2, 3, 4}, {32, 64, 128, 256}).size() == 12);
}

TEST_CASE("seeds differ across cells, runs and dynamics") {
  std::set<std::uint64_t> seen;
  for (const auto& cell : prsh_grid({2, 4}, {32, 64}, {prsh::Mutation::M1})) {
    for (std::size_t run = 0; run < 5; ++run) {
      seen.insert(sweep_seed(1, DynamicKind::Trend, cell, run));
      seen.insert(sweep_seed(1, DynamicKind::Trendless, cell, run));
    }
  }
  CHECK(seen.size() == 40);
  CHECK(comparison_seed(1, DynamicKind::Trend, 0) != comparison_seed(2, DynamicKind::Trend, 0));
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("sweep tables") {
  const auto grid = prsh_grid({2, 4}, {32}, {prsh::Mutation::M1});
  const auto r = run_sweep(Algo::PRSH, MarketDynamic{}, grid, 8, small_base(), 5, 1);
  REQUIRE(r.cells.size() == 2);
  for (const auto& c : r.cells) {
    CHECK(c.set.n() == 8);
    REQUIRE(c.z);
    CHECK(c.in_winner_set == (c.z->p_value >= 0.05));
    CHECK(c.z->p_value >= 0.0);
    CHECK(c.z->p_value <= 1.0);
  }
  CHECK(r.cells[r.best].in_winner_set);
  for (const auto& c : r.cells) CHECK(c.mean <= r.cells[r.best].mean);

  const auto one = run_sweep(Algo::PRB, MarketDynamic{}, prb_grid({2}, {32}), 4, small_base(), 5, 1);
  REQUIRE(one.winners().size() == 1);
  CHECK(one.winners()[0].k == 2);
}

TEST_CASE("results do not depend on the number of jobs") {
  const auto grid = prb_grid({2, 3}, {32});
  const auto a = run_sweep(Algo::PRB, MarketDynamic{}, grid, 4, small_base(), 11, 1);
  const auto b = run_sweep(Algo::PRB, MarketDynamic{}, grid, 4, small_base(), 11, 4);
  std::ostringstream sa, sb;
  write_sweep_csv(sa, a);
  write_sweep_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("e,algo,k,v,m,n,mean,std,ks_p,z_p,in_winner_set,mean_per_1000\n", 0) == 0);

  const std::vector<SweepCell> pw{{Algo::PRSH, 2, 32.0, prsh::Mutation::M1}};
  const std::vector<SweepCell> bw{{Algo::PRB, 2, 32.0, prsh::Mutation::M1}};
  const auto c1 = run_comparison(MarketDynamic{}, pw, bw, 6, small_base(), 3, 1);
  const auto c2 = run_comparison(MarketDynamic{}, pw, bw, 6, small_base(), 3, 3);
  CHECK(c1.d.samples == c2.d.samples);
  REQUIRE(c1.d.n() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(c1.d.samples[i] == doctest::Approx(c1.prb_means[i] - c1.prsh_means[i]));
  CHECK(c1.audit.size_violations + c1.audit.age_violations + c1.audit.observation_violations == 0);

  std::ostringstream d;
  write_d_csv(d, c1);
  CHECK(d.str().rfind("e,run,d\n", 0) == 0);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(128.0) == "128");
  CHECK(format_number(-2.5) == "-2.5");
}
