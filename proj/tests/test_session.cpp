#include <doctest.h>

#include "prm/session.hpp"

using namespace prm;

namespace {

SessionConfig mixed(std::uint64_t seed, double duration = 200.0) {
  SessionConfig cfg;
  cfg.duration = duration;
  cfg.seed = seed;
  cfg.population = {{Algo::GVWY, 3}, {Algo::ZIC, 3}, {Algo::SHVR, 3}, {Algo::SNPR, 2},
                    {Algo::ZIP, 3},  {Algo::PRSH, 3}, {Algo::PRB, 3}};
  cfg.params.prsh = prsh::PrshConfig{4, 32.0, prsh::Mutation::M3, true};
  cfg.params.prb = prb::PrbConfig{2, 32.0};
  return cfg;
}

} // namespace

TEST_CASE("empty population") {
  SessionConfig cfg;
  cfg.duration = 50.0;
  const auto r = run_session(cfg, MarketDynamic{});
  CHECK(r.tape.empty());
  CHECK(r.traders.empty());
}

TEST_CASE("two giveaway traders cross once") {
  SessionConfig cfg;
  cfg.duration = 10.0;
  cfg.population = {{Algo::GVWY, 1}};
  cfg.script = {{0, 0, 300}, {0, 1, 100}};
  const auto r = run_session(cfg, MarketDynamic{DynamicKind::Trend, false});
  REQUIRE(r.tape.size() == 1);
  CHECK(r.tape[0].buyer_profit + r.tape[0].seller_profit == 200);
  CHECK(r.traders[0].profit + r.traders[1].profit == 200);
}

TEST_CASE("conservation and no losses") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (auto kind : {DynamicKind::Trend, DynamicKind::Trendless}) {
      const auto r = run_session(mixed(seed), MarketDynamic{kind, true});
      CHECK(!r.tape.empty());
      for (const auto& t : r.tape) {
        REQUIRE(t.buyer_profit + t.seller_profit == t.buyer_limit - t.seller_limit);
        REQUIRE(t.buyer_profit >= 0);
        REQUIRE(t.seller_profit >= 0);
      }
      CHECK(r.prb_audit.size_violations == 0);
      CHECK(r.prb_audit.age_violations == 0);
      CHECK(r.prb_audit.observation_violations == 0);
      CHECK(r.prb_size_mismatches == 0);
    }
  }
}

TEST_CASE("population counts and per-algorithm means") {
  const auto cfg = mixed(9);
  const auto r = run_session(cfg, MarketDynamic{});
  for (const auto& entry : cfg.population) CHECK(r.per_side_counts.at(entry.algo) == entry.per_side);
  std::map<Algo, double> sum;
  std::map<Algo, int> n;
  for (const auto& t : r.traders) {
    sum[t.algo] += static_cast<double>(t.profit);
    ++n[t.algo];
  }
  for (const auto& [algo, s] : sum) CHECK(algo_mean(r, algo) == doctest::Approx(s / n[algo]));
}

TEST_CASE("sessions are deterministic in the seed") {
  const auto a = session_to_json(run_session(mixed(3), MarketDynamic{}));
  const auto b = session_to_json(run_session(mixed(3), MarketDynamic{}));
  const auto c = session_to_json(run_session(mixed(4), MarketDynamic{}));
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("invalid configurations are rejected") {
  auto cfg = mixed(1);
  cfg.duration = 0.0;
  CHECK_THROWS_AS(run_session(cfg, MarketDynamic{}), std::invalid_argument);
  cfg = mixed(1);
  cfg.arrival_rate = 0.0;
  CHECK_THROWS_AS(run_session(cfg, MarketDynamic{}), std::invalid_argument);
  cfg = mixed(1);
  cfg.population[0].per_side = -1;
  CHECK_THROWS_AS(run_session(cfg, MarketDynamic{}), std::invalid_argument);
}
