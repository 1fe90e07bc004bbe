#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prm/agents.hpp"
#include "prm/market.hpp"

namespace prm {

/// Number of traders of one algorithm on EACH side of the market.
struct PopulationEntry {
  Algo algo{Algo::GVWY};
  int per_side{0};
};

/// Replaces the Poisson customer flow when non-empty (test hook).
struct ScriptedAssignment {
  Tick tick{0};
  TraderId trader_id{0};
  Price limit_price{0};
};

struct SessionConfig {
  double duration{1000.0};  // seconds
  int ticks_per_second{1};
  double arrival_rate{2.0}; // customer orders per second
  std::vector<PopulationEntry> population;
  std::uint64_t seed{0};
  AgentParams params;
  /// When non-empty, each PRSH / PRB trader draws its hyperparameters
  /// uniformly from these lists instead of using params.prsh / params.prb.
  std::vector<prsh::PrshConfig> prsh_choices;
  std::vector<prb::PrbConfig> prb_choices;
  std::vector<ScriptedAssignment> script;
};

struct TraderOutcome {
  TraderId id{};
  Algo algo{};
  Side side{};
  std::int64_t profit{0};
  int fills{0};
};

/// A trade together with both counterparties' customer limits at execution.
struct TradeRecord {
  Trade trade;
  Algo buyer_algo{};
  Algo seller_algo{};
  Price buyer_limit{};
  Price seller_limit{};
  std::int64_t buyer_profit{0};
  std::int64_t seller_profit{0};
};

struct SessionResult {
  std::uint64_t seed{0};
  MarketDynamic dynamic;
  std::vector<TraderOutcome> traders;
  std::map<Algo, double> per_algo_mean;
  std::map<Algo, int> per_side_counts;
  std::vector<TradeRecord> tape;
  std::uint64_t customer_orders{0};
  /// Summed over every PRB trader in the session.
  prb::EnsembleAudit prb_audit;
  /// PRB traders whose ensemble did not hold exactly k members at the close.
  std::uint64_t prb_size_mismatches{0};
};

/// Runs one market session. Deterministic in (cfg, e); throws
/// std::invalid_argument on a non-positive duration, arrival rate or count.
SessionResult run_session(const SessionConfig& cfg, const MarketDynamic& e);

/// `{seed, dynamic, per_trader: [{id, algo, side, profit}], per_algo_mean: {...}}`
std::string session_to_json(const SessionResult& result);

/// Mean profit over the traders of one algorithm (0 when absent).
double algo_mean(const SessionResult& result, Algo algo);

} // namespace prm
