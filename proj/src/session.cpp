#include "prm/session.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "json.hpp"

namespace prm {

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(idx[i - 1], idx[j]);
  }
}

void validate(const SessionConfig& cfg) {
  if (!(cfg.duration > 0.0)) throw std::invalid_argument("session duration must be > 0");
  if (cfg.ticks_per_second < 1) throw std::invalid_argument("ticks_per_second must be >= 1");
  if (!(cfg.arrival_rate > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
  for (const auto& p : cfg.population) {
    if (p.per_side < 0) {
      throw std::invalid_argument("population count for " + std::string(algo_name(p.algo)) + " is negative");
    }
  }
}

} // namespace

SessionResult run_session(const SessionConfig& cfg, const MarketDynamic& e) {
  validate(cfg);
  const int tps = cfg.ticks_per_second;
  const Tick total_ticks = std::llround(cfg.duration * tps);
  if (total_ticks <= 0) throw std::invalid_argument("session has zero ticks");

  Rng market(derive_seed(cfg.seed, {hash_label("market")}));
  Rng config_rng(derive_seed(cfg.seed, {hash_label("hyperparameters")}));

  std::vector<std::unique_ptr<Trader>> traders;
  std::vector<TraderId> buyers;
  std::vector<TraderId> sellers;
  SessionResult result;
  result.seed = cfg.seed;
  result.dynamic = e;

  for (Side side : {Side::Bid, Side::Ask}) {
    for (const auto& entry : cfg.population) {
      for (int c = 0; c < entry.per_side; ++c) {
        const auto id = static_cast<TraderId>(traders.size());
        AgentParams params = cfg.params;
        if (entry.algo == Algo::PRSH && !cfg.prsh_choices.empty()) {
          params.prsh = cfg.prsh_choices[static_cast<std::size_t>(
              config_rng.uniform_int(0, static_cast<std::int64_t>(cfg.prsh_choices.size()) - 1))];
        }
        if (entry.algo == Algo::PRB && !cfg.prb_choices.empty()) {
          params.prb = cfg.prb_choices[static_cast<std::size_t>(
              config_rng.uniform_int(0, static_cast<std::int64_t>(cfg.prb_choices.size()) - 1))];
        }
        traders.push_back(make_trader(entry.algo, id, side,
                                      derive_seed(cfg.seed, {hash_label("trader"), id}), params, tps,
                                      total_ticks));
        (side == Side::Bid ? buyers : sellers).push_back(id);
      }
    }
  }
  for (const auto& entry : cfg.population) result.per_side_counts[entry.algo] += entry.per_side;

  std::vector<Trader*> zip_traders;
  for (auto& t : traders) {
    if (t->algo() == Algo::ZIP) zip_traders.push_back(t.get());
  }

  OrderBook book;
  auto broadcast = [&zip_traders](const traders::MarketEvent& ev) {
    for (auto* z : zip_traders) z->on_market_event(ev);
  };

  auto deliver = [&](const CustomerAssignment& a, Tick tick) {
    book.cancel(a.trader_id);
    traders[a.trader_id]->assign(a, tick);
    ++result.customer_orders;
  };

  const bool scripted = !cfg.script.empty();
  std::vector<ScriptedAssignment> script = cfg.script;
  std::stable_sort(script.begin(), script.end(),
                   [](const auto& a, const auto& b) { return a.tick < b.tick; });
  std::size_t script_pos = 0;

  Side next_side = Side::Bid;
  double arrival = traders.empty() ? 0.0 : next_arrival(market, cfg.arrival_rate);
  std::vector<std::size_t> order(traders.size());

  for (Tick t = 0; t < total_ticks; ++t) {
    const double tick_end = static_cast<double>(t + 1) / tps;
    if (scripted) {
      while (script_pos < script.size() && script[script_pos].tick <= t) {
        const auto& s = script[script_pos++];
        if (s.trader_id >= traders.size()) throw std::invalid_argument("scripted assignment for unknown trader");
        deliver(CustomerAssignment{s.trader_id, traders[s.trader_id]->side(), s.limit_price, t}, t);
      }
    } else if (!traders.empty()) {
      while (arrival < tick_end) {
        deliver(assign_customer_order(market, e, arrival, t, buyers, sellers, next_side), t);
        arrival += next_arrival(market, cfg.arrival_rate);
      }
    }

    for (auto& tr : traders) tr->on_tick(t);

    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle_indices(order, market);

    for (auto idx : order) {
      Trader& trader = *traders[idx];
      if (!trader.assignment()) continue;
      const QuoteContext ctx{t, total_ticks, tps, book.snapshot()};
      const auto q = trader.quote(ctx);
      if (!q) continue;
      if (book.resting_price(trader.id()) == *q) continue;

      const auto trade = book.submit_and_match(Order{trader.id(), trader.side(), *q, t});
      trader.submitted(t);
      if (!trade) {
        broadcast(traders::MarketEvent{*q, trader.side(), false});
        continue;
      }
      Trader& buyer = *traders[trade->buyer_id];
      Trader& seller = *traders[trade->seller_id];
      const Price buyer_limit = buyer.assignment()->limit_price;
      const Price seller_limit = seller.assignment()->limit_price;
      const auto [buyer_profit, seller_profit] = trade_profit(*trade, buyer_limit, seller_limit);
      result.tape.push_back(TradeRecord{*trade, buyer.algo(), seller.algo(), buyer_limit, seller_limit,
                                        buyer_profit, seller_profit});
      buyer.fill(Fill{trade->price, buyer_profit, t});
      seller.fill(Fill{trade->price, seller_profit, t});
      broadcast(traders::MarketEvent{trade->price, trader.side(), true});
    }
  }

  std::map<Algo, std::int64_t> sums;
  std::map<Algo, int> counts;
  for (const auto& tr : traders) {
    result.traders.push_back(TraderOutcome{tr->id(), tr->algo(), tr->side(), tr->profit(), tr->fills()});
    sums[tr->algo()] += tr->profit();
    ++counts[tr->algo()];
    if (const auto* prb_trader = dynamic_cast<const PrbTrader*>(tr.get())) {
      const auto& ens = prb_trader->ensemble();
      const auto& a = ens.audit();
      result.prb_audit.turnovers += a.turnovers;
      result.prb_audit.size_violations += a.size_violations;
      result.prb_audit.age_violations += a.age_violations;
      result.prb_audit.fills += a.fills;
      result.prb_audit.observation_violations += a.observation_violations;
      if (ens.members().size() != static_cast<std::size_t>(ens.config().k)) ++result.prb_size_mismatches;
    }
  }
  for (const auto& [algo, count] : counts) {
    result.per_algo_mean[algo] = static_cast<double>(sums[algo]) / count;
  }
  return result;
}

double algo_mean(const SessionResult& result, Algo algo) {
  auto it = result.per_algo_mean.find(algo);
  return it == result.per_algo_mean.end() ? 0.0 : it->second;
}

std::string session_to_json(const SessionResult& result) {
  nlohmann::ordered_json j;
  j["seed"] = result.seed;
  j["dynamic"] = dynamic_name(result.dynamic.kind);
  auto per_trader = nlohmann::ordered_json::array();
  for (const auto& t : result.traders) {
    nlohmann::ordered_json row;
    row["id"] = t.id;
    row["algo"] = algo_name(t.algo);
    row["side"] = side_name(t.side);
    row["profit"] = t.profit;
    per_trader.push_back(std::move(row));
  }
  j["per_trader"] = std::move(per_trader);
  nlohmann::ordered_json means = nlohmann::ordered_json::object();
  for (const auto& [algo, mean] : result.per_algo_mean) means[std::string(algo_name(algo))] = mean;
  j["per_algo_mean"] = std::move(means);
  return j.dump(2);
}

} // namespace prm
