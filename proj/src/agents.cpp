#include "prm/agents.hpp"

#include <stdexcept>

#include "prm/przi.hpp"

namespace prm {

std::string_view algo_name(Algo a) noexcept {
  switch (a) {
  case Algo::GVWY: return "GVWY";
  case Algo::ZIC: return "ZIC";
  case Algo::SHVR: return "SHVR";
  case Algo::SNPR: return "SNPR";
  case Algo::ZIP: return "ZIP";
  case Algo::PRSH: return "PRSH";
  case Algo::PRB: return "PRB";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view name) noexcept {
  for (auto a : kAllAlgos) {
    if (algo_name(a) == name) return a;
  }
  return std::nullopt;
}

namespace {

class GvwyTrader final : public Trader {
public:
  using Trader::Trader;
  std::optional<Price> quote(const QuoteContext&) override {
    return traders::gvwy_quote(assignment()->limit_price, side());
  }
};

class ZicTrader final : public Trader {
public:
  using Trader::Trader;
  std::optional<Price> quote(const QuoteContext&) override {
    return traders::zic_quote(assignment()->limit_price, side(), rng());
  }
};

class ShvrTrader final : public Trader {
public:
  using Trader::Trader;
  std::optional<Price> quote(const QuoteContext& ctx) override {
    return traders::shvr_quote(assignment()->limit_price, side(), ctx.lob);
  }
};

class SnprTrader final : public Trader {
public:
  SnprTrader(TraderId id, Side side, std::uint64_t seed, double window)
      : Trader(id, Algo::SNPR, side, seed), window_(window) {}
  std::optional<Price> quote(const QuoteContext& ctx) override {
    return traders::snpr_quote(assignment()->limit_price, side(), ctx.lob, ctx.tick, ctx.total_ticks, window_);
  }

private:
  double window_;
};

class ZipTrader final : public Trader {
public:
  ZipTrader(TraderId id, Side side, std::uint64_t seed) : Trader(id, Algo::ZIP, side, seed) {
    state_ = traders::ZipState::random(side, rng());
  }
  std::optional<Price> quote(const QuoteContext&) override {
    return traders::zip_quote(state_, assignment()->limit_price);
  }
  void on_market_event(const traders::MarketEvent& e) override {
    // Margins keep adapting between customer orders, anchored on the last limit seen.
    if (last_limit_ == 0) return;
    state_ = traders::zip_update(state_, last_limit_, assignment().has_value(), e, rng());
  }

protected:
  void on_assignment(Tick) override { last_limit_ = assignment()->limit_price; }

private:
  traders::ZipState state_;
  Price last_limit_{0};
};

} // namespace

PrshTrader::PrshTrader(TraderId id, Side side, std::uint64_t seed, prsh::PrshConfig cfg, int ticks_per_second)
    : Trader(id, Algo::PRSH, side, seed), ticks_per_second_(ticks_per_second),
      learner_(cfg, ticks_per_second, rng()) {}

void PrshTrader::on_tick(Tick t) { learner_.on_tick(t, rng()); }

std::optional<Price> PrshTrader::quote(const QuoteContext& ctx) {
  candidate_ = learner_.current(ctx.tick);
  return przi::quote(candidate_.s, assignment()->limit_price, side(), ctx.lob, rng());
}

void PrshTrader::on_submitted(Tick t) {
  live_ = candidate_;
  live_tick_ = t;
}

void PrshTrader::on_fill(const Fill& f) {
  learner_.record_fill(live_, f.profit, przi::pps_of_fill(static_cast<double>(f.profit), live_tick_, f.tick,
                                                          ticks_per_second_));
}

PrbTrader::PrbTrader(TraderId id, Side side, std::uint64_t seed, prb::PrbConfig cfg, gp::GpOptions gp_opts,
                     int ticks_per_second, Tick total_ticks)
    : Trader(id, Algo::PRB, side, seed), ticks_per_second_(ticks_per_second), total_ticks_(total_ticks),
      ensemble_(cfg, gp_opts, prsh::window_ticks(cfg.k, cfg.v, ticks_per_second)) {}

void PrbTrader::on_tick(Tick t) { ensemble_.on_tick(t, rng()); }

std::optional<Price> PrbTrader::quote(const QuoteContext& ctx) {
  const double tau = 1.0 - static_cast<double>(ctx.tick) / static_cast<double>(total_ticks_);
  candidate_ = ensemble_.choose_strategy(ctx.tick, tau, rng());
  return przi::quote(candidate_.s, assignment()->limit_price, side(), ctx.lob, rng());
}

void PrbTrader::on_submitted(Tick) { live_ = candidate_; }

void PrbTrader::on_fill(const Fill& f) {
  ensemble_.observe_fill(live_, static_cast<double>(f.profit), f.tick, ticks_per_second_);
}

std::unique_ptr<Trader> make_trader(Algo algo, TraderId id, Side side, std::uint64_t seed,
                                    const AgentParams& params, int ticks_per_second, Tick total_ticks) {
  switch (algo) {
  case Algo::GVWY: return std::make_unique<GvwyTrader>(id, Algo::GVWY, side, seed);
  case Algo::ZIC: return std::make_unique<ZicTrader>(id, Algo::ZIC, side, seed);
  case Algo::SHVR: return std::make_unique<ShvrTrader>(id, Algo::SHVR, side, seed);
  case Algo::SNPR: return std::make_unique<SnprTrader>(id, side, seed, params.snpr_window);
  case Algo::ZIP: return std::make_unique<ZipTrader>(id, side, seed);
  case Algo::PRSH: return std::make_unique<PrshTrader>(id, side, seed, params.prsh, ticks_per_second);
  case Algo::PRB:
    return std::make_unique<PrbTrader>(id, side, seed, params.prb, params.gp, ticks_per_second, total_ticks);
  }
  throw std::invalid_argument("unknown algorithm");
}

} // namespace prm
