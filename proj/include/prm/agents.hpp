#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "prm/gp.hpp"
#include "prm/lob.hpp"
#include "prm/prb.hpp"
#include "prm/prsh.hpp"
#include "prm/rng.hpp"
#include "prm/traders.hpp"

namespace prm {

enum class Algo : std::uint8_t { GVWY, ZIC, SHVR, SNPR, ZIP, PRSH, PRB };

inline constexpr Algo kAllAlgos[] = {Algo::GVWY, Algo::ZIC, Algo::SHVR, Algo::SNPR,
                                     Algo::ZIP,  Algo::PRSH, Algo::PRB};

std::string_view algo_name(Algo a) noexcept;
std::optional<Algo> parse_algo(std::string_view name) noexcept;

/// A customer limit order handed to a trader.
struct CustomerAssignment {
  TraderId trader_id{};
  Side side{Side::Bid};
  Price limit_price{};
  Tick issue_time{};
};

struct QuoteContext {
  Tick tick{0};
  Tick total_ticks{1};
  int ticks_per_second{1};
  LobSnapshot lob;
};

struct Fill {
  Price price{};
  std::int64_t profit{0};
  Tick tick{0};
};

/// Base for all market participants. A trader holds at most one customer
/// assignment; a new one replaces the old.
class Trader {
public:
  Trader(TraderId id, Algo algo, Side side, std::uint64_t seed) : id_(id), algo_(algo), side_(side), rng_(seed) {}
  virtual ~Trader() = default;
  Trader(const Trader&) = delete;
  Trader& operator=(const Trader&) = delete;

  void assign(const CustomerAssignment& a, Tick now) {
    assignment_ = a;
    on_assignment(now);
  }

  /// Price to show on the book this tick, or nothing to decline.
  virtual std::optional<Price> quote(const QuoteContext& ctx) = 0;

  void fill(const Fill& f) {
    profit_ += f.profit;
    ++fills_;
    on_fill(f);
    assignment_.reset();
  }

  /// Called when the price returned by the last quote() was actually sent to the book.
  void submitted(Tick t) { on_submitted(t); }

  virtual void on_tick(Tick) {}
  virtual void on_market_event(const traders::MarketEvent&) {}

  [[nodiscard]] TraderId id() const noexcept { return id_; }
  [[nodiscard]] Algo algo() const noexcept { return algo_; }
  [[nodiscard]] Side side() const noexcept { return side_; }
  [[nodiscard]] const std::optional<CustomerAssignment>& assignment() const noexcept { return assignment_; }
  [[nodiscard]] std::int64_t profit() const noexcept { return profit_; }
  [[nodiscard]] int fills() const noexcept { return fills_; }

protected:
  virtual void on_assignment(Tick) {}
  virtual void on_submitted(Tick) {}
  virtual void on_fill(const Fill&) {}

  Rng& rng() noexcept { return rng_; }

private:
  TraderId id_;
  Algo algo_;
  Side side_;
  Rng rng_;
  std::optional<CustomerAssignment> assignment_;
  std::int64_t profit_{0};
  int fills_{0};
};

struct AgentParams {
  double snpr_window{0.05};
  prsh::PrshConfig prsh;
  prb::PrbConfig prb;
  gp::GpOptions gp;
};

class PrshTrader;
class PrbTrader;

std::unique_ptr<Trader> make_trader(Algo algo, TraderId id, Side side, std::uint64_t seed,
                                    const AgentParams& params, int ticks_per_second, Tick total_ticks);

/// PRZI trader whose s is tuned by the stochastic hillclimber. Each quote
/// uses the strategy of the current window; a fill is credited to the
/// strategy of the resting order.
class PrshTrader final : public Trader {
public:
  PrshTrader(TraderId id, Side side, std::uint64_t seed, prsh::PrshConfig cfg, int ticks_per_second);
  std::optional<Price> quote(const QuoteContext& ctx) override;
  void on_tick(Tick t) override;
  [[nodiscard]] const prsh::PrshLearner& learner() const noexcept { return learner_; }

protected:
  void on_submitted(Tick t) override;
  void on_fill(const Fill& f) override;

private:
  int ticks_per_second_;
  prsh::PrshLearner learner_;
  prsh::PrshLearner::Choice candidate_{};
  prsh::PrshLearner::Choice live_{};
  Tick live_tick_{0};
};

/// PRZI trader driven by the GP ensemble. A strategy is sampled for every
/// quote; temperature decays linearly from 1 at the open to 0 at the close.
class PrbTrader final : public Trader {
public:
  PrbTrader(TraderId id, Side side, std::uint64_t seed, prb::PrbConfig cfg, gp::GpOptions gp_opts,
            int ticks_per_second, Tick total_ticks);
  std::optional<Price> quote(const QuoteContext& ctx) override;
  void on_tick(Tick t) override;
  [[nodiscard]] const prb::PrbEnsemble& ensemble() const noexcept { return ensemble_; }

protected:
  void on_submitted(Tick t) override;
  void on_fill(const Fill& f) override;

private:
  int ticks_per_second_;
  Tick total_ticks_;
  prb::PrbEnsemble ensemble_;
  prb::PendingQuote candidate_{};
  prb::PendingQuote live_{};
};

} // namespace prm
