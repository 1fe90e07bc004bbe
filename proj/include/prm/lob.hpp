#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>

namespace prm {

/// Integer pennies. Valid quotes lie in [kSystemMin, kSystemMax].
using Price = std::int32_t;
using TraderId = std::uint32_t;
/// Session clock index; tick t covers [t, t+1) / ticks_per_second seconds.
using Tick = std::int64_t;

inline constexpr Price kSystemMin = 1;
inline constexpr Price kSystemMax = 1000;

constexpr bool is_valid_price(Price p) noexcept { return p >= kSystemMin && p <= kSystemMax; }
constexpr Price clamp_price(long long p) noexcept {
  return static_cast<Price>(p < kSystemMin ? kSystemMin : (p > kSystemMax ? kSystemMax : p));
}

enum class Side : std::uint8_t { Bid, Ask };

constexpr const char* side_name(Side s) noexcept { return s == Side::Bid ? "buy" : "sell"; }

/// Unit-quantity limit order.
struct Order {
  TraderId trader_id{};
  Side side{Side::Bid};
  Price price{};
  Tick time{};
};

struct Trade {
  Price price{};
  TraderId buyer_id{};
  TraderId seller_id{};
  Tick time{};

  friend bool operator==(const Trade&, const Trade&) = default;
};

struct LobSnapshot {
  std::optional<Price> best_bid;
  std::optional<Price> best_ask;
  std::optional<Price> worst_bid;
  std::optional<Price> worst_ask;
  std::size_t bid_depth{0};
  std::size_t ask_depth{0};
};

/// Price-time priority book for a continuous double auction. Each trader has
/// at most one resting order; a new submission from the same trader replaces
/// the old one before matching. Crossing orders execute at the resting price.
class OrderBook {
public:
  /// Throws std::invalid_argument when the price is outside system bounds.
  std::optional<Trade> submit_and_match(const Order& order);

  /// Removes the trader's resting order if present.
  bool cancel(TraderId trader_id);

  [[nodiscard]] LobSnapshot snapshot() const;

  [[nodiscard]] std::optional<Price> resting_price(TraderId trader_id) const;

  /// Resting orders of one side in priority order (best price first, FIFO within a level).
  [[nodiscard]] std::deque<Order> side_orders(Side side) const;

  void clear();

private:
  using Level = std::deque<Order>;
  struct Locator {
    Side side;
    Price price;
  };

  void rest(const Order& order);
  void erase_from_level(const Locator& loc, TraderId trader_id);

  std::map<Price, Level, std::greater<>> bids_;
  std::map<Price, Level> asks_;
  std::unordered_map<TraderId, Locator> index_;
  std::size_t bid_count_{0};
  std::size_t ask_count_{0};
};

/// Trade tape CSV: `time,price,buyer_id,seller_id`.
void write_trade_tape_csv(std::ostream& out, std::span<const Trade> trades);

} // namespace prm
