#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "prm/agents.hpp"
#include "prm/lob.hpp"
#include "prm/rng.hpp"

namespace prm {

enum class DynamicKind : std::uint8_t { Trend, Trendless };

/// Supply/demand range dynamic. noise_enabled = false removes the Gaussian
/// perturbations (a test hook).
struct MarketDynamic {
  DynamicKind kind{DynamicKind::Trend};
  bool noise_enabled{true};
};

std::string_view dynamic_name(DynamicKind k) noexcept;
std::optional<DynamicKind> parse_dynamic(std::string_view name) noexcept;

struct PriceRange {
  Price low{};
  Price high{};

  friend bool operator==(const PriceRange&, const PriceRange&) = default;
};

/// Customer limit-price range at time t (seconds).
///   trend:     [0.1 t + N(0,5) + 100, 0.1 t + N(0,5) + 300]
///   trendless: [N(0,20) + 100,        N(0,20) + 300]
/// Each bound gets its own noise draw; bounds are rounded, clamped to the
/// system range, swapped if inverted and separated by at least one penny.
PriceRange range_at(const MarketDynamic& e, double t, Rng& rng);

/// Exponential inter-arrival time in seconds, mean 1 / rate.
double next_arrival(Rng& rng, double rate);

/// Draws the next customer order: sides alternate starting from
/// `next_side` (which is advanced), the trader is uniform over that side,
/// the limit is uniform on range_at(e, t). Throws if the side has no traders.
CustomerAssignment assign_customer_order(Rng& rng, const MarketDynamic& e, double t, Tick tick,
                                         std::span<const TraderId> buyers, std::span<const TraderId> sellers,
                                         Side& next_side);

/// (buyer_limit - price, price - seller_limit).
std::pair<std::int64_t, std::int64_t> trade_profit(const Trade& trade, Price buyer_limit, Price seller_limit) noexcept;

} // namespace prm
