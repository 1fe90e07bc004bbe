#include "prm/market.hpp"

#include <cmath>
#include <stdexcept>

namespace prm {

std::string_view dynamic_name(DynamicKind k) noexcept {
  return k == DynamicKind::Trend ? "trend" : "trendless";
}

std::optional<DynamicKind> parse_dynamic(std::string_view name) noexcept {
  if (name == "trend") return DynamicKind::Trend;
  if (name == "trendless") return DynamicKind::Trendless;
  return std::nullopt;
}

PriceRange range_at(const MarketDynamic& e, double t, Rng& rng) {
  const bool trend = e.kind == DynamicKind::Trend;
  const double sigma = trend ? 5.0 : 20.0;
  const double drift = trend ? 0.1 * t : 0.0;
  const double low_noise = e.noise_enabled ? rng.normal(0.0, sigma) : 0.0;
  const double high_noise = e.noise_enabled ? rng.normal(0.0, sigma) : 0.0;

  Price low = clamp_price(std::llround(drift + low_noise + 100.0));
  Price high = clamp_price(std::llround(drift + high_noise + 300.0));
  if (low > high) std::swap(low, high);
  if (low == high) {
    if (high < kSystemMax) {
      ++high;
    } else {
      --low;
    }
  }
  return PriceRange{low, high};
}

double next_arrival(Rng& rng, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("arrival rate must be > 0");
  return rng.exponential(rate);
}

CustomerAssignment assign_customer_order(Rng& rng, const MarketDynamic& e, double t, Tick tick,
                                         std::span<const TraderId> buyers, std::span<const TraderId> sellers,
                                         Side& next_side) {
  const Side side = next_side;
  next_side = side == Side::Bid ? Side::Ask : Side::Bid;
  const auto pool = side == Side::Bid ? buyers : sellers;
  if (pool.empty()) throw std::invalid_argument("no traders on the assigned side");
  const auto pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
  const auto range = range_at(e, t, rng);
  const auto limit = static_cast<Price>(rng.uniform_int(range.low, range.high));
  return CustomerAssignment{pool[pick], side, limit, tick};
}

std::pair<std::int64_t, std::int64_t> trade_profit(const Trade& trade, Price buyer_limit, Price seller_limit) noexcept {
  return {static_cast<std::int64_t>(buyer_limit) - trade.price,
          static_cast<std::int64_t>(trade.price) - seller_limit};
}

} // namespace prm
