#include "prm/traders.hpp"

#include <algorithm>
#include <cmath>

namespace prm::traders {

Price gvwy_quote(Price limit, Side) noexcept { return limit; }

Price zic_quote(Price limit, Side side, Rng& rng) {
  limit = clamp_price(limit);
  if (side == Side::Bid) return static_cast<Price>(rng.uniform_int(kSystemMin, limit));
  return static_cast<Price>(rng.uniform_int(limit, kSystemMax));
}

Price shvr_quote(Price limit, Side side, const LobSnapshot& lob) noexcept {
  if (side == Side::Bid) {
    if (!lob.best_bid) return kSystemMin;
    return clamp_price(std::min(*lob.best_bid + 1, limit));
  }
  if (!lob.best_ask) return kSystemMax;
  return clamp_price(std::max(*lob.best_ask - 1, limit));
}

std::optional<Price> snpr_quote(Price limit, Side side, const LobSnapshot& lob, Tick t, Tick total_ticks,
                                double window_fraction) noexcept {
  if (static_cast<double>(t) < (1.0 - window_fraction) * static_cast<double>(total_ticks)) {
    return std::nullopt;
  }
  if (side == Side::Bid) {
    if (lob.best_ask && *lob.best_ask <= limit) return *lob.best_ask;
    return std::nullopt;
  }
  if (lob.best_bid && *lob.best_bid >= limit) return *lob.best_bid;
  return std::nullopt;
}

ZipState ZipState::random(Side side, Rng& rng) {
  ZipState z;
  z.side = side;
  const double m = rng.uniform(0.05, 0.35);
  z.margin = side == Side::Ask ? m : -m;
  z.beta = rng.uniform(0.1, 0.5);
  z.gamma = rng.uniform(0.0, 0.1);
  return z;
}

Price zip_quote(const ZipState& state, Price limit) noexcept {
  const auto raw = std::llround(static_cast<double>(limit) * (1.0 + state.margin));
  const Price p = clamp_price(raw);
  return state.side == Side::Ask ? std::max(p, limit) : std::min(p, limit);
}

ZipState zip_step(ZipState state, Price limit, double target) noexcept {
  if (limit <= 0) return state;
  const double quote = static_cast<double>(limit) * (1.0 + state.margin);
  const double delta = state.beta * (target - quote);
  state.last_delta = state.gamma * state.last_delta + (1.0 - state.gamma) * delta;
  const double margin = (quote + state.last_delta) / static_cast<double>(limit) - 1.0;
  if (state.side == Side::Ask) {
    state.margin = std::max(0.0, margin);
  } else {
    state.margin = std::clamp(margin, -1.0, 0.0);
  }
  return state;
}

namespace {

double target_up(double price, const ZipState& z, Rng& rng) {
  return price * (1.0 + rng.uniform(0.0, z.cr)) + rng.uniform(0.0, z.ca);
}

double target_down(double price, const ZipState& z, Rng& rng) {
  return price * (1.0 - rng.uniform(0.0, z.cr)) - rng.uniform(0.0, z.ca);
}

} // namespace

ZipState zip_update(ZipState state, Price limit, bool active, const MarketEvent& event, Rng& rng) {
  const double q = event.price;
  const double own = zip_quote(state, limit);
  if (state.side == Side::Ask) {
    if (event.trade) {
      if (own <= q) return zip_step(state, limit, target_up(q, state, rng));
      if (active && event.shout_side == Side::Bid && own >= q) {
        return zip_step(state, limit, target_down(q, state, rng));
      }
    } else if (active && event.shout_side == Side::Ask && own >= q) {
      return zip_step(state, limit, target_down(q, state, rng));
    }
    return state;
  }
  if (event.trade) {
    if (own >= q) return zip_step(state, limit, target_down(q, state, rng));
    if (active && event.shout_side == Side::Ask && own <= q) {
      return zip_step(state, limit, target_up(q, state, rng));
    }
  } else if (active && event.shout_side == Side::Bid && own <= q) {
    return zip_step(state, limit, target_up(q, state, rng));
  }
  return state;
}

} // namespace prm::traders
