#include "prm/przi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace prm::przi {

double clamp_strategy(double s) noexcept { return std::clamp(s, -1.0, 1.0); }

double shape_exponent(double s) {
  s = clamp_strategy(s);
  if (s >= 1.0) return kExponentCap;
  const double g = std::tan(std::numbers::pi * (1.0 + s) / 4.0);
  return std::clamp(g, 0.0, kExponentCap);
}

Price quote_from_uniform(double s, Price limit, Side side, const LobSnapshot& lob, double u) {
  const double x = std::pow(u, shape_exponent(s));
  if (side == Side::Ask) {
    const Price lo = limit;
    const Price hi = std::max(lo, lob.worst_ask.value_or(kSystemMax));
    return clamp_price(lo + std::llround(x * (hi - lo)));
  }
  const Price hi = limit;
  const Price lo = std::min(hi, lob.worst_bid.value_or(kSystemMin));
  return clamp_price(hi - std::llround(x * (hi - lo)));
}

Price quote(double s, Price limit, Side side, const LobSnapshot& lob, Rng& rng) {
  return quote_from_uniform(s, limit, side, lob, rng.uniform01());
}

double pps_of_fill(double profit, Tick quote_tick, Tick fill_tick, int ticks_per_second) {
  const Tick elapsed = std::max<Tick>(fill_tick - quote_tick, 1);
  return profit * ticks_per_second / static_cast<double>(elapsed);
}

double slot_pps(const StrategySlot& slot) {
  if (slot.pps_samples.empty()) return 0.0;
  // Sorted summation so the mean does not depend on sample order.
  std::vector<double> sorted = slot.pps_samples;
  std::sort(sorted.begin(), sorted.end());
  return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

} // namespace prm::przi
