#pragma once

#include <cstdint>
#include <vector>

#include "prm/lob.hpp"
#include "prm/rng.hpp"

namespace prm::przi {

/// Exponent used in place of tan(pi/2) at s = +1.
inline constexpr double kExponentCap = 1.0e6;

double clamp_strategy(double s) noexcept;

/// gamma(s) = tan(pi (1 + s) / 4): 0 at s = -1, 1 at s = 0, capped at s = +1.
double shape_exponent(double s);

/// Quote for strategy s. The admissible interval runs from the trader's own
/// limit to the passive extreme of its side (worst resting price, or the
/// system bound on an empty side). x = u^gamma(s) picks the point, measured
/// from the limit for sellers and from the limit downward for buyers, so
/// s = +1 quotes the limit, s = 0 is uniform and s = -1 sits at the extreme.
Price quote(double s, Price limit, Side side, const LobSnapshot& lob, Rng& rng);

/// Deterministic core of quote() for a given uniform draw u in [0, 1).
Price quote_from_uniform(double s, Price limit, Side side, const LobSnapshot& lob, double u);

/// Profit per second of one fill; elapsed time is floored at one tick.
double pps_of_fill(double profit, Tick quote_tick, Tick fill_tick, int ticks_per_second = 1);

/// One strategy value with its active window and per-fill payoffs.
struct StrategySlot {
  double s{0.0};
  Tick window_start{0};
  Tick window_end{1};
  std::int64_t profit{0};
  int fills{0};
  std::vector<double> pps_samples;
};

/// Mean per-fill pps; 0 for a slot that never filled.
double slot_pps(const StrategySlot& slot);

} // namespace prm::przi
