#pragma once

#include <optional>

#include "prm/lob.hpp"
#include "prm/rng.hpp"

namespace prm::traders {

/// Giveaway: quotes its limit.
Price gvwy_quote(Price limit, Side side) noexcept;

/// Zero-intelligence constrained: uniform on [system_min, limit] for buyers,
/// [limit, system_max] for sellers.
Price zic_quote(Price limit, Side side, Rng& rng);

/// Shaver: one penny better than the best price on its own side, never past
/// its limit. On an empty side it parks at the passive system bound.
Price shvr_quote(Price limit, Side side, const LobSnapshot& lob) noexcept;

/// Sniper: silent until the last `window_fraction` of the session, then
/// crosses the spread when that is not loss-making.
std::optional<Price> snpr_quote(Price limit, Side side, const LobSnapshot& lob, Tick t, Tick total_ticks,
                                double window_fraction = 0.05) noexcept;

/// Something a ZIP trader observes on the market: a trade, or a quote that rested.
struct MarketEvent {
  Price price{};
  Side shout_side{Side::Bid};  // side of the order that produced the event
  bool trade{false};
};

/// Zero-intelligence-plus margin learner (Widrow-Hoff with momentum).
struct ZipState {
  Side side{Side::Ask};
  double margin{0.0};      // seller >= 0, buyer <= 0
  double beta{0.3};        // learning rate
  double gamma{0.05};      // momentum
  double last_delta{0.0};  // momentum-filtered change, pennies
  double ca{5.0};          // absolute target perturbation bound, pennies
  double cr{0.05};         // relative target perturbation bound

  /// Canonical random initialisation: margin magnitude U(0.05, 0.35),
  /// beta U(0.1, 0.5), gamma U(0, 0.1).
  static ZipState random(Side side, Rng& rng);
};

/// round(limit * (1 + margin)), kept on the profitable side of the limit.
Price zip_quote(const ZipState& state, Price limit) noexcept;

/// Moves the quote toward `target` by one delta-rule step and re-derives the
/// margin, clamped to the profitable sign.
ZipState zip_step(ZipState state, Price limit, double target) noexcept;

/// Applies the ZIP decision rules to one market event. `active` means the
/// trader currently holds an unfilled customer order.
ZipState zip_update(ZipState state, Price limit, bool active, const MarketEvent& event, Rng& rng);

} // namespace prm::traders
