#include <doctest.h>

#include <cmath>

#include "prm/traders.hpp"

using namespace prm;
using namespace prm::traders;

TEST_CASE("giveaway quotes its limit") {
  CHECK(gvwy_quote(150, Side::Bid) == 150);
  CHECK(gvwy_quote(150, Side::Ask) == 150);
}

TEST_CASE("zic never quotes at a loss") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto b = zic_quote(150, Side::Bid, rng);
    REQUIRE(b >= kSystemMin);
    REQUIRE(b <= 150);
    sum += b;
    const auto s = zic_quote(150, Side::Ask, rng);
    REQUIRE(s >= 150);
    REQUIRE(s <= kSystemMax);
  }
  CHECK(std::abs(sum / n - 75.5) < 2.0);
}

TEST_CASE("shaver") {
  LobSnapshot lob;
  lob.best_bid = 120;
  CHECK(shvr_quote(150, Side::Bid, lob) == 121);
  lob.best_bid = 150;
  CHECK(shvr_quote(150, Side::Bid, lob) == 150);
  CHECK(shvr_quote(140, Side::Ask, LobSnapshot{}) == kSystemMax);
  CHECK(shvr_quote(140, Side::Bid, LobSnapshot{}) == kSystemMin);
  LobSnapshot asks;
  asks.best_ask = 160;
  CHECK(shvr_quote(140, Side::Ask, asks) == 159);
  asks.best_ask = 140;
  CHECK(shvr_quote(140, Side::Ask, asks) == 140);
}

TEST_CASE("sniper waits for the close") {
  LobSnapshot lob;
  lob.best_ask = 140;
  lob.best_bid = 90;
  CHECK_FALSE(snpr_quote(150, Side::Bid, lob, 500, 1000));
  CHECK(snpr_quote(150, Side::Bid, lob, 970, 1000) == 140);
  lob.best_ask = 160;
  CHECK_FALSE(snpr_quote(150, Side::Bid, lob, 970, 1000));
  CHECK(snpr_quote(80, Side::Ask, lob, 970, 1000) == 90);
  CHECK_FALSE(snpr_quote(95, Side::Ask, lob, 970, 1000));
}

TEST_CASE("zip quote and one delta step") {
  ZipState st;
  st.side = Side::Ask;
  st.margin = 0.2;
  st.beta = 0.5;
  st.gamma = 0.0;
  CHECK(zip_quote(st, 100) == 120);
  const auto next = zip_step(st, 100, 110.0);
  CHECK(zip_quote(next, 100) == 115);
}

TEST_CASE("zip margins keep their sign under random events") {
  Rng rng(7);
  for (auto side : {Side::Bid, Side::Ask}) {
    auto st = ZipState::random(side, rng);
    for (int i = 0; i < 10000; ++i) {
      const Price limit = static_cast<Price>(rng.uniform_int(50, 400));
      const MarketEvent ev{static_cast<Price>(rng.uniform_int(1, 1000)), rng.uniform01() < 0.5 ? Side::Bid : Side::Ask,
                           rng.uniform01() < 0.5};
      st = zip_update(st, limit, rng.uniform01() < 0.7, ev, rng);
      if (side == Side::Bid) {
        REQUIRE(st.margin <= 0.0);
        REQUIRE(zip_quote(st, limit) <= limit);
      } else {
        REQUIRE(st.margin >= 0.0);
        REQUIRE(zip_quote(st, limit) >= limit);
      }
      REQUIRE(is_valid_price(zip_quote(st, limit)));
    }
  }
}

TEST_CASE("zip sellers raise margin after trades above their quote") {
  Rng rng(8);
  ZipState st;
  st.side = Side::Ask;
  st.margin = 0.1;
  st.beta = 0.3;
  st.gamma = 0.0;
  const auto before = zip_quote(st, 100);
  st = zip_update(st, 100, true, MarketEvent{150, Side::Bid, true}, rng);
  CHECK(zip_quote(st, 100) > before);
}
