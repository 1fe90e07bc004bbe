#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "prm/przi.hpp"

using namespace prm;
using namespace prm::przi;

namespace {

LobSnapshot asks_up_to(Price worst) {
  LobSnapshot lob;
  lob.best_ask = worst;
  lob.worst_ask = worst;
  return lob;
}

} // namespace

TEST_CASE("shape exponent anchors") {
  CHECK(shape_exponent(0.0) == doctest::Approx(1.0));
  CHECK(shape_exponent(-1.0) == doctest::Approx(0.0));
  CHECK(shape_exponent(1.0) == kExponentCap);
  CHECK(shape_exponent(0.5) == doctest::Approx(std::tan(3.0 * std::numbers::pi / 8.0)));
}

TEST_CASE("quote anchors") {
  Rng rng(1);
  const auto lob = asks_up_to(200);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(quote(1.0, 100, Side::Ask, lob, rng) == 100);
    REQUIRE(quote(-1.0, 100, Side::Ask, lob, rng) == 200);
  }
  LobSnapshot empty;
  CHECK(quote(-1.0, 100, Side::Ask, empty, rng) == kSystemMax);
  CHECK(quote(-1.0, 100, Side::Bid, empty, rng) == kSystemMin);
  CHECK(quote_from_uniform(0.0, 100, Side::Ask, lob, 0.25) == 125);
  CHECK(quote_from_uniform(0.0, 100, Side::Bid, empty, 0.5) == 100 - 50);
}

TEST_CASE("s = 0 is uniform between the limit and the worst ask") {
  Rng rng(2);
  const auto lob = asks_up_to(200);
  std::vector<int> counts(101, 0);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto q = quote(0.0, 100, Side::Ask, lob, rng);
    sum += q;
    ++counts[static_cast<std::size_t>(q - 100)];
  }
  CHECK(std::abs(sum / n - 150.0) < 2.0);
  // Interior prices get width 1 in u, the two endpoints width 1/2 each (rounding).
  std::vector<double> bins(10, 0.0), expect(10, 0.0);
  for (int p = 0; p <= 100; ++p) {
    const double w = (p == 0 || p == 100) ? 0.5 : 1.0;
    const auto b = static_cast<std::size_t>(std::min(p / 10, 9));
    bins[b] += counts[static_cast<std::size_t>(p)];
    expect[b] += n * w / 100.0;
  }
  double chi2 = 0.0;
  for (std::size_t b = 0; b < 10; ++b) chi2 += (bins[b] - expect[b]) * (bins[b] - expect[b]) / expect[b];
  CHECK(chi2 < 21.67);  // chi2(9) 0.99 quantile
}

TEST_CASE("quotes are never loss-making") {
  Rng rng(3);
  for (int i = 0; i < 20000; ++i) {
    LobSnapshot lob;
    if (rng.uniform01() < 0.7) {
      const auto a = static_cast<Price>(rng.uniform_int(1, 1000));
      const auto b = static_cast<Price>(rng.uniform_int(1, 1000));
      lob.worst_ask = std::max(a, b);
      lob.best_ask = std::min(a, b);
    }
    if (rng.uniform01() < 0.7) {
      const auto a = static_cast<Price>(rng.uniform_int(1, 1000));
      const auto b = static_cast<Price>(rng.uniform_int(1, 1000));
      lob.worst_bid = std::min(a, b);
      lob.best_bid = std::max(a, b);
    }
    const double s = rng.uniform(-1.0, 1.0);
    const auto limit = static_cast<Price>(rng.uniform_int(1, 1000));
    const auto ask = quote(s, limit, Side::Ask, lob, rng);
    const auto bid = quote(s, limit, Side::Bid, lob, rng);
    REQUIRE(ask >= limit);
    REQUIRE(bid <= limit);
    REQUIRE(is_valid_price(ask));
    REQUIRE(is_valid_price(bid));
  }
}

TEST_CASE("mean seller quote falls as s rises") {
  Rng rng(4);
  const auto lob = asks_up_to(300);
  double prev = 1e9;
  for (int j = 0; j <= 20; ++j) {
    const double s = -1.0 + 0.1 * j;
    double sum = 0.0;
    for (int i = 0; i < 1000; ++i) sum += quote(s, 100, Side::Ask, lob, rng);
    const double m = sum / 1000.0;
    CHECK(m <= prev + 1.0);  // sampling slack at neighbouring grid points
    prev = m;
  }
}

TEST_CASE("profit per second") {
  CHECK(pps_of_fill(50.0, 0, 10) == doctest::Approx(5.0));
  CHECK(pps_of_fill(50.0, 3, 3) == doctest::Approx(50.0));
  CHECK(pps_of_fill(0.0, 0, 10) == 0.0);
  CHECK(pps_of_fill(50.0, 0, 10, 2) == doctest::Approx(10.0));
}

TEST_CASE("slot pps") {
  StrategySlot slot;
  CHECK(slot_pps(slot) == 0.0);
  slot.pps_samples = {7.5};
  CHECK(slot_pps(slot) == 7.5);
  slot.pps_samples = {2.0, 4.0};
  CHECK(slot_pps(slot) == 3.0);
  StrategySlot a, b;
  a.pps_samples = {0.1, 1e8, 0.7, -3.0, 2.2};
  b.pps_samples = {2.2, -3.0, 0.7, 1e8, 0.1};
  CHECK(slot_pps(a) == slot_pps(b));
}
