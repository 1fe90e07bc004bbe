#include "prm/lob.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace prm {

std::optional<Trade> OrderBook::submit_and_match(const Order& order) {
  if (!is_valid_price(order.price)) {
    throw std::invalid_argument("order price " + std::to_string(order.price) +
                                " outside system bounds");
  }
  cancel(order.trader_id);

  if (order.side == Side::Bid) {
    if (!asks_.empty() && asks_.begin()->first <= order.price) {
      auto level = asks_.begin();
      const Order resting = level->second.front();
      level->second.pop_front();
      if (level->second.empty()) asks_.erase(level);
      index_.erase(resting.trader_id);
      --ask_count_;
      return Trade{resting.price, order.trader_id, resting.trader_id, order.time};
    }
  } else {
    if (!bids_.empty() && bids_.begin()->first >= order.price) {
      auto level = bids_.begin();
      const Order resting = level->second.front();
      level->second.pop_front();
      if (level->second.empty()) bids_.erase(level);
      index_.erase(resting.trader_id);
      --bid_count_;
      return Trade{resting.price, resting.trader_id, order.trader_id, order.time};
    }
  }
  rest(order);
  return std::nullopt;
}

void OrderBook::rest(const Order& order) {
  if (order.side == Side::Bid) {
    bids_[order.price].push_back(order);
    ++bid_count_;
  } else {
    asks_[order.price].push_back(order);
    ++ask_count_;
  }
  index_[order.trader_id] = Locator{order.side, order.price};
}

void OrderBook::erase_from_level(const Locator& loc, TraderId trader_id) {
  auto drop = [trader_id](auto& book, Price price) {
    auto it = book.find(price);
    if (it == book.end()) return;
    auto& level = it->second;
    auto pos = std::find_if(level.begin(), level.end(),
                            [trader_id](const Order& o) { return o.trader_id == trader_id; });
    if (pos != level.end()) level.erase(pos);
    if (level.empty()) book.erase(it);
  };
  if (loc.side == Side::Bid) {
    drop(bids_, loc.price);
    --bid_count_;
  } else {
    drop(asks_, loc.price);
    --ask_count_;
  }
}

bool OrderBook::cancel(TraderId trader_id) {
  auto it = index_.find(trader_id);
  if (it == index_.end()) return false;
  erase_from_level(it->second, trader_id);
  index_.erase(it);
  return true;
}

LobSnapshot OrderBook::snapshot() const {
  LobSnapshot snap;
  if (!bids_.empty()) {
    snap.best_bid = bids_.begin()->first;
    snap.worst_bid = bids_.rbegin()->first;
  }
  if (!asks_.empty()) {
    snap.best_ask = asks_.begin()->first;
    snap.worst_ask = asks_.rbegin()->first;
  }
  snap.bid_depth = bid_count_;
  snap.ask_depth = ask_count_;
  return snap;
}

std::optional<Price> OrderBook::resting_price(TraderId trader_id) const {
  auto it = index_.find(trader_id);
  if (it == index_.end()) return std::nullopt;
  return it->second.price;
}

std::deque<Order> OrderBook::side_orders(Side side) const {
  std::deque<Order> out;
  auto collect = [&out](const auto& book) {
    for (const auto& [price, level] : book) out.insert(out.end(), level.begin(), level.end());
  };
  if (side == Side::Bid) {
    collect(bids_);
  } else {
    collect(asks_);
  }
  return out;
}

void OrderBook::clear() {
  bids_.clear();
  asks_.clear();
  index_.clear();
  bid_count_ = 0;
  ask_count_ = 0;
}

void write_trade_tape_csv(std::ostream& out, std::span<const Trade> trades) {
  out << "time,price,buyer_id,seller_id\n";
  for (const auto& t : trades) {
    out << t.time << ',' << t.price << ',' << t.buyer_id << ',' << t.seller_id << '\n';
  }
}

} // namespace prm
