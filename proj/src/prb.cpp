#include "prm/prb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "prm/przi.hpp"

namespace prm::prb {

std::size_t active_gp(Tick t, int k, Tick window) {
  const Tick stage_len = static_cast<Tick>(k) * window;
  return static_cast<std::size_t>((t % stage_len) / window);
}

std::vector<double> softmax_weights(std::span<const double> values) {
  std::vector<double> w(values.size());
  if (values.empty()) return w;
  const double top = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    w[i] = std::exp(values[i] - top);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

std::vector<std::size_t> draw_without_replacement(std::span<const double> weights, std::size_t count,
                                                  Rng& rng) {
  if (count > weights.size()) throw std::invalid_argument("cannot draw more items than available");
  std::vector<double> remaining(weights.begin(), weights.end());
  std::vector<bool> taken(weights.size(), false);
  std::vector<std::size_t> picks;
  picks.reserve(count);
  for (std::size_t d = 0; d < count; ++d) {
    double total = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (!taken[i]) total += remaining[i];
    }
    std::size_t chosen = remaining.size();
    if (total > 0.0) {
      const double u = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (taken[i]) continue;
        acc += remaining[i];
        chosen = i;
        if (u < acc) break;
      }
    } else {
      // All remaining mass underflowed: fall back to a uniform draw.
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (!taken[i]) open.push_back(i);
      }
      chosen = open[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))];
    }
    taken[chosen] = true;
    picks.push_back(chosen);
  }
  return picks;
}

PrbEnsemble::PrbEnsemble(PrbConfig cfg, gp::GpOptions gp_opts, Tick window)
    : cfg_(cfg), gp_opts_(gp_opts), window_(window) {
  if (cfg_.k < 2) throw std::invalid_argument("prb.k must be >= 2");
  if (window_ < 1) throw std::invalid_argument("prb window floor(v/k) must be >= 1");
  for (int i = 0; i < cfg_.k; ++i) members_.push_back(fresh_member());
}

GpMember PrbEnsemble::fresh_member() {
  GpMember m{next_id_++, stage_, gp::GaussianProcess(gp_opts_), 0.0, 0, 0, std::nullopt};
  return m;
}

PendingQuote PrbEnsemble::choose_strategy(Tick t, double tau, Rng& rng) {
  auto& member = members_[active_gp(t, cfg_.k, window_)];
  if (!member.cached) member.cached = member.process.posterior_grid(true);
  const double s = gp::acquire(*member.cached, tau, rng);
  ++member.quotes;
  return PendingQuote{s, member.id, t};
}

void PrbEnsemble::observe_fill(const PendingQuote& quote, double profit, Tick t, int ticks_per_second) {
  const double pps = przi::pps_of_fill(profit, quote.t_buf, t, ticks_per_second);
  ++audit_.fills;
  for (auto& m : members_) {
    const auto before = m.process.size();
    m.process.add(quote.s, pps);
    m.cached.reset();
    ++m.observations_added;
    if (m.process.size() != std::min(before + 1, gp_opts_.capacity)) ++audit_.observation_violations;
    if (m.id == quote.gp_id) m.reward += profit;
  }
}

void PrbEnsemble::stage_end(Rng& rng) {
  const auto k = members_.size();
  std::vector<double> mean_reward(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& m = members_[i];
    mean_reward[i] = m.quotes > 0 ? m.reward / static_cast<double>(m.quotes) : 0.0;
  }
  const auto weights = softmax_weights(mean_reward);
  auto survivors = draw_without_replacement(weights, k - 1, rng);
  // Survivors keep their relative order; the newcomer takes the last sub-window.
  std::sort(survivors.begin(), survivors.end());

  ++stage_;
  std::vector<GpMember> next;
  next.reserve(k);
  for (auto idx : survivors) next.push_back(std::move(members_[idx]));
  next.push_back(fresh_member());
  for (auto& m : next) {
    m.reward = 0.0;
    m.quotes = 0;
  }
  members_ = std::move(next);
  ++audit_.turnovers;
  check_structure();
}

void PrbEnsemble::check_structure() {
  if (members_.size() != static_cast<std::size_t>(cfg_.k)) ++audit_.size_violations;
  const auto fresh = std::count_if(members_.begin(), members_.end(),
                                   [this](const GpMember& m) { return m.created_stage == stage_; });
  if (fresh != 1) ++audit_.age_violations;
}

void PrbEnsemble::on_tick(Tick t, Rng& rng) {
  const Tick stage_len = static_cast<Tick>(cfg_.k) * window_;
  const auto target = t / stage_len;
  while (stage_ < target) stage_end(rng);
}

} // namespace prm::prb
