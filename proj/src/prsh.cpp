#include "prm/prsh.hpp"

#include <stdexcept>

namespace prm::prsh {

std::string_view mutation_name(Mutation m) noexcept {
  switch (m) {
  case Mutation::M1: return "m1";
  case Mutation::M2: return "m2";
  case Mutation::M3: return "m3";
  }
  return "m?";
}

std::optional<Mutation> parse_mutation(std::string_view name) noexcept {
  if (name == "m1") return Mutation::M1;
  if (name == "m2") return Mutation::M2;
  if (name == "m3") return Mutation::M3;
  return std::nullopt;
}

Tick window_ticks(int k, double v, int ticks_per_second) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const auto seconds = static_cast<Tick>(v / k);
  return seconds * ticks_per_second;
}

WindowPos window_of(Tick t, int k, Tick window) {
  const Tick stage_len = static_cast<Tick>(k) * window;
  return WindowPos{t / stage_len, static_cast<int>((t % stage_len) / window)};
}

std::int64_t stage_count(Tick total_ticks, int k, Tick window) {
  const Tick stage_len = static_cast<Tick>(k) * window;
  return (total_ticks + stage_len - 1) / stage_len;
}

std::vector<double> mutate(double s0, int k, Mutation m, Rng& rng, bool elitism, double width_scale) {
  s0 = przi::clamp_strategy(s0);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  if (elitism) out.push_back(s0);
  int mutant = 0;
  while (static_cast<int>(out.size()) < k) {
    double s = s0;
    switch (m) {
    case Mutation::M1: s += rng.normal(0.0, 0.05 * width_scale); break;
    case Mutation::M2: s += rng.normal(0.0, 0.15 * width_scale); break;
    case Mutation::M3: {
      const double step = rng.uniform(0.0, 0.1 * width_scale);
      s += (mutant % 2 == 0) ? step : -step;
      break;
    }
    }
    out.push_back(przi::clamp_strategy(s));
    ++mutant;
  }
  return out;
}

StageState make_stage(std::int64_t stage, const std::vector<double>& strategies, Tick window) {
  StageState st;
  st.stage = stage;
  const Tick base = stage * static_cast<Tick>(strategies.size()) * window;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    przi::StrategySlot slot;
    slot.s = strategies[i];
    slot.window_start = base + static_cast<Tick>(i) * window;
    slot.window_end = slot.window_start + window;
    st.slots.push_back(std::move(slot));
  }
  return st;
}

std::size_t best_slot(const StageState& stage) {
  std::size_t best = 0;
  double best_pps = przi::slot_pps(stage.slots.at(0));
  for (std::size_t i = 1; i < stage.slots.size(); ++i) {
    const double p = przi::slot_pps(stage.slots[i]);
    if (p > best_pps) {
      best = i;
      best_pps = p;
    }
  }
  return best;
}

StageState advance_stage(const StageState& stage, const PrshConfig& cfg, Tick window, Rng& rng) {
  const double incumbent = stage.slots[best_slot(stage)].s;
  return make_stage(stage.stage + 1, mutate(incumbent, cfg.k, cfg.m, rng, cfg.elitism), window);
}

PrshLearner::PrshLearner(PrshConfig cfg, int ticks_per_second, Rng& rng)
    : cfg_(cfg), window_(window_ticks(cfg.k, cfg.v, ticks_per_second)) {
  if (cfg_.k < 2) throw std::invalid_argument("prsh.k must be >= 2");
  if (window_ < 1) throw std::invalid_argument("prsh window floor(v/k) must be >= 1");
  const double s0 = rng.uniform(-1.0, 1.0);
  stage_ = make_stage(0, mutate(s0, cfg_.k, cfg_.m, rng, cfg_.elitism), window_);
}

void PrshLearner::on_tick(Tick t, Rng& rng) {
  const auto target = window_of(t, cfg_.k, window_).stage;
  while (stage_.stage < target) {
    incumbents_.push_back(stage_.slots[best_slot(stage_)].s);
    stage_ = advance_stage(stage_, cfg_, window_, rng);
  }
}

PrshLearner::Choice PrshLearner::current(Tick t) const {
  const auto pos = window_of(t, cfg_.k, window_);
  return Choice{stage_.slots[static_cast<std::size_t>(pos.slot)].s, stage_.stage, pos.slot};
}

void PrshLearner::record_fill(const Choice& choice, std::int64_t profit, double pps) {
  if (choice.stage != stage_.stage) return;
  auto& slot = stage_.slots[static_cast<std::size_t>(choice.slot)];
  slot.profit += profit;
  ++slot.fills;
  slot.pps_samples.push_back(pps);
}

} // namespace prm::prsh
