#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "prm/przi.hpp"
#include "prm/rng.hpp"

namespace prm::prsh {

/// Mutation functions generating the next stage's strategy set.
/// m1: s0 + N(0, 0.05); m2: s0 + N(0, 0.15); m3: alternating s0 +/- U(0, 0.1).
enum class Mutation : std::uint8_t { M1, M2, M3 };

std::string_view mutation_name(Mutation m) noexcept;
std::optional<Mutation> parse_mutation(std::string_view name) noexcept;

struct PrshConfig {
  int k{4};
  double v{128.0};  // strategy wait time, seconds
  Mutation m{Mutation::M3};
  bool elitism{true};

  friend bool operator==(const PrshConfig&, const PrshConfig&) = default;
};

/// W in ticks: floor(v / k) seconds times ticks_per_second.
Tick window_ticks(int k, double v, int ticks_per_second = 1);

struct WindowPos {
  std::int64_t stage{0};
  int slot{0};

  friend bool operator==(const WindowPos&, const WindowPos&) = default;
};

/// stage = floor(t / kW), slot = floor((t mod kW) / W).
WindowPos window_of(Tick t, int k, Tick window);

/// P = ceil(T / kW).
std::int64_t stage_count(Tick total_ticks, int k, Tick window);

/// Strategy set of size k around s0. With elitism, s0 is element 0 and the
/// remaining k-1 are mutants; otherwise all k are mutants. m3 alternates
/// up/down starting with up. width_scale multiplies the mutation width.
std::vector<double> mutate(double s0, int k, Mutation m, Rng& rng, bool elitism = true,
                           double width_scale = 1.0);

struct StageState {
  std::int64_t stage{0};
  std::vector<przi::StrategySlot> slots;
};

/// Fresh stage with one slot per strategy and windows laid out consecutively.
StageState make_stage(std::int64_t stage, const std::vector<double>& strategies, Tick window);

/// Index of the slot with the highest slot_pps; ties go to the lowest index.
std::size_t best_slot(const StageState& stage);

/// Picks the incumbent and builds the next stage around it.
StageState advance_stage(const StageState& stage, const PrshConfig& cfg, Tick window, Rng& rng);

/// Per-trader hillclimber over s.
class PrshLearner {
public:
  struct Choice {
    double s{0.0};
    std::int64_t stage{0};
    int slot{0};
  };

  /// Draws s0 ~ U(-1, 1) and builds stage 0 from mutate(s0).
  PrshLearner(PrshConfig cfg, int ticks_per_second, Rng& rng);

  /// Advances through any stage boundaries up to tick t.
  void on_tick(Tick t, Rng& rng);

  [[nodiscard]] Choice current(Tick t) const;

  /// Credits a fill to the slot it was quoted from; dropped if that stage has closed.
  void record_fill(const Choice& choice, std::int64_t profit, double pps);

  [[nodiscard]] const StageState& stage() const noexcept { return stage_; }
  [[nodiscard]] Tick window() const noexcept { return window_; }
  [[nodiscard]] const PrshConfig& config() const noexcept { return cfg_; }
  /// Incumbent chosen at each completed stage.
  [[nodiscard]] const std::vector<double>& incumbents() const noexcept { return incumbents_; }

private:
  PrshConfig cfg_;
  Tick window_;
  StageState stage_;
  std::vector<double> incumbents_;
};

} // namespace prm::prsh
