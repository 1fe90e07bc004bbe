#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prm/gp.hpp"
#include "prm/lob.hpp"
#include "prm/rng.hpp"

namespace prm::prb {

struct PrbConfig {
  int k{2};
  double v{32.0};  // strategy wait time, seconds

  friend bool operator==(const PrbConfig&, const PrbConfig&) = default;
};

/// GP i owns the i-th W-tick sub-window of every k*W-tick stage.
std::size_t active_gp(Tick t, int k, Tick window);

/// exp(x_i - max x) / sum_j exp(x_j - max x).
std::vector<double> softmax_weights(std::span<const double> values);

/// Draws `count` distinct indices, each draw proportional to the remaining
/// weights (successive renormalization). Returned in draw order.
std::vector<std::size_t> draw_without_replacement(std::span<const double> weights, std::size_t count,
                                                  Rng& rng);

struct GpMember {
  std::uint64_t id{0};
  std::int64_t created_stage{0};
  gp::GaussianProcess process;
  double reward{0.0};           // R_i for the current stage
  std::int64_t quotes{0};       // n_i for the current stage
  std::uint64_t observations_added{0};
  std::optional<gp::PosteriorGrid> cached;  // dropped whenever the process changes
};

/// A strategy handed out by the ensemble, remembered until it fills.
struct PendingQuote {
  double s{0.0};
  std::uint64_t gp_id{0};
  Tick t_buf{0};
};

/// Counters for the ensemble's structural guarantees.
struct EnsembleAudit {
  std::uint64_t turnovers{0};
  std::uint64_t size_violations{0};
  std::uint64_t age_violations{0};
  std::uint64_t fills{0};
  std::uint64_t observation_violations{0};
};

/// k GPs with different memory lengths. Within a stage, the GP whose
/// sub-window contains the current tick proposes strategies; every fill
/// updates all k GPs. At each stage end, k-1 members survive by a softmax
/// draw on their mean stage reward and a fresh GP replaces the discarded one.
class PrbEnsemble {
public:
  PrbEnsemble(PrbConfig cfg, gp::GpOptions gp_opts, Tick window);

  /// Samples s from the active GP with temperature tau; n_i += 1, t_buf = t.
  PendingQuote choose_strategy(Tick t, double tau, Rng& rng);

  /// Adds (s, pps) to every GP and credits profit to the quoting GP's R_i
  /// when that GP is still a member.
  void observe_fill(const PendingQuote& quote, double profit, Tick t, int ticks_per_second = 1);

  /// Softmax retention of k-1 members plus one fresh GP; resets R_i, n_i.
  void stage_end(Rng& rng);

  /// Runs stage_end for every stage boundary crossed up to tick t.
  void on_tick(Tick t, Rng& rng);

  [[nodiscard]] std::int64_t stage() const noexcept { return stage_; }
  [[nodiscard]] std::span<const GpMember> members() const noexcept { return members_; }
  [[nodiscard]] std::int64_t age(std::size_t i) const { return stage_ - members_.at(i).created_stage; }
  [[nodiscard]] const EnsembleAudit& audit() const noexcept { return audit_; }
  [[nodiscard]] const PrbConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] Tick window() const noexcept { return window_; }

private:
  GpMember fresh_member();
  void check_structure();

  PrbConfig cfg_;
  gp::GpOptions gp_opts_;
  Tick window_;
  std::int64_t stage_{0};
  std::uint64_t next_id_{0};
  std::vector<GpMember> members_;
  EnsembleAudit audit_;
};

} // namespace prm::prb
