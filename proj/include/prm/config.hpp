#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prm/harness.hpp"
#include "prm/session.hpp"

namespace prm {

/// Raised for unknown keys, malformed lines, type mismatches and
/// out-of-range values. The message names the key and, when read from a
/// file, the offending line.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Everything the experiment CLI can configure. Population counts are per side.
struct ExperimentConfig {
  double duration{1000.0};
  int ticks_per_second{1};
  double lambda{2.0};

  int pop_gvwy{20};
  int pop_zic{20};
  int pop_zip{20};
  int pop_snpr{20};
  int pop_shvr{20};
  int pop_prsh{20};
  int pop_prb{20};

  prsh::PrshConfig prsh{4, 128.0, prsh::Mutation::M3, true};
  prb::PrbConfig prb{2, 32.0};
  gp::GpOptions gp{};
  double snpr_window{0.05};

  std::size_t runs{100};       // comparison runs
  std::size_t sweep_runs{100}; // runs per sweep cell
  std::vector<int> sweep_prsh_k{2, 4, 6, 8, 10, 12, 14, 16};
  std::vector<double> sweep_prsh_v{32, 64, 128, 256};
  std::vector<prsh::Mutation> sweep_prsh_m{prsh::Mutation::M1, prsh::Mutation::M2, prsh::Mutation::M3};
  std::vector<int> sweep_prb_k{2, 3, 4};
  std::vector<double> sweep_prb_v{32, 64, 128, 256};
  std::size_t kde_points{200};

  /// Sets one key from its text value. Throws ConfigError.
  void set(const std::string& key, const std::string& value);

  /// Every key with its current value, in a fixed order.
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> resolved() const;

  /// Session template with the configured population and agent parameters.
  [[nodiscard]] SessionConfig session_config(std::uint64_t seed) const;

  [[nodiscard]] std::vector<harness::SweepCell> prsh_sweep_grid() const;
  [[nodiscard]] std::vector<harness::SweepCell> prb_sweep_grid() const;

  /// Cross-key checks (window lengths); throws ConfigError.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");

ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace prm
