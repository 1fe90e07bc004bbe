#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace prm {

/// splitmix64 finalizer; the single mixing step behind every derived seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a sequence of tags into one seed: h = mix64(h ^ tag) for each tag,
/// starting from the master seed. Order matters.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;

/// FNV-1a, used to turn labels (dynamic names, cell keys) into seed tags.
std::uint64_t hash_label(std::string_view label) noexcept;

/// Seeded random source. The engine is std::mt19937_64; the transforms below
/// are written out so streams are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform01_open_low() { return 1.0 - uniform01(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard normal via Box-Muller (one output per call, no cached spare).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate);

private:
  std::mt19937_64 engine_;
};

} // namespace prm
