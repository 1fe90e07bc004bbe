#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prm/session.hpp"
#include "prm/stats.hpp"

namespace prm::harness {

/// i.i.d. per-run samples for one labelled configuration.
struct SampleSet {
  std::string label;
  std::vector<double> samples;

  [[nodiscard]] std::size_t n() const noexcept { return samples.size(); }
};

/// One hyperparameter combination of a sweep. `m` is only meaningful for PRSH.
struct SweepCell {
  Algo algo{Algo::PRSH};
  int k{2};
  double v{32.0};
  prsh::Mutation m{prsh::Mutation::M1};

  /// Stable text key, e.g. "PRSH:k=6:v=128:m=m3"; also the seed tag.
  [[nodiscard]] std::string key() const;
  [[nodiscard]] prsh::PrshConfig prsh_config(bool elitism = true) const;
  [[nodiscard]] prb::PrbConfig prb_config() const;

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

std::vector<SweepCell> prsh_grid(const std::vector<int>& ks, const std::vector<double>& vs,
                                 const std::vector<prsh::Mutation>& ms);
std::vector<SweepCell> prb_grid(const std::vector<int>& ks, const std::vector<double>& vs);

struct CellResult {
  SweepCell cell;
  SampleSet set;
  double mean{0.0};
  double std{0.0};
  std::optional<stats::TestReport> ks;  // absent when n < 8 or the sample is flat
  std::optional<stats::TestReport> z;   // best vs this cell; absent when both samples are flat
  bool in_winner_set{false};
};

struct SweepResult {
  Algo algo{Algo::PRSH};
  MarketDynamic dynamic;
  std::vector<CellResult> cells;
  std::size_t best{0};

  [[nodiscard]] std::vector<SweepCell> winners() const;
};

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers write results
/// by index, so output never depends on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Seed for run `run` of a sweep cell: derived from (master, dynamic, cell key, run).
std::uint64_t sweep_seed(std::uint64_t master, DynamicKind e, const SweepCell& cell, std::size_t run);
std::uint64_t comparison_seed(std::uint64_t master, DynamicKind e, std::size_t run);

/// Sessions with `base`'s population plus the swept algorithm; records the
/// swept algorithm's mean per-trader profit per run, then K-S per cell and
/// a one-sided Z-test of the best cell against every cell.
SweepResult run_sweep(Algo algo, const MarketDynamic& e, const std::vector<SweepCell>& grid, std::size_t runs_per_cell,
                      const SessionConfig& base, std::uint64_t master_seed, unsigned jobs = 1);

struct ComparisonResult {
  MarketDynamic dynamic;
  SampleSet d;                       // mean PRB profit minus mean PRSH profit, per run
  std::vector<double> prsh_means;
  std::vector<double> prb_means;
  prb::EnsembleAudit audit;          // summed over every PRB trader in every run
  std::uint64_t size_mismatches{0};
};

/// Both algorithms trade together; every trader draws its hyperparameters
/// uniformly from its algorithm's winner set.
ComparisonResult run_comparison(const MarketDynamic& e, const std::vector<SweepCell>& prsh_winners,
                                const std::vector<SweepCell>& prb_winners, std::size_t runs,
                                const SessionConfig& base, std::uint64_t master_seed, unsigned jobs = 1);

/// Sweep table: `e,algo,k,v,m,n,mean,std,ks_p,z_p,in_winner_set,mean_per_1000`.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool header = true);
/// `e,run,d`
void write_d_csv(std::ostream& out, const ComparisonResult& cmp, bool header = true);
/// `e,n,mean,std,ks_d,ks_p,z,z_p` followed by the two decisions.
void write_tests_csv(std::ostream& out, const ComparisonResult& cmp, bool header = true);
/// `x,density`
void write_kde_csv(std::ostream& out, const std::vector<std::pair<double, double>>& points);

/// Shortest round-trip-safe formatting used by every CSV writer.
std::string format_number(double x);

} // namespace prm::harness
