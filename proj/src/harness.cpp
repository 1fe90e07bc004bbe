#include "prm/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace prm::harness {

std::string SweepCell::key() const {
  if (algo == Algo::PRSH) {
    return fmt::format("PRSH:k={}:v={}:m={}", k, format_number(v), prsh::mutation_name(m));
  }
  return fmt::format("{}:k={}:v={}", algo_name(algo), k, format_number(v));
}

prsh::PrshConfig SweepCell::prsh_config(bool elitism) const { return prsh::PrshConfig{k, v, m, elitism}; }

prb::PrbConfig SweepCell::prb_config() const { return prb::PrbConfig{k, v}; }

std::vector<SweepCell> prsh_grid(const std::vector<int>& ks, const std::vector<double>& vs,
                                 const std::vector<prsh::Mutation>& ms) {
  std::vector<SweepCell> grid;
  for (auto m : ms) {
    for (int k : ks) {
      for (double v : vs) grid.push_back(SweepCell{Algo::PRSH, k, v, m});
    }
  }
  return grid;
}

std::vector<SweepCell> prb_grid(const std::vector<int>& ks, const std::vector<double>& vs) {
  std::vector<SweepCell> grid;
  for (int k : ks) {
    for (double v : vs) grid.push_back(SweepCell{Algo::PRB, k, v, prsh::Mutation::M1});
  }
  return grid;
}

std::vector<SweepCell> SweepResult::winners() const {
  std::vector<SweepCell> out;
  for (const auto& c : cells) {
    if (c.in_winner_set) out.push_back(c.cell);
  }
  return out;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto count = std::min<std::size_t>(jobs, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t sweep_seed(std::uint64_t master, DynamicKind e, const SweepCell& cell, std::size_t run) {
  return derive_seed(master, {hash_label("sweep"), hash_label(dynamic_name(e)), hash_label(cell.key()), run});
}

std::uint64_t comparison_seed(std::uint64_t master, DynamicKind e, std::size_t run) {
  return derive_seed(master, {hash_label("compare"), hash_label(dynamic_name(e)), run});
}

namespace {

void set_count(SessionConfig& cfg, Algo algo, int per_side) {
  for (auto& p : cfg.population) {
    if (p.algo == algo) {
      p.per_side = per_side;
      return;
    }
  }
  cfg.population.push_back(PopulationEntry{algo, per_side});
}

int count_of(const SessionConfig& cfg, Algo algo) {
  for (const auto& p : cfg.population) {
    if (p.algo == algo) return p.per_side;
  }
  return 0;
}

} // namespace

SweepResult run_sweep(Algo algo, const MarketDynamic& e, const std::vector<SweepCell>& grid, std::size_t runs_per_cell,
                      const SessionConfig& base, std::uint64_t master_seed, unsigned jobs) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (runs_per_cell < 2) throw std::invalid_argument("sweep needs at least two runs per cell");
  if (algo != Algo::PRSH && algo != Algo::PRB) throw std::invalid_argument("only PRSH and PRB can be swept");
  if (count_of(base, algo) < 1) throw std::invalid_argument("population has no traders of the swept algorithm");

  SweepResult out;
  out.algo = algo;
  out.dynamic = e;
  out.cells.resize(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    out.cells[c].cell = grid[c];
    out.cells[c].set.label = std::string(dynamic_name(e.kind)) + "/" + grid[c].key();
    out.cells[c].set.samples.assign(runs_per_cell, 0.0);
  }

  const std::size_t total = grid.size() * runs_per_cell;
  parallel_for(total, jobs, [&](std::size_t job) {
    const std::size_t c = job / runs_per_cell;
    const std::size_t r = job % runs_per_cell;
    const auto& cell = grid[c];
    SessionConfig cfg = base;
    set_count(cfg, algo == Algo::PRSH ? Algo::PRB : Algo::PRSH, 0);
    cfg.prsh_choices.clear();
    cfg.prb_choices.clear();
    if (algo == Algo::PRSH) {
      cfg.params.prsh = cell.prsh_config(base.params.prsh.elitism);
    } else {
      cfg.params.prb = cell.prb_config();
    }
    cfg.seed = sweep_seed(master_seed, e.kind, cell, r);
    try {
      const auto res = run_session(cfg, e);
      out.cells[c].set.samples[r] = algo_mean(res, algo);
    } catch (const std::exception& ex) {
      throw std::runtime_error("sweep cell " + cell.key() + " run " + std::to_string(r) + ": " + ex.what());
    }
  });

  for (auto& cr : out.cells) {
    cr.mean = stats::mean(cr.set.samples);
    cr.std = stats::sample_std(cr.set.samples);
    if (cr.set.n() >= 8 && cr.std > 0.0) cr.ks = stats::ks_normal_test(cr.set.samples);
  }
  for (std::size_t c = 1; c < out.cells.size(); ++c) {
    if (out.cells[c].mean > out.cells[out.best].mean) out.best = c;
  }
  const auto& best = out.cells[out.best];
  for (std::size_t c = 0; c < out.cells.size(); ++c) {
    auto& cr = out.cells[c];
    if (best.std > 0.0 || cr.std > 0.0) cr.z = stats::z_test_greater(best.set.samples, cr.set.samples);
    if (cr.z) {
      cr.in_winner_set = !cr.z->reject;
    } else {
      cr.in_winner_set = cr.mean >= best.mean;
    }
  }
  out.cells[out.best].in_winner_set = true;
  return out;
}

ComparisonResult run_comparison(const MarketDynamic& e, const std::vector<SweepCell>& prsh_winners,
                                const std::vector<SweepCell>& prb_winners, std::size_t runs,
                                const SessionConfig& base, std::uint64_t master_seed, unsigned jobs) {
  if (prsh_winners.empty() || prb_winners.empty()) throw std::invalid_argument("winner sets must be non-empty");
  if (runs < 2) throw std::invalid_argument("comparison needs at least two runs");
  if (count_of(base, Algo::PRSH) < 1 || count_of(base, Algo::PRB) < 1) {
    throw std::invalid_argument("comparison population needs both PRSH and PRB traders");
  }

  SessionConfig cfg = base;
  cfg.prsh_choices.clear();
  cfg.prb_choices.clear();
  for (const auto& c : prsh_winners) cfg.prsh_choices.push_back(c.prsh_config(base.params.prsh.elitism));
  for (const auto& c : prb_winners) cfg.prb_choices.push_back(c.prb_config());

  ComparisonResult out;
  out.dynamic = e;
  out.d.label = std::string(dynamic_name(e.kind)) + "/PRB-PRSH";
  out.d.samples.assign(runs, 0.0);
  out.prsh_means.assign(runs, 0.0);
  out.prb_means.assign(runs, 0.0);
  std::vector<SessionResult> audits(runs);

  parallel_for(runs, jobs, [&](std::size_t r) {
    SessionConfig run_cfg = cfg;
    run_cfg.seed = comparison_seed(master_seed, e.kind, r);
    auto res = run_session(run_cfg, e);
    out.prsh_means[r] = algo_mean(res, Algo::PRSH);
    out.prb_means[r] = algo_mean(res, Algo::PRB);
    out.d.samples[r] = out.prb_means[r] - out.prsh_means[r];
    res.tape.clear();
    res.traders.clear();
    audits[r] = std::move(res);
  });

  for (const auto& a : audits) {
    out.audit.turnovers += a.prb_audit.turnovers;
    out.audit.size_violations += a.prb_audit.size_violations;
    out.audit.age_violations += a.prb_audit.age_violations;
    out.audit.fills += a.prb_audit.fills;
    out.audit.observation_violations += a.prb_audit.observation_violations;
    out.size_mismatches += a.prb_size_mismatches;
  }
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{}", x);
}

namespace {

std::string opt_p(const std::optional<stats::TestReport>& r) { return r ? format_number(r->p_value) : ""; }

} // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool header) {
  if (header) out << "e,algo,k,v,m,n,mean,std,ks_p,z_p,in_winner_set,mean_per_1000\n";
  for (const auto& c : sweep.cells) {
    out << dynamic_name(sweep.dynamic.kind) << ',' << algo_name(c.cell.algo) << ',' << c.cell.k << ','
        << format_number(c.cell.v) << ',' << (c.cell.algo == Algo::PRSH ? prsh::mutation_name(c.cell.m) : "")
        << ',' << c.set.n() << ',' << format_number(c.mean) << ',' << format_number(c.std) << ',' << opt_p(c.ks)
        << ',' << opt_p(c.z) << ',' << (c.in_winner_set ? 1 : 0) << ',' << format_number(c.mean / 1000.0)
        << '\n';
  }
}

void write_d_csv(std::ostream& out, const ComparisonResult& cmp, bool header) {
  if (header) out << "e,run,d\n";
  for (std::size_t r = 0; r < cmp.d.samples.size(); ++r) {
    out << dynamic_name(cmp.dynamic.kind) << ',' << r << ',' << format_number(cmp.d.samples[r]) << '\n';
  }
}

void write_tests_csv(std::ostream& out, const ComparisonResult& cmp, bool header) {
  if (header) out << "e,n,mean,std,ks_d,ks_p,z,z_p,ks_rejects_normal,mean_positive\n";
  const auto& d = cmp.d.samples;
  const double m = stats::mean(d);
  const double s = stats::sample_std(d);
  std::optional<stats::TestReport> ks;
  if (d.size() >= 8 && s > 0.0) ks = stats::ks_normal_test(d);
  std::optional<stats::TestReport> z;
  if (s > 0.0) z = stats::z_test_positive_mean(d);
  out << dynamic_name(cmp.dynamic.kind) << ',' << d.size() << ',' << format_number(m) << ',' << format_number(s)
      << ',' << (ks ? format_number(ks->statistic) : "") << ',' << opt_p(ks) << ','
      << (z ? format_number(z->statistic) : "") << ',' << opt_p(z) << ',' << (ks && ks->reject ? 1 : 0) << ','
      << (z && z->reject ? 1 : 0) << '\n';
}

void write_kde_csv(std::ostream& out, const std::vector<std::pair<double, double>>& points) {
  out << "x,density\n";
  for (const auto& [x, dens] : points) out << format_number(x) << ',' << format_number(dens) << '\n';
}

} // namespace prm::harness
