#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "prm/config.hpp"
#include "prm/harness.hpp"
#include "prm/selftest.hpp"
#include "prm/session.hpp"
#include "prm/stats.hpp"

#ifndef PRM_VERSION
#define PRM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string dynamic{"trend"};
  std::uint64_t seed{1};
  std::size_t runs{0};
  double duration{0.0};
  std::string out;
  std::string config;
  unsigned jobs{1};
  std::string input;
  std::size_t points{0};
};

struct Context {
  std::string command;
  Options opt;
  prm::ExperimentConfig cfg;
  prm::MarketDynamic dynamic;
  std::vector<std::string> outputs;
};

prm::ExperimentConfig resolve_config(const Options& opt) {
  prm::ExperimentConfig cfg = opt.config.empty() ? prm::ExperimentConfig{} : prm::load_config(opt.config);
  if (opt.duration > 0.0) cfg.duration = opt.duration;
  if (opt.points > 0) cfg.kde_points = opt.points;
  return cfg;
}

void write_file(Context& ctx, const std::string& name, const std::string& body) {
  const fs::path dir(ctx.opt.out);
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  f << body;
  if (!f) throw std::runtime_error("write failed for " + (dir / name).string());
  ctx.outputs.push_back(name);
}

// Written last so it can list every output. --jobs is left out: it never changes results.
void write_manifest(Context& ctx) {
  json m;
  m["command"] = ctx.command;
  m["version"] = PRM_VERSION;
  m["master_seed"] = ctx.opt.seed;
  m["dynamic"] = ctx.opt.dynamic;
  json resolved = json::object();
  for (const auto& [k, v] : ctx.cfg.resolved()) resolved[k] = v;
  m["config"] = resolved;
  if (!ctx.opt.input.empty()) m["input"] = ctx.opt.input;
  m["seed_derivation"] = "splitmix64 chain over (master_seed, label hash, dynamic, cell key hash, run)";
  m["outputs"] = ctx.outputs;
  const std::string body = m.dump(2) + "\n";
  write_file(ctx, "manifest.json", body);
}

std::string sweep_csv(const prm::harness::SweepResult& r) {
  std::ostringstream ss;
  prm::harness::write_sweep_csv(ss, r);
  return ss.str();
}

int cmd_session(Context& ctx) {
  auto scfg = ctx.cfg.session_config(ctx.opt.seed);
  const auto result = prm::run_session(scfg, ctx.dynamic);
  const std::string body = prm::session_to_json(result) + "\n";
  std::cout << body;
  if (!ctx.opt.out.empty()) {
    write_file(ctx, "session.json", body);
    write_manifest(ctx);
  }
  return kExitOk;
}

int cmd_sweep(Context& ctx, prm::Algo algo) {
  if (ctx.opt.runs > 0) ctx.cfg.sweep_runs = ctx.opt.runs;
  const auto grid = algo == prm::Algo::PRSH ? ctx.cfg.prsh_sweep_grid() : ctx.cfg.prb_sweep_grid();
  const auto base = ctx.cfg.session_config(ctx.opt.seed);
  const auto r = prm::harness::run_sweep(algo, ctx.dynamic, grid, ctx.cfg.sweep_runs, base, ctx.opt.seed, ctx.opt.jobs);
  const std::string body = sweep_csv(r);
  if (ctx.opt.out.empty()) {
    std::cout << body;
  } else {
    write_file(ctx, algo == prm::Algo::PRSH ? "sweep_prsh.csv" : "sweep_prb.csv", body);
    write_manifest(ctx);
  }
  return kExitOk;
}

std::string kde_csv(const std::vector<double>& xs, std::size_t points) {
  std::ostringstream ss;
  prm::harness::write_kde_csv(ss, prm::stats::kde_points(xs, points));
  return ss.str();
}

int cmd_compare(Context& ctx) {
  if (ctx.opt.out.empty()) throw UsageError("compare requires --out DIR");
  if (ctx.opt.runs > 0) ctx.cfg.runs = ctx.opt.runs;
  const auto base = ctx.cfg.session_config(ctx.opt.seed);
  const auto jobs = ctx.opt.jobs;
  const auto prsh = prm::harness::run_sweep(prm::Algo::PRSH, ctx.dynamic, ctx.cfg.prsh_sweep_grid(),
                                            ctx.cfg.sweep_runs, base, ctx.opt.seed, jobs);
  const auto prb = prm::harness::run_sweep(prm::Algo::PRB, ctx.dynamic, ctx.cfg.prb_sweep_grid(), ctx.cfg.sweep_runs,
                                           base, ctx.opt.seed, jobs);
  const auto cmp = prm::harness::run_comparison(ctx.dynamic, prsh.winners(), prb.winners(), ctx.cfg.runs, base,
                                                ctx.opt.seed, jobs);

  write_file(ctx, "sweep_prsh.csv", sweep_csv(prsh));
  write_file(ctx, "sweep_prb.csv", sweep_csv(prb));
  std::ostringstream d, tests;
  prm::harness::write_d_csv(d, cmp);
  prm::harness::write_tests_csv(tests, cmp);
  write_file(ctx, "d.csv", d.str());
  write_file(ctx, "tests.csv", tests.str());
  write_file(ctx, "kde.csv", kde_csv(cmp.d.samples, ctx.cfg.kde_points));
  write_manifest(ctx);

  const auto& xs = cmp.d.samples;
  const auto z = prm::stats::z_test_positive_mean(xs);
  std::cout << fmt::format("{} d_mean={} n={} z={} p={} prb_violations={}\n", prm::dynamic_name(ctx.dynamic.kind),
                           prm::harness::format_number(prm::stats::mean(xs)), xs.size(),
                           prm::harness::format_number(z.statistic), prm::harness::format_number(z.p_value),
                           cmp.audit.size_violations + cmp.audit.age_violations + cmp.audit.observation_violations +
                               cmp.size_mismatches);
  return kExitOk;
}

// Reads the `d` column of a CSV with a header row, or the last column if there is no `d`.
std::vector<double> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read input file " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  auto header = split(line);
  std::size_t col = header.size() - 1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "d") col = i;
  }
  std::vector<double> xs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    try {
      std::size_t used = 0;
      const std::string& cell = cells.at(col);
      xs.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw std::runtime_error(fmt::format("{}:{}: not a number in column {}: '{}'", path, line_no, col + 1, line));
    }
  }
  return xs;
}

int cmd_kde(Context& ctx) {
  if (ctx.opt.input.empty()) throw UsageError("kde requires --input FILE");
  const auto body = kde_csv(read_samples(ctx.opt.input), ctx.cfg.kde_points);
  if (ctx.opt.out.empty()) {
    std::cout << body;
  } else {
    write_file(ctx, "kde.csv", body);
    write_manifest(ctx);
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Options& opt, bool runs) {
  sub->add_option("--dynamic", opt.dynamic, "Market dynamic")->check(CLI::IsMember({"trend", "trendless"}));
  sub->add_option("--seed", opt.seed, "Master seed");
  if (runs) sub->add_option("--runs", opt.runs, "Runs (per cell for sweeps)")->check(CLI::Range(2, 1000000));
  sub->add_option("--duration", opt.duration, "Session length in seconds")->check(CLI::PositiveNumber);
  sub->add_option("--out", opt.out, "Output directory");
  sub->add_option("--config", opt.config, "key = value configuration file");
  sub->add_option("--jobs", opt.jobs, "Parallel sessions")->check(CLI::Range(1u, 1024u));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Market simulation experiments with PRZI strategy learners"};
  app.set_version_flag("--version", PRM_VERSION);
  app.require_subcommand(1);
  Options opt;

  auto* session = app.add_subcommand("session", "Run one seeded session and print its JSON result");
  add_common(session, opt, false);
  auto* sweep_prsh = app.add_subcommand("sweep-prsh", "Hyperparameter sweep for PRSH");
  add_common(sweep_prsh, opt, true);
  auto* sweep_prb = app.add_subcommand("sweep-prb", "Hyperparameter sweep for PRB");
  add_common(sweep_prb, opt, true);
  auto* compare = app.add_subcommand("compare", "Sweeps, then PRB against PRSH on the winner sets");
  add_common(compare, opt, true);
  auto* kde = app.add_subcommand("kde", "Kernel density points from a sample CSV");
  kde->add_option("--input", opt.input, "CSV with a `d` column")->required();
  kde->add_option("--points", opt.points, "Number of evaluation points")->check(CLI::Range(2, 1000000));
  kde->add_option("--out", opt.out, "Output directory");
  kde->add_option("--config", opt.config, "key = value configuration file");
  auto* selftest = app.add_subcommand("selftest", "Oracle and calibration checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.opt = opt;
  try {
    if (selftest->parsed()) return prm::run_selftest(std::cout) == 0 ? kExitOk : kExitRuntime;
    ctx.cfg = resolve_config(opt);
    ctx.cfg.validate();
    const auto kind = prm::parse_dynamic(opt.dynamic);
    if (!kind) throw UsageError("unknown dynamic " + opt.dynamic);
    ctx.dynamic = prm::MarketDynamic{*kind, true};
    if (session->parsed()) return cmd_session(ctx);
    if (sweep_prsh->parsed()) return cmd_sweep(ctx, prm::Algo::PRSH);
    if (sweep_prb->parsed()) return cmd_sweep(ctx, prm::Algo::PRB);
    if (compare->parsed()) return cmd_compare(ctx);
    if (kde->parsed()) return cmd_kde(ctx);
  } catch (const prm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
