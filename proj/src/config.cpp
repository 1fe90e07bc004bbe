#include "prm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace prm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError(fmt::format("config key '{}': {}", key, what));
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) bad(key, "expected a number, got '" + v + "'");
    return out;
  } catch (const std::logic_error&) {
    bad(key, "expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

int int_at_least(const std::string& key, const std::string& v, long long lo) {
  const auto x = to_int(key, v);
  if (x < lo) bad(key, fmt::format("value {} is out of range (must be >= {})", x, lo));
  if (x > 1'000'000) bad(key, fmt::format("value {} is out of range", x));
  return static_cast<int>(x);
}

double positive(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (!(x > 0.0)) bad(key, fmt::format("value {} is out of range (must be > 0)", v));
  return x;
}

prsh::Mutation mutation(const std::string& key, const std::string& v) {
  auto m = prsh::parse_mutation(v);
  if (!m) bad(key, "expected m1, m2 or m3, got '" + v + "'");
  return *m;
}

template <typename T, typename F>
std::vector<T> list_of(const std::string& key, const std::string& v, F convert) {
  std::vector<T> out;
  for (const auto& item : split_list(v)) out.push_back(convert(key, item));
  if (out.empty()) bad(key, "list is empty");
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += f(xs[i]);
  }
  return out;
}

std::string num(double x) { return harness::format_number(x); }

} // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const std::string& v = value;
  if (key == "duration") duration = positive(key, v);
  else if (key == "ticks_per_second") ticks_per_second = int_at_least(key, v, 1);
  else if (key == "lambda") lambda = positive(key, v);
  else if (key == "pop.gvwy") pop_gvwy = int_at_least(key, v, 0);
  else if (key == "pop.zic") pop_zic = int_at_least(key, v, 0);
  else if (key == "pop.zip") pop_zip = int_at_least(key, v, 0);
  else if (key == "pop.snpr") pop_snpr = int_at_least(key, v, 0);
  else if (key == "pop.shvr") pop_shvr = int_at_least(key, v, 0);
  else if (key == "pop.prsh") pop_prsh = int_at_least(key, v, 0);
  else if (key == "pop.prb") pop_prb = int_at_least(key, v, 0);
  else if (key == "prsh.k") prsh.k = int_at_least(key, v, 2);
  else if (key == "prsh.v") prsh.v = positive(key, v);
  else if (key == "prsh.m") prsh.m = mutation(key, v);
  else if (key == "prsh.elitism") prsh.elitism = to_bool(key, v);
  else if (key == "prb.k") prb.k = int_at_least(key, v, 2);
  else if (key == "prb.v") prb.v = positive(key, v);
  else if (key == "gp.noise") {
    gp.noise = to_double(key, v);
    if (!(gp.noise >= 0.0)) bad(key, "value " + v + " is out of range (must be >= 0)");
  } else if (key == "gp.cap") gp.capacity = static_cast<std::size_t>(int_at_least(key, v, 2));
  else if (key == "snpr.window") {
    snpr_window = to_double(key, v);
    if (!(snpr_window > 0.0 && snpr_window <= 1.0)) bad(key, "value " + v + " is out of range (0, 1]");
  } else if (key == "runs") runs = static_cast<std::size_t>(int_at_least(key, v, 2));
  else if (key == "sweep.runs") sweep_runs = static_cast<std::size_t>(int_at_least(key, v, 2));
  else if (key == "sweep.prsh.k") sweep_prsh_k = list_of<int>(key, v, [](auto& k, auto& x) { return int_at_least(k, x, 2); });
  else if (key == "sweep.prsh.v") sweep_prsh_v = list_of<double>(key, v, positive);
  else if (key == "sweep.prsh.m") sweep_prsh_m = list_of<prsh::Mutation>(key, v, mutation);
  else if (key == "sweep.prb.k") sweep_prb_k = list_of<int>(key, v, [](auto& k, auto& x) { return int_at_least(k, x, 2); });
  else if (key == "sweep.prb.v") sweep_prb_v = list_of<double>(key, v, positive);
  else if (key == "kde.points") kde_points = static_cast<std::size_t>(int_at_least(key, v, 2));
  else throw ConfigError(fmt::format("unknown config key '{}'", key));
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const {
  auto ints = [](const std::vector<int>& xs) { return join<int>(xs, [](const int& x) { return std::to_string(x); }); };
  auto dbls = [](const std::vector<double>& xs) { return join<double>(xs, [](const double& x) { return num(x); }); };
  auto muts = [](const std::vector<prsh::Mutation>& xs) {
    return join<prsh::Mutation>(xs, [](const prsh::Mutation& m) { return std::string(prsh::mutation_name(m)); });
  };
  return {
      {"duration", num(duration)},
      {"ticks_per_second", std::to_string(ticks_per_second)},
      {"lambda", num(lambda)},
      {"pop.gvwy", std::to_string(pop_gvwy)},
      {"pop.zic", std::to_string(pop_zic)},
      {"pop.zip", std::to_string(pop_zip)},
      {"pop.snpr", std::to_string(pop_snpr)},
      {"pop.shvr", std::to_string(pop_shvr)},
      {"pop.prsh", std::to_string(pop_prsh)},
      {"pop.prb", std::to_string(pop_prb)},
      {"prsh.k", std::to_string(prsh.k)},
      {"prsh.v", num(prsh.v)},
      {"prsh.m", std::string(prsh::mutation_name(prsh.m))},
      {"prsh.elitism", prsh.elitism ? "true" : "false"},
      {"prb.k", std::to_string(prb.k)},
      {"prb.v", num(prb.v)},
      {"gp.noise", num(gp.noise)},
      {"gp.cap", std::to_string(gp.capacity)},
      {"snpr.window", num(snpr_window)},
      {"runs", std::to_string(runs)},
      {"sweep.runs", std::to_string(sweep_runs)},
      {"sweep.prsh.k", ints(sweep_prsh_k)},
      {"sweep.prsh.v", dbls(sweep_prsh_v)},
      {"sweep.prsh.m", muts(sweep_prsh_m)},
      {"sweep.prb.k", ints(sweep_prb_k)},
      {"sweep.prb.v", dbls(sweep_prb_v)},
      {"kde.points", std::to_string(kde_points)},
  };
}

SessionConfig ExperimentConfig::session_config(std::uint64_t seed) const {
  SessionConfig cfg;
  cfg.duration = duration;
  cfg.ticks_per_second = ticks_per_second;
  cfg.arrival_rate = lambda;
  cfg.seed = seed;
  cfg.population = {{Algo::GVWY, pop_gvwy}, {Algo::ZIC, pop_zic},   {Algo::ZIP, pop_zip}, {Algo::SNPR, pop_snpr},
                    {Algo::SHVR, pop_shvr}, {Algo::PRSH, pop_prsh}, {Algo::PRB, pop_prb}};
  cfg.params.snpr_window = snpr_window;
  cfg.params.prsh = prsh;
  cfg.params.prb = prb;
  cfg.params.gp = gp;
  return cfg;
}

std::vector<harness::SweepCell> ExperimentConfig::prsh_sweep_grid() const {
  return harness::prsh_grid(sweep_prsh_k, sweep_prsh_v, sweep_prsh_m);
}

std::vector<harness::SweepCell> ExperimentConfig::prb_sweep_grid() const {
  return harness::prb_grid(sweep_prb_k, sweep_prb_v);
}

void ExperimentConfig::validate() const {
  auto check_window = [](const char* key, int k, double v) {
    if (prsh::window_ticks(k, v) < 1) {
      throw ConfigError(fmt::format("config key '{}': floor(v / k) must be >= 1 (k={}, v={})", key, k, num(v)));
    }
  };
  check_window("prsh.v", prsh.k, prsh.v);
  check_window("prb.v", prb.k, prb.v);
  for (int k : sweep_prsh_k) {
    for (double v : sweep_prsh_v) check_window("sweep.prsh.v", k, v);
  }
  for (int k : sweep_prb_k) {
    for (double v : sweep_prb_v) check_window("sweep.prb.v", k, v);
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value', got '{}'", source, line_no, trim(line)));
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {} (line: '{}')", source, line_no, e.what(), trim(line)));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

} // namespace prm
