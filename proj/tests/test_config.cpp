#include <doctest.h>

#include <string>

#include "prm/config.hpp"

using namespace prm;

TEST_CASE("empty text gives the defaults") {
  const auto cfg = parse_config("");
  CHECK(cfg.duration == 1000.0);
  CHECK(cfg.lambda == 2.0);
  CHECK(cfg.pop_gvwy == 20);
  CHECK(cfg.pop_zic == 20);
  CHECK(cfg.pop_zip == 20);
  CHECK(cfg.pop_snpr == 20);
  CHECK(cfg.pop_shvr == 20);
  CHECK(cfg.prsh_sweep_grid().size() == 96);
  CHECK(cfg.prb_sweep_grid().size() == 12);
  const auto s = cfg.session_config(3);
  CHECK(s.seed == 3);
  CHECK(s.population.size() == 7);
}

TEST_CASE("keys, comments and lists") {
  const auto cfg = parse_config(
      "# best trend cell\n"
      "prsh.k = 6\n"
      "prsh.v = 128   # seconds\n"
      "prsh.m = m3\n"
      "\n"
      "sweep.prb.k = 2, 4\n"
      "gp.noise = 0.01\n");
  CHECK(cfg.prsh.k == 6);
  CHECK(cfg.prsh.v == 128.0);
  CHECK(cfg.prsh.m == prsh::Mutation::M3);
  CHECK(cfg.sweep_prb_k == std::vector<int>{2, 4});
  CHECK(cfg.gp.noise == 0.01);
}

TEST_CASE("errors name the key and the line") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text, "cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const auto range = message("duration = 10\nprb.k = 0\n");
  CHECK(range.find("prb.k") != std::string::npos);
  CHECK(range.find("cfg:2") != std::string::npos);
  CHECK(range.find("range") != std::string::npos);
  CHECK(message("bogus = 1\n").find("unknown config key 'bogus'") != std::string::npos);
  CHECK(message("lambda = fast\n").find("lambda") != std::string::npos);
  CHECK(message("just words\n").find("cfg:1") != std::string::npos);
  CHECK(message("prsh.m = m4\n").find("prsh.m") != std::string::npos);
  CHECK(message("prsh.k = 8\nprsh.v = 4\n").find("prsh.v") != std::string::npos);
  CHECK(message("pop.zic = 2.5\n").find("pop.zic") != std::string::npos);
}

TEST_CASE("resolved keys round-trip") {
  auto cfg = parse_config("prsh.k = 6\nsweep.prsh.m = m1,m3\nlambda = 3.5\n");
  std::string text;
  for (const auto& [k, v] : cfg.resolved()) text += k + " = " + v + "\n";
  const auto again = parse_config(text);
  CHECK(again.resolved() == cfg.resolved());
  CHECK(again.lambda == 3.5);
}
