#include <doctest.h>

#include <cstdio>
#include <map>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtbc/scenario.hpp"

using namespace qtbc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_error(const std::vector<ValidationIssue>& issues) {
  for (const auto& i : issues)
    if (i.severity == Severity::error) return true;
  return false;
}

bool has_warning(const std::vector<ValidationIssue>& issues, const std::string& name) {
  for (const auto& i : issues)
    if (i.severity == Severity::warning && i.name == name) return true;
  return false;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("qtbc_test_" + tag);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("scenario defaults carry the published parameter sets") {
  const SimulationConfig f = SimulationConfig::defaults("free-1d");
  CHECK(f.nx == 201);
  CHECK(f.n_steps == 40);
  CHECK(f.t_final == 4.0);
  CHECK(f.sigma0 == 0.2);
  CHECK(f.v == 0.25);

  const SimulationConfig s = SimulationConfig::defaults("scatter-static");
  CHECK(s.sigma0 == 0.15);
  CHECK(s.x0 == -0.3);
  CHECK(s.v == 0.37);
  CHECK(s.v0 == -150.0);
  CHECK(s.b == 0.05);

  const SimulationConfig d = SimulationConfig::defaults("driven-trap");
  CHECK(d.v0 == -200.0);
  CHECK(d.omega == 0.05);
  CHECK(d.t_final == 80.0);
  CHECK(d.n_steps == 800);
  CHECK(d.nx == 800);
  CHECK(d.sigma0 == 0.10);

  const SimulationConfig t = SimulationConfig::defaults("tunneling");
  CHECK(t.v0 == 150.0);
  CHECK(t.a0 == 0.5);
  CHECK(t.sigma0 == 0.12);
  CHECK(t.v == 0.0);

  const SimulationConfig dd = SimulationConfig::defaults("driven-delta");
  CHECK(dd.n_steps == 1000);
  CHECK(dd.n_pulses == 40);
  CHECK(dd.freq_factor == 0.7);

  const SimulationConfig b = SimulationConfig::defaults("free-2d");
  CHECK(b.nx == 101);
  CHECK(b.ny == 45);
  CHECK(b.n_steps == 100);
  CHECK(b.center_y == 1.0);
  CHECK(b.vy == doctest::Approx(1.5 * b.vx));

  CHECK_THROWS_AS(SimulationConfig::defaults("nope"), std::invalid_argument);
}

TEST_CASE("overrides and config files") {
  SimulationConfig cfg = SimulationConfig::defaults("free-1d");
  cfg.apply_override("n_steps", "80");
  cfg.apply_override("sigma0", "0.25");
  cfg.apply_override("oracle", "true");
  CHECK(cfg.n_steps == 80);
  CHECK(cfg.sigma0 == 0.25);
  CHECK(cfg.oracle);
  CHECK_THROWS_AS(cfg.apply_override("nope", "1"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.apply_override("nx", "abc"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.apply_override("nx", "10.5"), std::invalid_argument);

  const fs::path dir = fresh_dir("cfg");
  fs::create_directories(dir);
  const std::string path = (dir / "run.cfg").string();
  {
    std::ofstream out(path);
    out << "# sample\nscenario = scatter-static\nnx = 301\nv = 0.4\n";
  }
  const SimulationConfig loaded = SimulationConfig::from_file(path);
  CHECK(loaded.scenario == "scatter-static");
  CHECK(loaded.nx == 301);
  CHECK(loaded.v == 0.4);
  CHECK(loaded.v0 == -150.0);  // untouched default
}

TEST_CASE("validation tiers") {
  CHECK_FALSE(has_error(validate_config(SimulationConfig::defaults("free-1d"))));
  CHECK_FALSE(has_error(validate_config(SimulationConfig::defaults("scatter-static"))));
  CHECK_FALSE(has_error(validate_config(SimulationConfig::defaults("driven-trap"))));
  CHECK_FALSE(has_error(validate_config(SimulationConfig::defaults("tunneling"))));
  CHECK_FALSE(has_error(validate_config(SimulationConfig::defaults("driven-delta"))));
  CHECK_FALSE(has_error(validate_config(SimulationConfig::defaults("free-2d"))));

  SimulationConfig leak = SimulationConfig::defaults("free-1d");
  leak.sigma0 = 0.5;
  leak.x0 = 0.9;
  CHECK(has_warning(validate_config(leak), "support-leak"));

  SimulationConfig alias = SimulationConfig::defaults("free-2d");
  alias.sigma0 = 0.05;
  CHECK(has_error(validate_config(alias)));

  SimulationConfig bad = SimulationConfig::defaults("free-1d");
  bad.n_steps = 0;
  CHECK(has_error(validate_config(bad)));
  CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
}

TEST_CASE("free-1d run emits checked artifacts deterministically") {
  SimulationConfig cfg = SimulationConfig::defaults("free-1d");
  const fs::path dir1 = fresh_dir("free1d_a"), dir2 = fresh_dir("free1d_b");
  cfg.out_dir = dir1.string();
  const RunReport rep = run_scenario(cfg);
  CHECK(rep.ok());
  CHECK(fs::exists(dir1 / "ledger.dat"));
  CHECK(fs::exists(dir1 / "snapshot_0.dat"));
  CHECK(fs::exists(dir1 / "snapshot_40.dat"));
  CHECK(fs::exists(dir1 / "manifest.txt"));

  // ledger has one row per step plus the header and start row
  {
    std::ifstream in(dir1 / "ledger.dat");
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == cfg.n_steps + 1);
  }

  // manifest records every physical parameter the modules consumed
  const std::string manifest = slurp((dir1 / "manifest.txt").string());
  for (const char* key :
       {"scenario", "a =", "nx =", "dx =", "n_steps", "t_final", "tau_per_step", "sigma0",
        "x0 =", "v =", "k0 =", "dt =", "mu2_im", "kernel_dft_size", "kernel_eta",
        "support_leak_ratio", "tolerance_conservation", "check conservation",
        "check analytic-accuracy", "check kernel-cross-check"})
    CHECK_MESSAGE(manifest.find(key) != std::string::npos, "missing manifest key: ", key);

  // identical config (including the output path) -> bit-identical files
  std::map<std::string, std::string> first;
  for (const char* f : {"ledger.dat", "snapshot_0.dat", "snapshot_40.dat", "manifest.txt"})
    first[f] = slurp((dir1 / f).string());
  run_scenario(cfg);  // same out_dir again
  for (const auto& [f, body] : first) CHECK(slurp((dir1 / f).string()) == body);
  (void)dir2;
}

TEST_CASE("free-1d oracle flag records the reference comparison") {
  SimulationConfig cfg = SimulationConfig::defaults("free-1d");
  cfg.oracle = true;
  cfg.out_dir = fresh_dir("free1d_oracle").string();
  const RunReport rep = run_scenario(cfg);
  bool found = false;
  for (const auto& c : rep.checks) found = found || c.name == "oracle";
  CHECK(found);
}

TEST_CASE("driven-delta run writes its time series") {
  SimulationConfig cfg = SimulationConfig::defaults("driven-delta");
  cfg.out_dir = fresh_dir("delta").string();
  const RunReport rep = run_scenario(cfg);
  CHECK(rep.ok());
  std::ifstream in(fs::path(cfg.out_dir) / "ledger.dat");
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == cfg.n_steps + 1);
}

TEST_CASE("free-2d run passes its built-in checks and writes densities") {
  SimulationConfig cfg = SimulationConfig::defaults("free-2d");
  cfg.out_dir = fresh_dir("band").string();
  const RunReport rep = run_scenario(cfg);
  CHECK(rep.ok());
  CHECK(fs::exists(fs::path(cfg.out_dir) / "density_0.dat"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "density_100.dat"));
  const std::string manifest = slurp((fs::path(cfg.out_dir) / "manifest.txt").string());
  CHECK(manifest.find("check analytic-accuracy = PASS") != std::string::npos);
  CHECK(manifest.find("check conservation = PASS") != std::string::npos);
}
