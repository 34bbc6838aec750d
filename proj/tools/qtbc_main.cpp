// qtbc: scenario runner for the transparent-boundary Crank-Nicolson solver.
//
//   qtbc run <scenario> [--config file] [--key value]... [--oracle]
//   qtbc validate <config-file>
//   qtbc kernels --dump [--out file] [--n-steps N] [--t-final T] [--sigma0 s]

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "qtbc/io.hpp"
#include "qtbc/scenario.hpp"

namespace {

std::string normalize_key(std::string key) {
  while (key.rfind("-", 0) == 0) key.erase(0, 1);
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

int apply_extras(qtbc::SimulationConfig& cfg, const std::vector<std::string>& extras) {
  for (size_t i = 0; i < extras.size(); ++i) {
    if (extras[i].rfind("--", 0) != 0) {
      std::fprintf(stderr, "error: expected --key, got '%s'\n", extras[i].c_str());
      return 2;
    }
    if (i + 1 >= extras.size()) {
      std::fprintf(stderr, "error: missing value for '%s'\n", extras[i].c_str());
      return 2;
    }
    cfg.apply_override(normalize_key(extras[i]), extras[i + 1]);
    ++i;
  }
  return 0;
}

const char* severity_tag(qtbc::Severity s) {
  switch (s) {
    case qtbc::Severity::ok: return "ok";
    case qtbc::Severity::warning: return "warning";
    case qtbc::Severity::error: return "error";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-box Schrodinger solver with transparent boundaries"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a named scenario");
  std::string scenario, config_file;
  bool oracle = false;
  run->add_option("scenario", scenario, "one of: free-1d scatter-static driven-trap tunneling "
                                        "driven-delta free-2d")
      ->required();
  run->add_option("--config", config_file, "key = value file applied before flag overrides");
  run->add_flag("--oracle", oracle, "also run the wide zero-Dirichlet reference comparison");
  run->allow_extras();

  auto* validate = app.add_subcommand("validate", "static checks on a config file");
  std::string validate_file;
  validate->add_option("config", validate_file, "config file with a scenario key")->required();

  auto* kernels = app.add_subcommand("kernels", "inspect the convolution kernel tables");
  bool dump = false;
  std::string kernels_out = "kernels.dat";
  int k_steps = 40;
  double k_tfinal = 4.0, k_sigma0 = 0.2;
  kernels->add_flag("--dump", dump, "write the coefficient and kernel-sum table");
  kernels->add_option("--out", kernels_out, "output path");
  kernels->add_option("--n-steps", k_steps, "step count covered by the table");
  kernels->add_option("--t-final", k_tfinal, "total time in spreading units");
  kernels->add_option("--sigma0", k_sigma0, "packet width setting the time unit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      qtbc::SimulationConfig cfg;
      if (!config_file.empty()) {
        cfg = qtbc::SimulationConfig::from_file(config_file);
        if (cfg.scenario != scenario) {
          std::fprintf(stderr, "error: config file is for scenario '%s', not '%s'\n",
                       cfg.scenario.c_str(), scenario.c_str());
          return 2;
        }
      } else {
        cfg = qtbc::SimulationConfig::defaults(scenario);
      }
      if (const int rc = apply_extras(cfg, run->remaining()); rc != 0) return rc;
      if (oracle) cfg.oracle = true;

      for (const auto& issue : qtbc::validate_config(cfg))
        if (issue.severity == qtbc::Severity::warning)
          std::fprintf(stderr, "warning: %s: %s\n", issue.name.c_str(), issue.message.c_str());

      const qtbc::RunReport report = qtbc::run_scenario(cfg);
      for (const auto& check : report.checks)
        std::printf("check %s = %s (%s)\n", check.name.c_str(), check.pass ? "PASS" : "FAIL",
                    check.details.c_str());
      std::printf("artifacts in %s\n", report.out_dir.c_str());
      for (const auto& check : report.checks) {
        if (!check.pass) {
          std::fprintf(stderr, "failed check: %s\n", check.name.c_str());
          return 1;
        }
      }
      return 0;
    }

    if (validate->parsed()) {
      const qtbc::SimulationConfig cfg = qtbc::SimulationConfig::from_file(validate_file);
      bool bad = false;
      for (const auto& issue : qtbc::validate_config(cfg)) {
        std::printf("%-7s %s: %s\n", severity_tag(issue.severity), issue.name.c_str(),
                    issue.message.c_str());
        bad = bad || issue.severity == qtbc::Severity::error;
      }
      return bad ? 2 : 0;
    }

    if (kernels->parsed()) {
      const qtbc::TimeScheme scheme =
          qtbc::TimeScheme::spreading_units(k_steps, k_tfinal, k_sigma0);
      const qtbc::KernelTable table(scheme.mu2, k_steps);
      if (dump) {
        qtbc::write_kernel_dump(kernels_out, table);
        std::printf("kernel table written to %s\n", kernels_out.c_str());
      } else {
        std::printf("mu^2 = %si, dft size %d, eta %g, origin cross-check %.3g\n",
                    qtbc::format_double(scheme.mu2.imag()).c_str(), table.dft_size(),
                    table.eta(), table.origin_cross_check());
        for (int q = 0; q <= std::min(8, k_steps / 2); ++q)
          std::printf("C_%d = %s\n", q, qtbc::format_double(table.cq(q)).c_str());
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
