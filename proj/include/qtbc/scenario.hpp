#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qtbc/band.hpp"
#include "qtbc/delta.hpp"
#include "qtbc/io.hpp"
#include "qtbc/oracle.hpp"

namespace qtbc {

/// Flat scenario configuration. Defaults per scenario reproduce the built-in
/// parameter sets; every field can be overridden from a config file or
/// command-line flags. Times and velocities are quoted in spreading units
/// (see TimeScheme::spreading_units).
struct SimulationConfig {
  std::string scenario;

  // grid + scheme
  double a = 1.0;
  int nx = 201;
  int n_steps = 40;
  double t_final = 4.0;

  // packet
  double sigma0 = 0.2;
  double x0 = 0.0;
  double v = 0.0;

  // potential
  double v0 = 0.0;
  double b = 0.05;
  double omega = 0.0;
  double a0 = 0.0;

  // delta drive
  double lambda0 = 4.0;
  double amplitude = 8.0;
  double freq_factor = 0.7;
  int n_pulses = 40;

  // band geometry
  int ny = 45;
  double y_min = 0.0, y_max = 5.0;
  double center_y = 1.0;
  double vx = 0.15, vy = 0.225;

  // run controls
  std::string out_dir = "out";
  int snapshot_stride = 0;  // 0 -> n_steps / 10
  bool oracle = false;
  double oracle_half_width = 8.0;

  static const std::vector<std::string>& scenario_names();
  static SimulationConfig defaults(const std::string& scenario);
  static SimulationConfig from_file(const std::string& path);
  void apply_override(const std::string& key, const std::string& value);

  PotentialSpec potential() const;
  WavePacketSpec packet() const;
  double tau_per_step() const { return t_final / n_steps; }
  bool is_grid_1d() const;
};

enum class Severity { ok, warning, error };

struct ValidationIssue {
  Severity severity = Severity::ok;
  std::string name;
  std::string message;
};

/// Static parameter checks: supported-inside test, transverse Nyquist test,
/// periodic-window test, damping test, degenerate sizes.
std::vector<ValidationIssue> validate_config(const SimulationConfig& cfg);

struct RunReport {
  std::vector<ManifestCheck> checks;
  std::string out_dir;
  std::vector<std::string> files;
  bool ok() const;
};

/// Execute a scenario: snapshots, ledger time series and a manifest with the
/// resolved parameters and built-in check results. Throws
/// std::invalid_argument for unusable configurations.
RunReport run_scenario(const SimulationConfig& cfg);

// Library-level assembly of the scenario objects (no file output); used by
// the runner, the acceptance suite and the bindings.

struct Assembled1D {
  GridPtr grid;
  TimeScheme scheme;
  std::shared_ptr<KernelTable> table;
  WavePacketSpec packet;
  PotentialSpec potential;
  std::unique_ptr<Stepper1D> stepper;
};
Assembled1D assemble_1d(const SimulationConfig& cfg);

DeltaRun make_delta_run(const SimulationConfig& cfg);

struct AssembledBand {
  BandGridPtr grid;
  TimeScheme scheme;
  Packet2DSpec packet;
  std::unique_ptr<BandSolver> solver;
};
AssembledBand assemble_band(const SimulationConfig& cfg);

// Built-in check tolerances.
inline constexpr double kOracleTolerance = 1e-6;
inline constexpr double kAnalyticDeviationTolerance = 1e-2;  // fraction of the peak
inline constexpr double kNyquistWarnTail = 1e-10;
inline constexpr double kNyquistErrorTail = 1e-3;
inline constexpr double kWindowImageWarnAmplitude = 1e-6;
inline constexpr double kWindowImageErrorAmplitude = 0.02;

}  // namespace qtbc
