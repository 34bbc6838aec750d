#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace qtbc {

using cdouble = std::complex<double>;

/// Square root of a complex energy on the outgoing branch: Im(root) >= 0,
/// so that exp(i k |x|) decays. All modules must draw roots from here so the
/// branch choice stays consistent across the kernel and delta machinery.
cdouble outgoing_root(cdouble energy);

/// Uniform grid on [-a, a]. Points are built antisymmetric in floating
/// point: x[i] == -x[nx-1-i] exactly, x[0] == -a and x[nx-1] == +a.
struct Grid1D {
  double a = 1.0;
  int nx = 0;
  double dx = 0.0;
  std::vector<double> x;

  Grid1D(double half_width, int points);
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Wavefunction samples on a Grid1D at one time level.
struct ComplexField {
  GridPtr grid;
  std::vector<cdouble> values;

  explicit ComplexField(GridPtr g);
  ComplexField(GridPtr g, std::vector<cdouble> v);

  int size() const { return static_cast<int>(values.size()); }
  bool finite() const;
};

/// Crank-Nicolson time discretization in units hbar = 2m = 1, where each
/// step becomes a stationary problem with complex energy mu^2 = 2i/dt.
///
/// Scenario parameters quote the total time in wave-packet spreading units
/// tau = t / (sigma0^2 / 2); spreading_units() applies that conversion, so
/// mu^2 = 4i N / (sigma0^2 tau_final).
struct TimeScheme {
  int n_steps = 0;
  double total_time = 0.0;  // equation units
  double dt = 0.0;
  cdouble mu2;
  cdouble mu;  // outgoing root of mu2 (first quadrant)

  TimeScheme(int steps, double total);
  static TimeScheme spreading_units(int steps, double tau_final, double sigma0);
};

/// Gaussian wave packet parameters. The velocity v is quoted in spreading
/// units: the packet center moves as x0 + v*tau, and the plane-wave number
/// is k0 = v / sigma0^2 (equation-unit velocity 2*k0).
struct WavePacketSpec {
  double x0 = 0.0;
  double sigma0 = 0.2;
  double v = 0.0;
};

/// Tagged interaction description. The driven-delta variant is handled by
/// the closed-form delta model and is never sampled on a grid.
struct PotentialSpec {
  enum class Kind { none, static_gaussian, driven_gaussian, double_well, driven_delta };

  Kind kind = Kind::none;
  double v0 = 0.0;     // well/barrier amplitude
  double b = 0.0;      // gaussian width
  double omega = 0.0;  // drive frequency (per unit tau)
  double a0 = 0.0;     // double-well half separation
  double lambda0 = 0.0, amplitude = 0.0, freq_factor = 0.0;  // delta drive

  static PotentialSpec none();
  static PotentialSpec static_gaussian(double v0, double b);
  static PotentialSpec driven_gaussian(double v0, double b, double omega);
  static PotentialSpec double_well(double v0, double b, double a0);
  static PotentialSpec driven_delta(double lambda0, double amplitude, double freq_factor);

  bool grid_representable() const { return kind != Kind::driven_delta; }
};

/// Normalized gaussian packet sampled on the grid. The closure assumes the
/// initial state is numerically supported inside [-a, a]; use
/// support_leak_ratio() to diagnose violations.
ComplexField make_gaussian(const GridPtr& grid, const WavePacketSpec& spec);

/// V(x, tau) at the mid-step time for grid-representable variants.
/// Throws for the driven-delta variant.
double eval_potential(const PotentialSpec& spec, double x, double tau_mid);

/// |Psi(x, tau)|^2 of the freely evolving packet:
/// 1/(sqrt(pi) s(tau)) exp(-(x - x0 - v tau)^2 / s(tau)^2), s = sigma0 sqrt(1 + tau^2).
double analytic_free_density(const WavePacketSpec& spec, double x, double tau);

/// Boundary amplitude relative to the field maximum; values above 1e-8 mean
/// the supported-inside contract is being stretched.
double support_leak_ratio(const ComplexField& field);

inline constexpr double kSupportLeakWarnRatio = 1e-8;

}  // namespace qtbc
