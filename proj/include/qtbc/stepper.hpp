#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "qtbc/field.hpp"
#include "qtbc/kernel.hpp"

namespace qtbc {

enum class Side { left, right };

/// Per-side record of boundary values and symmetric-difference normal
/// derivatives, one entry per completed step (entry 0 is the initial state).
/// Entries are append-only.
struct BoundaryHistory {
  std::vector<cdouble> values;
  std::vector<cdouble> derivs;
};

struct TridiagonalSystem {
  std::vector<cdouble> lower, diag, upper, rhs;
};

/// Solve in place by direct elimination (no pivoting). Throws on a tiny pivot.
std::vector<cdouble> solve_tridiagonal(TridiagonalSystem sys);

/// Affine boundary relation Psi_n(edge) = alpha * dPsi_n(edge) + gamma, with
/// gamma collecting all history terms of the convolution closure.
struct ClosureRelation {
  cdouble alpha;
  cdouble gamma;
};

/// History part of the closure at step n: g_0 d_{n-1} + sum_{p>=1} g_p (d_{n-p} + d_{n-p-1}).
cdouble convolve_history(std::span<const cdouble> closure, std::span<const cdouble> derivs, int n);

ClosureRelation boundary_closure_right(std::span<const cdouble> closure,
                                       std::span<const cdouble> derivs, int n);
ClosureRelation boundary_closure_left(std::span<const cdouble> closure,
                                      std::span<const cdouble> derivs, int n);

struct StepperOptions {
  /// Constant energy shift (k_perp^2 for transverse modes).
  double transverse_energy = 0.0;
  /// Closure coefficients; empty selects the table's closed-form sequence.
  std::span<const cdouble> closure = {};
  /// Drive clock advanced per step (tau units used by the potential).
  double tau_per_step = 0.0;  // 0 -> scheme dt
  /// Test seam: overrides eval_potential when set, called as f(x, tau_mid).
  std::function<double(double, double)> potential_override;
};

/// Crank-Nicolson stepper on [-a, a] with the convolution closure at both
/// edges. One ghost point per side is eliminated through the closure with a
/// symmetric derivative stencil. A stepper is single-owner and stepped
/// sequentially; distinct steppers may share one immutable KernelTable.
class Stepper1D {
 public:
  using Options = StepperOptions;

  Stepper1D(GridPtr grid, const TimeScheme& scheme, const PotentialSpec& potential,
            std::shared_ptr<const KernelTable> kernel, ComplexField initial,
            StepperOptions options = StepperOptions{});

  /// Tridiagonal system for the upcoming step (does not advance).
  TridiagonalSystem assemble_step() const;

  /// Advance one step: solve, append boundary values and closure-consistent
  /// symmetric derivatives to the histories.
  void step();

  int step_index() const { return n_; }
  const ComplexField& psi() const { return psi_; }
  const Grid1D& grid() const { return *grid_; }
  const TimeScheme& scheme() const { return scheme_; }
  const KernelTable& kernel() const { return *kernel_; }
  const BoundaryHistory& history(Side s) const { return s == Side::left ? left_ : right_; }
  std::span<const cdouble> closure() const { return closure_; }

  /// Closure relation for the upcoming step at one edge.
  ClosureRelation upcoming_closure(Side s) const;

  /// |Psi_n(edge) - (alpha d_n + gamma)| of the last completed step.
  double closure_residual() const { return closure_residual_; }

  double support_leak() const { return support_leak_; }
  /// min over rows of |diag| - (|lower| + |upper|) from the last assembly.
  double diagonal_slack() const { return diagonal_slack_; }
  /// Inner-loop iterations spent in closure convolutions so far.
  std::uint64_t closure_ops() const { return closure_ops_; }

 private:
  void assemble(TridiagonalSystem& sys, cdouble& hist_l, cdouble& hist_r) const;

  GridPtr grid_;
  TimeScheme scheme_;
  PotentialSpec potential_;
  std::shared_ptr<const KernelTable> kernel_;
  ComplexField psi_;
  std::vector<cdouble> closure_;
  double transverse_energy_ = 0.0;
  double tau_step_ = 0.0;
  std::function<double(double, double)> potential_override_;
  BoundaryHistory left_, right_;
  int n_ = 0;
  double closure_residual_ = 0.0;
  double support_leak_ = 0.0;
  mutable double diagonal_slack_ = 0.0;
  mutable std::uint64_t closure_ops_ = 0;
};

/// Wavefunction at an exterior point from boundary history alone. In 1D the
/// surface integral degenerates to the endpoint: the value is
///   (1/2mu^2) sum_p [ f_p(u) dS_{n-p} + f_p'(u) S_{n-p} ]
/// with u the distance to the edge, S the pair sums of boundary values and
/// dS the outward pair sums of derivatives.
cdouble exterior_reconstruct(const BoundaryHistory& left, const BoundaryHistory& right,
                             const KernelTable& table, double a, double x0, int n,
                             double k_perp2 = 0.0);

/// Largest signal speed of the discrete scheme (used to size the window in
/// which a wide zero-Dirichlet reference run is reflection-free).
double max_group_velocity(double dt, double dx);

}  // namespace qtbc
