#pragma once

#include <functional>

#include "qtbc/field.hpp"

namespace qtbc {

/// Brute-force reference: Crank-Nicolson on a wide grid with zero-Dirichlet
/// walls, kept deliberately independent of the closure machinery. Valid for
/// comparison only while the wavefront has not reached the walls.
class DirichletReference {
 public:
  /// Builds a grid with the same spacing as `inner`, extended so the half
  /// width is at least `half_width_factor * inner.a` and the inner points are
  /// grid-aligned.
  DirichletReference(const Grid1D& inner, double half_width_factor, const TimeScheme& scheme,
                     const PotentialSpec& potential, const WavePacketSpec& packet,
                     double tau_per_step = 0.0,
                     std::function<double(double, double)> potential_override = {});

  void step();
  int step_index() const { return n_; }
  const Grid1D& grid() const { return *grid_; }
  const ComplexField& psi() const { return psi_; }
  /// Offset of the inner grid's first point inside the wide grid.
  int inner_offset() const { return offset_; }
  /// Steps until the fastest lattice signal launched from the inner edge
  /// reaches a wall.
  int reflection_free_steps(double inner_half_width) const;

 private:
  GridPtr grid_;
  TimeScheme scheme_;
  PotentialSpec potential_;
  double tau_step_;
  std::function<double(double, double)> potential_override_;
  ComplexField psi_;
  int offset_ = 0;
  int n_ = 0;
};

/// Relative L2 distance over the inner window: |psi - ref| / |ref| with
/// trapezoidal weights on the inner grid.
double relative_l2_inner(const ComplexField& psi, const DirichletReference& ref);

}  // namespace qtbc
