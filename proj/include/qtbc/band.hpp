#pragma once

#include <memory>

#include "qtbc/observables.hpp"
#include "qtbc/stepper.hpp"

namespace qtbc {

/// Band geometry [-a, a] x [y0, y1): uniform x grid plus a periodic
/// transverse sample set for the discrete Fourier transform in y.
struct BandGrid {
  GridPtr x;
  int ny = 0;
  double y0 = 0.0, y1 = 0.0;
  double dy = 0.0;
  std::vector<double> y;   // y0 + j dy, j < ny (y1 excluded)
  std::vector<double> ky;  // DFT frequencies 2 pi m~ / (y1 - y0)

  BandGrid(GridPtr x_grid, int ny_points, double y_min, double y_max);
  double length() const { return y1 - y0; }
};

using BandGridPtr = std::shared_ptr<const BandGrid>;

/// Row-major samples, index ix * ny + iy.
struct Field2D {
  BandGridPtr grid;
  std::vector<cdouble> values;

  explicit Field2D(BandGridPtr g);
  cdouble& at(int ix, int iy) { return values[ix * grid->ny + iy]; }
  cdouble at(int ix, int iy) const { return values[ix * grid->ny + iy]; }
};

/// Isotropic gaussian packet in the band; velocities in spreading units.
struct Packet2DSpec {
  double x0 = 0.0, y0 = 1.0;
  double sigma0 = 0.2;
  double vx = 0.0, vy = 0.0;
};

Field2D make_gaussian_2d(const BandGridPtr& grid, const Packet2DSpec& spec);

/// Transverse mode coefficients, one x-profile per ky.
struct ModeSet {
  BandGridPtr grid;
  std::vector<std::vector<cdouble>> modes;  // [m][ix]
};

/// Transverse DFT per x row; exactly invertible by recombine().
ModeSet decompose(const Field2D& field);
Field2D recombine(const ModeSet& modes);

/// |spectrum| at the transverse Nyquist edge relative to the spectral peak.
double nyquist_tail(const ModeSet& modes);

/// Free-space solver on the band: one closure-equipped 1D stepper per
/// transverse mode with the energy shift k^2 -> k^2 + ky^2. Modes never
/// interact (the potential is y-independent), so they may be stepped in any
/// order; the kernel table is shared read-only.
class BandSolver {
 public:
  BandSolver(BandGridPtr grid, const TimeScheme& scheme, const Packet2DSpec& packet);

  void step();
  int step_index() const { return n_; }
  const BandGrid& grid() const { return *grid_; }
  int mode_count() const { return static_cast<int>(steppers_.size()); }
  const Stepper1D& mode(int m) const { return *steppers_.at(m); }
  std::shared_ptr<const KernelTable> kernel() const { return table_; }

  Field2D field() const;
  /// |Psi|^2 on the band, row-major like Field2D.
  std::vector<double> density() const;

  /// Interior norm plus accumulated boundary flux, summed over modes with
  /// the transverse Parseval weight; conserved by the discrete dynamics.
  double conservation_total() const;
  double initial_total() const { return initial_total_; }
  double nyquist_tail_initial() const { return nyquist_tail_; }

 private:
  BandGridPtr grid_;
  TimeScheme scheme_;
  std::shared_ptr<KernelTable> table_;
  std::vector<std::unique_ptr<Stepper1D>> steppers_;
  std::vector<FluxLedger> ledgers_;
  double initial_total_ = 0.0;
  double nyquist_tail_ = 0.0;
  int n_ = 0;
};

}  // namespace qtbc
