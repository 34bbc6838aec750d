#include "qtbc/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtbc {

std::vector<cdouble> solve_tridiagonal(TridiagonalSystem sys) {
  const int n = static_cast<int>(sys.diag.size());
  if (n == 0 || static_cast<int>(sys.rhs.size()) != n)
    throw std::invalid_argument("solve_tridiagonal: inconsistent system");
  double scale = 0.0;
  for (const cdouble& d : sys.diag) scale = std::max(scale, std::abs(d));
  const double tiny = 1e-300 + 1e-14 * scale;
  for (int j = 1; j < n; ++j) {
    if (std::abs(sys.diag[j - 1]) < tiny)
      throw std::runtime_error("solve_tridiagonal: breakdown (zero pivot) at row " +
                               std::to_string(j - 1));
    const cdouble m = sys.lower[j] / sys.diag[j - 1];
    sys.diag[j] -= m * sys.upper[j - 1];
    sys.rhs[j] -= m * sys.rhs[j - 1];
  }
  if (std::abs(sys.diag[n - 1]) < tiny)
    throw std::runtime_error("solve_tridiagonal: breakdown (zero pivot) at last row");
  std::vector<cdouble> out(n);
  out[n - 1] = sys.rhs[n - 1] / sys.diag[n - 1];
  for (int j = n - 2; j >= 0; --j)
    out[j] = (sys.rhs[j] - sys.upper[j] * out[j + 1]) / sys.diag[j];
  return out;
}

cdouble convolve_history(std::span<const cdouble> closure, std::span<const cdouble> derivs,
                         int n) {
  if (n < 1 || n > static_cast<int>(derivs.size()))
    throw std::invalid_argument("convolve_history: need derivative entries 0..n-1");
  cdouble h = closure[0] * derivs[n - 1];
  for (int p = 1; p < n; ++p) h += closure[p] * (derivs[n - p] + derivs[n - p - 1]);
  return h;
}

ClosureRelation boundary_closure_right(std::span<const cdouble> closure,
                                       std::span<const cdouble> derivs, int n) {
  return ClosureRelation{closure[0], convolve_history(closure, derivs, n)};
}

ClosureRelation boundary_closure_left(std::span<const cdouble> closure,
                                      std::span<const cdouble> derivs, int n) {
  return ClosureRelation{-closure[0], -convolve_history(closure, derivs, n)};
}

Stepper1D::Stepper1D(GridPtr grid, const TimeScheme& scheme, const PotentialSpec& potential,
                     std::shared_ptr<const KernelTable> kernel, ComplexField initial,
                     StepperOptions options)
    : grid_(std::move(grid)),
      scheme_(scheme),
      potential_(potential),
      kernel_(std::move(kernel)),
      psi_(std::move(initial)) {
  if (!grid_ || !kernel_) throw std::invalid_argument("Stepper1D: null grid or kernel table");
  if (psi_.grid.get() != grid_.get())
    throw std::invalid_argument("Stepper1D: initial field lives on a different grid");
  if (!potential_.grid_representable() && !options.potential_override)
    throw std::invalid_argument("Stepper1D: driven delta belongs to the delta model");
  if (kernel_->n_steps() < scheme_.n_steps)
    throw std::invalid_argument("Stepper1D: kernel table does not cover the step count");
  if (std::abs(kernel_->mu2() - scheme_.mu2) > 1e-12 * std::abs(scheme_.mu2))
    throw std::invalid_argument("Stepper1D: kernel table built for a different scheme");
  if (!psi_.finite()) throw std::invalid_argument("Stepper1D: initial field is not finite");

  const auto base = options.closure.empty() ? kernel_->closure_origin() : options.closure;
  closure_.assign(base.begin(), base.end());
  transverse_energy_ = options.transverse_energy;
  tau_step_ = options.tau_per_step > 0.0 ? options.tau_per_step : scheme_.dt;
  potential_override_ = options.potential_override;
  support_leak_ = support_leak_ratio(psi_);

  const int j_max = grid_->nx - 1;
  const double two_dx = 2.0 * grid_->dx;
  left_.values.push_back(psi_.values[0]);
  right_.values.push_back(psi_.values[j_max]);
  // Initial derivatives use zero exterior ghosts (state supported inside).
  left_.derivs.push_back((psi_.values[1] - cdouble(0.0, 0.0)) / two_dx);
  right_.derivs.push_back((cdouble(0.0, 0.0) - psi_.values[j_max - 1]) / two_dx);
}

ClosureRelation Stepper1D::upcoming_closure(Side s) const {
  return s == Side::right ? boundary_closure_right(closure_, right_.derivs, n_ + 1)
                          : boundary_closure_left(closure_, left_.derivs, n_ + 1);
}

void Stepper1D::assemble(TridiagonalSystem& sys, cdouble& hist_l, cdouble& hist_r) const {
  const int nx = grid_->nx;
  const int j_max = nx - 1;
  const double dx = grid_->dx;
  const double idx2 = 1.0 / (dx * dx);
  const cdouble mu2 = scheme_.mu2;
  const int n_next = n_ + 1;
  const double tau_mid = (n_ + 0.5) * tau_step_;

  sys.lower.assign(nx, cdouble(0.0, 0.0));
  sys.diag.assign(nx, cdouble(0.0, 0.0));
  sys.upper.assign(nx, cdouble(0.0, 0.0));
  sys.rhs.assign(nx, cdouble(0.0, 0.0));

  hist_r = convolve_history(closure_, right_.derivs, n_next);
  hist_l = convolve_history(closure_, left_.derivs, n_next);
  closure_ops_ += 2 * static_cast<std::uint64_t>(n_next);

  auto potential_at = [&](double x) {
    const double v = potential_override_ ? potential_override_(x, tau_mid)
                                         : eval_potential(potential_, x, tau_mid);
    return v + transverse_energy_;
  };

  for (int j = 1; j < j_max; ++j) {
    const double vj = potential_at(grid_->x[j]);
    sys.lower[j] = idx2;
    sys.upper[j] = idx2;
    sys.diag[j] = mu2 - 2.0 * idx2 - vj;
    sys.rhs[j] = -idx2 * (psi_.values[j - 1] + psi_.values[j + 1]) +
                 (mu2 + 2.0 * idx2 + vj) * psi_.values[j];
  }

  // Edge rows: the exterior ghost is eliminated through the closure
  //   Psi_n(edge) = +-(g0 d_n + hist), d = symmetric difference.
  const cdouble beta = closure_[0];
  const cdouble edge_coupling = 2.0 / (beta * dx);
  {
    const double v0 = potential_at(grid_->x[0]);
    sys.upper[0] = 2.0 * idx2;
    sys.diag[0] = mu2 - 2.0 * idx2 - v0 + edge_coupling;
    sys.rhs[0] = -2.0 * idx2 * psi_.values[1] + (2.0 / dx) * left_.derivs.back() +
                 (mu2 + 2.0 * idx2 + v0) * psi_.values[0] - edge_coupling * hist_l;
  }
  {
    const double vj = potential_at(grid_->x[j_max]);
    sys.lower[j_max] = 2.0 * idx2;
    sys.diag[j_max] = mu2 - 2.0 * idx2 - vj + edge_coupling;
    sys.rhs[j_max] = -2.0 * idx2 * psi_.values[j_max - 1] - (2.0 / dx) * right_.derivs.back() +
                     (mu2 + 2.0 * idx2 + vj) * psi_.values[j_max] + edge_coupling * hist_r;
  }

  double slack = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nx; ++j)
    slack = std::min(slack, std::abs(sys.diag[j]) -
                                (std::abs(sys.lower[j]) + std::abs(sys.upper[j])));
  diagonal_slack_ = slack;
}

TridiagonalSystem Stepper1D::assemble_step() const {
  TridiagonalSystem sys;
  cdouble hl, hr;
  assemble(sys, hl, hr);
  return sys;
}

void Stepper1D::step() {
  if (n_ >= scheme_.n_steps) throw std::logic_error("Stepper1D: scheme is exhausted");
  TridiagonalSystem sys;
  cdouble hist_l, hist_r;
  assemble(sys, hist_l, hist_r);
  psi_.values = solve_tridiagonal(std::move(sys));
  ++n_;

  const int j_max = grid_->nx - 1;
  const cdouble beta = closure_[0];
  const cdouble d_right = (psi_.values[j_max] - hist_r) / beta;
  const cdouble d_left = -(psi_.values[0] + hist_l) / beta;
  right_.values.push_back(psi_.values[j_max]);
  right_.derivs.push_back(d_right);
  left_.values.push_back(psi_.values[0]);
  left_.derivs.push_back(d_left);
  closure_residual_ =
      std::max(std::abs(psi_.values[j_max] - (beta * d_right + hist_r)),
               std::abs(psi_.values[0] - (-(beta * d_left) - hist_l)));
}

cdouble exterior_reconstruct(const BoundaryHistory& left, const BoundaryHistory& right,
                             const KernelTable& table, double a, double x0, int n,
                             double k_perp2) {
  if (std::abs(x0) <= a)
    throw std::invalid_argument("exterior_reconstruct: point lies inside the domain");
  const bool right_side = x0 > 0.0;
  const BoundaryHistory& h = right_side ? right : left;
  if (n < 1 || n >= static_cast<int>(h.values.size()))
    throw std::invalid_argument("exterior_reconstruct: history does not cover step n");
  const double u = right_side ? x0 - a : -a - x0;
  const double sign = right_side ? 1.0 : -1.0;  // outward normal derivative
  const std::vector<cdouble> f = table.sums(u, k_perp2);
  const std::vector<cdouble> fp = table.sum_slopes(u, k_perp2);
  cdouble acc(0.0, 0.0);
  for (int p = 0; p < n; ++p) {
    const cdouble s = h.values[n - p] + h.values[n - p - 1];
    const cdouble ds = sign * (h.derivs[n - p] + h.derivs[n - p - 1]);
    acc += f[p] * ds + fp[p] * s;
  }
  return acc / (2.0 * table.mu2());
}

double max_group_velocity(double dt, double dx) {
  // omega(k) = (2/dt) atan(lambda dt / 2), lambda = 2(1 - cos k dx)/dx^2;
  // scan d omega / d k over the lattice band.
  const double r = dt / (dx * dx);
  double best = 0.0;
  const int samples = 20000;
  for (int i = 1; i < samples; ++i) {
    const double u = M_PI * i / samples;
    const double lam_half_dt = r * (1.0 - std::cos(u));
    const double vg = (2.0 / dx) * std::sin(u) / (1.0 + lam_half_dt * lam_half_dt);
    best = std::max(best, vg);
  }
  return best;
}

}  // namespace qtbc
