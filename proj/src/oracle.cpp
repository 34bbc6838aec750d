#include "qtbc/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qtbc/stepper.hpp"

namespace qtbc {

DirichletReference::DirichletReference(const Grid1D& inner, double half_width_factor,
                                       const TimeScheme& scheme, const PotentialSpec& potential,
                                       const WavePacketSpec& packet, double tau_per_step,
                                       std::function<double(double, double)> potential_override)
    : scheme_(scheme),
      potential_(potential),
      tau_step_(tau_per_step > 0.0 ? tau_per_step : scheme.dt),
      potential_override_(std::move(potential_override)),
      psi_(std::make_shared<Grid1D>(1.0, 3)) {
  if (half_width_factor <= 1.0)
    throw std::invalid_argument("DirichletReference: factor must exceed 1");
  // Extend by a whole number of cells per side so inner points stay aligned.
  const double pad = (half_width_factor - 1.0) * inner.a;
  offset_ = static_cast<int>(std::ceil(pad / inner.dx - 1e-9));
  const double half_width = inner.a + offset_ * inner.dx;
  auto g = std::make_shared<Grid1D>(half_width, inner.nx + 2 * offset_);
  grid_ = g;
  psi_ = make_gaussian(grid_, packet);
}

void DirichletReference::step() {
  const int nx = grid_->nx;
  const double idx2 = 1.0 / (grid_->dx * grid_->dx);
  const cdouble mu2 = scheme_.mu2;
  const double tau_mid = (n_ + 0.5) * tau_step_;

  // Interior unknowns j = 1 .. nx-2; walls pinned to zero.
  const int m = nx - 2;
  std::vector<cdouble> diag(m), rhs(m);
  std::vector<double> vpot(m);
  for (int j = 0; j < m; ++j) {
    const double x = grid_->x[j + 1];
    vpot[j] = potential_override_ ? potential_override_(x, tau_mid)
                                  : eval_potential(potential_, x, tau_mid);
    diag[j] = mu2 - 2.0 * idx2 - vpot[j];
    rhs[j] = -idx2 * (psi_.values[j] + psi_.values[j + 2]) +
             (mu2 + 2.0 * idx2 + vpot[j]) * psi_.values[j + 1];
  }
  // Thomas elimination, written out locally to stay independent of the
  // production solver.
  std::vector<cdouble> upper(m, idx2);
  for (int j = 1; j < m; ++j) {
    const cdouble f = idx2 / diag[j - 1];
    diag[j] -= f * upper[j - 1];
    rhs[j] -= f * rhs[j - 1];
  }
  std::vector<cdouble> sol(m);
  sol[m - 1] = rhs[m - 1] / diag[m - 1];
  for (int j = m - 2; j >= 0; --j) sol[j] = (rhs[j] - upper[j] * sol[j + 1]) / diag[j];
  for (int j = 0; j < m; ++j) psi_.values[j + 1] = sol[j];
  psi_.values[0] = cdouble(0.0, 0.0);
  psi_.values[nx - 1] = cdouble(0.0, 0.0);
  ++n_;
}

int DirichletReference::reflection_free_steps(double inner_half_width) const {
  const double vg = max_group_velocity(scheme_.dt, grid_->dx);
  const double distance = grid_->a - inner_half_width;
  return static_cast<int>(std::floor(distance / (vg * scheme_.dt)));
}

double relative_l2_inner(const ComplexField& psi, const DirichletReference& ref) {
  const int nx = psi.size();
  const int off = ref.inner_offset();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double w = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
    const cdouble r = ref.psi().values[off + i];
    num += w * std::norm(psi.values[i] - r);
    den += w * std::norm(r);
  }
  return std::sqrt(num / den);
}

}  // namespace qtbc
