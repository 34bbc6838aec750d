#include "qtbc/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace qtbc {

double interior_norm(const ComplexField& field) {
  const int nx = field.size();
  const double dx = field.grid->dx;
  double sum = 0.0;
  for (int i = 0; i < nx; ++i) sum += std::norm(field.values[i]);
  sum -= 0.5 * (std::norm(field.values.front()) + std::norm(field.values.back()));
  return dx * sum;
}

cdouble overlap_increment(cdouble phi_sum, cdouble dn_phi_sum, cdouble psi_sum,
                          cdouble dn_psi_sum, cdouble mu2) {
  return (std::conj(phi_sum) * dn_psi_sum - std::conj(dn_phi_sum) * psi_sum) / (2.0 * mu2);
}

double flux_increment(Side side, cdouble psi_n, cdouble psi_prev, cdouble dpsi_n,
                      cdouble dpsi_prev, cdouble mu2) {
  const double sign = side == Side::right ? 1.0 : -1.0;
  const cdouble s = psi_n + psi_prev;
  const cdouble ds = sign * (dpsi_n + dpsi_prev);
  const cdouble inc = overlap_increment(s, ds, s, ds, mu2);
  if (std::abs(inc.imag()) > 1e-12 * std::max(1.0, std::abs(inc.real())))
    throw std::runtime_error("flux_increment: imaginary residue above tolerance");
  return inc.real();
}

void FluxLedger::start(double interior0) {
  interior_.assign(1, interior0);
  left_cum_.assign(1, 0.0);
  right_cum_.assign(1, 0.0);
}

void FluxLedger::advance(double interior_n, const BoundaryHistory& left,
                         const BoundaryHistory& right, cdouble mu2) {
  if (interior_.empty()) throw std::logic_error("FluxLedger: call start() first");
  const size_t n = interior_.size();
  if (left.values.size() <= n || right.values.size() <= n)
    throw std::invalid_argument("FluxLedger: histories do not cover this step");
  const double dl = flux_increment(Side::left, left.values[n], left.values[n - 1],
                                   left.derivs[n], left.derivs[n - 1], mu2);
  const double dr = flux_increment(Side::right, right.values[n], right.values[n - 1],
                                   right.derivs[n], right.derivs[n - 1], mu2);
  left_cum_.push_back(left_cum_.back() + dl);
  right_cum_.push_back(right_cum_.back() + dr);
  interior_.push_back(interior_n);
}

double FluxLedger::max_conservation_error() const {
  double worst = 0.0;
  for (size_t n = 0; n < interior_.size(); ++n)
    worst = std::max(worst, std::abs(interior_[n] + left_cum_[n] + right_cum_[n] - 1.0));
  return worst;
}

double FluxLedger::max_drift() const {
  const double t0 = interior_.front();
  double worst = 0.0;
  for (size_t n = 0; n < interior_.size(); ++n)
    worst = std::max(worst, std::abs(interior_[n] + left_cum_[n] + right_cum_[n] - t0));
  return worst;
}

}  // namespace qtbc
