#include "qtbc/delta.hpp"

#include <cmath>
#include <stdexcept>

#include "qtbc/observables.hpp"

namespace qtbc {

cdouble bound_phase(cdouble mu2, double omega0) {
  if (omega0 < 0.0) throw std::invalid_argument("bound_phase: omega0 must be >= 0");
  return (mu2 - omega0) / (mu2 + omega0);
}

DeltaRun::DeltaRun(double lambda0, double amplitude, double freq_factor, int n_steps, double dt)
    : lambda0_(lambda0),
      amplitude_(amplitude),
      freq_factor_(freq_factor),
      dt_(dt),
      omega0_(0.25 * lambda0 * lambda0),
      n_steps_(n_steps) {
  if (!(lambda0_ > 0.0)) throw std::invalid_argument("DeltaRun: lambda0 must be positive");
  if (n_steps_ < 1) throw std::invalid_argument("DeltaRun: need at least one step");
  if (!(dt_ > 0.0)) throw std::invalid_argument("DeltaRun: dt must be positive");
  mu2_ = cdouble(0.0, 2.0 / dt_);
  mu_ = outgoing_root(mu2_);
  phase_ = bound_phase(mu2_, omega0_);
  phi0_ = std::sqrt(0.5 * lambda0_);

  lambdas_.resize(n_steps_ + 1, lambda0_);
  for (int m = 1; m <= n_steps_; ++m) {
    const double t_mid = (m - 0.5) * dt_;
    lambdas_[m] =
        lambda0_ + 0.5 * amplitude_ * (1.0 - std::cos(freq_factor_ * omega0_ * t_mid));
  }

  cq_.resize(n_steps_ / 2 + 2);
  cq_[0] = 1.0;
  for (size_t q = 1; q < cq_.size(); ++q) cq_[q] = cq_[q - 1] * (2.0 * q - 1.0) / (2.0 * q);

  phase_pow_.resize(n_steps_ + 1);
  phase_pow_[0] = cdouble(1.0, 0.0);
  for (int m = 1; m <= n_steps_; ++m) phase_pow_[m] = phase_pow_[m - 1] * phase_;
}

double DeltaRun::lambda(int n) const { return lambdas_.at(n); }

cdouble DeltaRun::phi_origin(int n) const { return phi0_ * phase_pow_.at(n); }

void DeltaRun::run() {
  if (done_) return;
  chi_.assign(n_steps_ + 1, cdouble(0.0, 0.0));  // chi_0 = 0: start in the bound state
  acf_.assign(n_steps_ + 1, cdouble(0.0, 0.0));
  acf_[0] = cdouble(1.0, 0.0);

  for (int n = 1; n <= n_steps_; ++n) {
    cdouble rhs = lambdas_[n] * chi_[n - 1];
    const int q_max = (n - 1) / 2;
    for (int q = 1; q <= q_max; ++q) {
      const int m = n - 2 * q;
      rhs += cq_[q] * lambdas_[m] * (chi_[m] + chi_[m - 1]);
    }
    for (int q = 0; q <= q_max; ++q) {
      const int m = n - 2 * q;
      rhs += cq_[q] * (lambdas_[m] - lambda0_) * (phi_origin(m) + phi_origin(m - 1));
    }
    chi_[n] = rhs / (-2.0 * cdouble(0.0, 1.0) * mu_ - lambdas_[n]);

    // Overlap ledger: both half-lines contribute the same surface term, so
    // the increment is twice the one-point overlap with outward derivatives
    // dS_phi = -(lambda0/2) S_phi and dS_psi = -(lambda_n/2) S_psi at 0+.
    const cdouble s_phi = phi_origin(n) + phi_origin(n - 1);
    const cdouble s_psi = s_phi + chi_[n] + chi_[n - 1];
    const cdouble inc = 2.0 * overlap_increment(s_phi, -0.5 * lambda0_ * s_phi, s_psi,
                                                -0.5 * lambdas_[n] * s_psi, mu2_);
    acf_[n] = acf_[n - 1] + inc;
  }
  done_ = true;
}

cdouble DeltaRun::chi(int n) const {
  if (!done_) throw std::logic_error("DeltaRun: call run() first");
  return chi_.at(n);
}

cdouble DeltaRun::psi_origin(int n) const { return phi_origin(n) + chi(n); }

double DeltaRun::origin_density_normalized(int n) const {
  return std::norm(psi_origin(n)) / (phi0_ * phi0_);
}

cdouble DeltaRun::autocorrelation(int n) const {
  if (!done_) throw std::logic_error("DeltaRun: call run() first");
  return acf_.at(n);
}

cdouble DeltaRun::psi_offorigin(double x, int n, const KernelTable& table) const {
  if (x == 0.0) return psi_origin(n);
  if (!done_) throw std::logic_error("DeltaRun: call run() first");
  if (n < 0 || n > n_steps_) throw std::out_of_range("DeltaRun: step outside the run");
  const cdouble phi = phi_origin(n) * std::exp(-0.5 * lambda0_ * std::abs(x));
  if (n == 0) return phi;

  // chi is even, so the one-sided derivative at 0+ is half the jump:
  // d chi_m(0+) pair sum = -[lambda_m S_chi + (lambda_m - lambda0) S_phi] / 2.
  const std::vector<cdouble> f = table.sums(std::abs(x));
  const std::vector<cdouble> fp = table.sum_slopes(std::abs(x));
  cdouble acc(0.0, 0.0);
  for (int p = 0; p < n; ++p) {
    const int m = n - p;
    const cdouble s_chi = chi_[m] + chi_[m - 1];
    const cdouble s_phi = phi_origin(m) + phi_origin(m - 1);
    const cdouble ds_chi = -0.5 * (lambdas_[m] * s_chi + (lambdas_[m] - lambda0_) * s_phi);
    acc += f[p] * ds_chi + fp[p] * s_chi;
  }
  return phi + acc / (2.0 * mu2_);
}

}  // namespace qtbc
