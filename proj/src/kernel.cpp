#include "qtbc/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtbc {

double cq_coefficient(int q) {
  if (q < 0) throw std::invalid_argument("cq_coefficient: q must be >= 0");
  double c = 1.0;
  for (int k = 1; k <= q; ++k) c *= (2.0 * k - 1.0) / (2.0 * k);
  return c;
}

cdouble free_green_1d(cdouble energy, double x) {
  const cdouble ik = cdouble(0.0, 1.0) * outgoing_root(energy);
  return std::exp(ik * std::abs(x)) / (2.0 * ik);
}

cdouble kernel_sum_origin(int p, cdouble mu) {
  if (p < 0) throw std::invalid_argument("kernel_sum_origin: p must be >= 0");
  if (p % 2 == 1) return cdouble(0.0, 0.0);
  return cdouble(0.0, -1.0) * mu * cq_coefficient(p / 2);
}

namespace {
int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}
}  // namespace

KernelTable::KernelTable(cdouble mu2, int n_steps, int dft_size, double eta)
    : mu2_(mu2), n_steps_(n_steps) {
  if (n_steps_ < 1) throw std::invalid_argument("KernelTable: need at least one step");
  if (!(mu2.imag() > 0.0) || std::abs(mu2.real()) > 1e-12 * mu2.imag())
    throw std::invalid_argument("KernelTable: mu^2 must be purely imaginary with Im > 0");
  mu_ = outgoing_root(mu2_);

  dft_size_ = dft_size > 0 ? dft_size : next_pow2(8 * n_steps_);
  if (dft_size_ < 2 * n_steps_)
    throw std::invalid_argument("KernelTable: dft size must be at least twice the step count");
  eta_ = eta > 0.0 ? eta : 28.0 / dft_size_;
  if (std::exp(-dft_size_ * eta_) > 1e-12)
    throw std::invalid_argument("KernelTable: damping too weak, need exp(-N eta) < 1e-12");

  cq_.resize(n_steps_ / 2 + 2);
  cq_[0] = 1.0;
  for (size_t q = 1; q < cq_.size(); ++q) cq_[q] = cq_[q - 1] * (2.0 * q - 1.0) / (2.0 * q);

  comb_w_.resize(dft_size_);
  comb_pref_.resize(dft_size_);
  comb_k2_.resize(dft_size_);
  const double r = std::exp(-eta_);
  for (int l = 0; l < dft_size_; ++l) {
    const cdouble w = std::polar(r, 2.0 * M_PI * l / dft_size_);
    comb_w_[l] = w;
    comb_pref_[l] = 2.0 * mu2_ / (static_cast<double>(dft_size_) * (1.0 + w));
    comb_k2_[l] = mu2_ * (1.0 - w) / (1.0 + w);
  }

  closure_origin_.resize(n_steps_);
  for (int p = 0; p < n_steps_; ++p) closure_origin_[p] = kernel_sum_origin(p, mu_) / mu2_;

  // Anti-drift check: the damped comb must reproduce -i mu C_q / 0 at x = 0.
  const std::vector<cdouble> f = sums(0.0, 0.0);
  for (int p = 0; p < n_steps_; ++p) {
    const double scale = std::abs(mu_) * cq_[p / 2];
    const double rel = std::abs(f[p] - kernel_sum_origin(p, mu_)) / scale;
    origin_cross_check_ = std::max(origin_cross_check_, rel);
  }
  if (origin_cross_check_ > kOriginTolerance) {
    std::ostringstream msg;
    msg << "KernelTable: damped-comb kernel sums diverge from the closed form at the origin "
        << "(max relative mismatch " << origin_cross_check_ << ", dft_size " << dft_size_
        << ", eta " << eta_ << ")";
    throw std::runtime_error(msg.str());
  }
}

double KernelTable::cq(int q) const {
  if (q < 0 || q >= static_cast<int>(cq_.size()))
    throw std::out_of_range("KernelTable::cq: index outside the cached table");
  return cq_[q];
}

void KernelTable::add_transverse_mode(double k_perp2) {
  if (k_perp2 < 0.0) throw std::invalid_argument("KernelTable: k_perp2 must be >= 0");
  if (transverse_closures_.count(k_perp2)) return;
  std::vector<cdouble> g = sums(0.0, k_perp2);
  for (cdouble& v : g) v /= mu2_;
  transverse_closures_.emplace(k_perp2, std::move(g));
}

std::span<const cdouble> KernelTable::closure_transverse(double k_perp2) const {
  auto it = transverse_closures_.find(k_perp2);
  if (it == transverse_closures_.end())
    throw std::out_of_range("KernelTable: transverse mode not registered before use");
  return it->second;
}

std::vector<cdouble> KernelTable::comb_sums(double x, double k_perp2, bool slope) const {
  std::vector<cdouble> f(n_steps_, cdouble(0.0, 0.0));
  const double ax = std::abs(x);
  const double growth = std::exp(eta_);
  for (int l = 0; l < dft_size_; ++l) {
    const cdouble energy = comb_k2_[l] - k_perp2;
    cdouble g;
    if (slope) {
      g = 0.5 * std::exp(cdouble(0.0, 1.0) * outgoing_root(energy) * ax);
    } else {
      g = free_green_1d(energy, ax);
    }
    const cdouble base = comb_pref_[l] * g;
    // exp(-i p phi_l) = (e^{eta} e^{-2 pi i l / N})^p, walked incrementally.
    const cdouble rot = std::polar(growth, -2.0 * M_PI * l / dft_size_);
    cdouble acc = base;
    f[0] += acc;
    for (int p = 1; p < n_steps_; ++p) {
      acc *= rot;
      f[p] += acc;
    }
  }
  return f;
}

std::vector<cdouble> KernelTable::sums(double x, double k_perp2) const {
  return comb_sums(x, k_perp2, false);
}

std::vector<cdouble> KernelTable::sum_slopes(double x, double k_perp2) const {
  return comb_sums(x, k_perp2, true);
}

cdouble KernelTable::sum_at(int p, double x, double k_perp2) const {
  if (p < 0 || p >= dft_size_)
    throw std::out_of_range("KernelTable::sum_at: p outside the dft range");
  cdouble f(0.0, 0.0);
  const double ax = std::abs(x);
  for (int l = 0; l < dft_size_; ++l) {
    const cdouble phase =
        std::polar(std::exp(p * eta_), -2.0 * M_PI * p * l / dft_size_);
    f += phase * comb_pref_[l] * free_green_1d(comb_k2_[l] - k_perp2, ax);
  }
  return f;
}

cdouble kernel_sum_dft(int p, double x, double k_perp2, const KernelTable& table) {
  return table.sum_at(p, x, k_perp2);
}

}  // namespace qtbc
