#pragma once

#include <map>
#include <span>
#include <vector>

#include "qtbc/field.hpp"

namespace qtbc {

/// Boundary convolution coefficients C_q = (2q)!/(2^q q!)^2, computed by the
/// multiplicative recurrence C_q = C_{q-1} (2q-1)/(2q) (no factorial overflow).
double cq_coefficient(int q);

/// Free 1D Green function G(E, x) = exp(i k |x|) / (2 i k), k the outgoing
/// root of the (complex) energy E.
cdouble free_green_1d(cdouble energy, double x);

/// Discrete-propagator pair sum at the origin, K_p(0) + K_{p+1}(0):
/// zero for odd p, -i mu C_{p/2} for even p.
cdouble kernel_sum_origin(int p, cdouble mu);

/// Precomputed discrete-propagator sums for one Crank-Nicolson scheme.
///
/// The sums K_p + K_{p+1} are evaluated on a damped frequency comb
/// phi_l = 2 pi l / N_dft + i eta as
///   (1/N_dft) sum_l exp(-i p phi_l) * 2 mu^2/(1 + e^{i phi_l}) * G(k_l^2 - k_perp^2, x)
/// with k_l^2 = mu^2 (1 - e^{i phi_l}) / (1 + e^{i phi_l}). Construction
/// cross-checks the damped evaluation against the closed form at the origin
/// and throws if the relative mismatch exceeds 1e-9.
///
/// Tables are immutable once the transverse modes are registered; readers on
/// multiple threads are then safe.
class KernelTable {
 public:
  /// dft_size == 0 selects the smallest power of two >= 8 * n_steps;
  /// eta == 0 selects 28 / dft_size (damping exp(-N eta) < 1e-12).
  KernelTable(cdouble mu2, int n_steps, int dft_size = 0, double eta = 0.0);

  cdouble mu2() const { return mu2_; }
  cdouble mu() const { return mu_; }
  int n_steps() const { return n_steps_; }
  int dft_size() const { return dft_size_; }
  double eta() const { return eta_; }

  double cq(int q) const;
  std::span<const double> cq_table() const { return cq_; }

  /// Closure coefficients g_p with Psi_n(a) = sum_p g_p (d_{n-p} + d_{n-p-1})
  /// at the right edge (left edge mirrors the sign). Closed-form route:
  /// g_p = (K_p(0)+K_{p+1}(0)) / mu^2.
  std::span<const cdouble> closure_origin() const { return closure_origin_; }

  /// Damped-comb closure for a transverse energy shift (k^2 -> k^2 + k_perp^2).
  /// Modes must be registered up front; lookups never mutate the table.
  void add_transverse_mode(double k_perp2);
  std::span<const cdouble> closure_transverse(double k_perp2) const;

  /// K_p(x) + K_{p+1}(x) for all p < n_steps, and the radial derivative
  /// d/d|x| of the same quantity (used for exterior reconstruction).
  std::vector<cdouble> sums(double x, double k_perp2 = 0.0) const;
  std::vector<cdouble> sum_slopes(double x, double k_perp2 = 0.0) const;

  /// Single-entry evaluation of the damped-comb sum.
  cdouble sum_at(int p, double x, double k_perp2 = 0.0) const;

  /// Largest relative mismatch of the damped evaluation against the closed
  /// form at the origin, recorded at construction.
  double origin_cross_check() const { return origin_cross_check_; }

  static constexpr double kOriginTolerance = 1e-9;

 private:
  std::vector<cdouble> comb_sums(double x, double k_perp2, bool slope) const;

  cdouble mu2_, mu_;
  int n_steps_ = 0;
  int dft_size_ = 0;
  double eta_ = 0.0;
  double origin_cross_check_ = 0.0;
  std::vector<double> cq_;
  std::vector<cdouble> closure_origin_;
  std::vector<cdouble> comb_w_;     // e^{i phi_l}
  std::vector<cdouble> comb_pref_;  // 2 mu^2 / (N (1 + w_l))
  std::vector<cdouble> comb_k2_;    // k_l^2
  std::map<double, std::vector<cdouble>> transverse_closures_;
};

/// Damped-comb evaluation of K_p(x) + K_{p+1}(x) with the table's scheme.
cdouble kernel_sum_dft(int p, double x, double k_perp2, const KernelTable& table);

}  // namespace qtbc
