#pragma once

#include "qtbc/stepper.hpp"

namespace qtbc {

/// Trapezoidal norm of the field over the integration domain.
double interior_norm(const ComplexField& field);

/// Probability carried into the exterior on one side during one step,
/// computed from boundary data only:
///   Re[(1/2mu^2) (S* dS_n - conj(dS_n) S)], S = psi_n + psi_{n-1},
/// with the derivative taken along the outward normal of the given side.
/// The imaginary residue must stay below 1e-12 and is discarded.
double flux_increment(Side side, cdouble psi_n, cdouble psi_prev, cdouble dpsi_n,
                      cdouble dpsi_prev, cdouble mu2);

/// One-surface-point increment of an exterior overlap <Phi|Psi>:
/// (1/2mu^2) [conj(S_phi) dS_psi - conj(dS_phi) S_psi], derivatives along the
/// outward normal. flux_increment is the Phi == Psi special case.
cdouble overlap_increment(cdouble phi_sum, cdouble dn_phi_sum, cdouble psi_sum,
                          cdouble dn_psi_sum, cdouble mu2);

/// Conservation ledger: interior trapezoidal norm plus per-side cumulative
/// exterior flux, tracked step by step. Increments are computed only from
/// boundary values and derivatives, never from exterior fields.
class FluxLedger {
 public:
  void start(double interior0);
  /// Record step n from the histories (entries n and n-1 are consumed).
  void advance(double interior_n, const BoundaryHistory& left, const BoundaryHistory& right,
               cdouble mu2);

  int steps() const { return static_cast<int>(interior_.size()) - 1; }
  double interior(int n) const { return interior_.at(n); }
  double left_cumulative(int n) const { return left_cum_.at(n); }
  double right_cumulative(int n) const { return right_cum_.at(n); }
  double total(int n) const { return interior_.at(n) + left_cum_.at(n) + right_cum_.at(n); }

  /// max_n |total(n) - 1|.
  double max_conservation_error() const;
  /// max_n |total(n) - total(0)| (drift of the discrete identity).
  double max_drift() const;

 private:
  std::vector<double> interior_, left_cum_, right_cum_;
};

inline constexpr double kConservationTolerance = 1e-5;

}  // namespace qtbc
