#include "qtbc/field.hpp"

#include <cmath>
#include <stdexcept>

namespace qtbc {

cdouble outgoing_root(cdouble energy) {
  cdouble r = std::sqrt(energy);
  if (r.imag() < 0.0) r = -r;
  return r;
}

Grid1D::Grid1D(double half_width, int points) : a(half_width), nx(points) {
  if (!(a > 0.0)) throw std::invalid_argument("Grid1D: half width must be positive");
  if (nx < 3) throw std::invalid_argument("Grid1D: need at least 3 points");
  const int j_max = nx - 1;
  dx = 2.0 * a / j_max;
  x.resize(nx);
  // (2i - J)/J negates exactly under i -> J - i, so the grid is bit-symmetric.
  for (int i = 0; i <= j_max; ++i) x[i] = a * ((2.0 * i - j_max) / j_max);
}

ComplexField::ComplexField(GridPtr g) : grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("ComplexField: null grid");
  values.assign(grid->nx, cdouble(0.0, 0.0));
}

ComplexField::ComplexField(GridPtr g, std::vector<cdouble> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("ComplexField: null grid");
  if (static_cast<int>(values.size()) != grid->nx)
    throw std::invalid_argument("ComplexField: value count does not match grid");
}

bool ComplexField::finite() const {
  for (const cdouble& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

TimeScheme::TimeScheme(int steps, double total) : n_steps(steps), total_time(total) {
  if (n_steps < 1) throw std::invalid_argument("TimeScheme: need at least one step");
  if (!(total_time > 0.0)) throw std::invalid_argument("TimeScheme: total time must be positive");
  dt = total_time / n_steps;
  mu2 = cdouble(0.0, 2.0 / dt);  // 4im/(hbar dt) with hbar = 2m = 1
  mu = outgoing_root(mu2);
}

TimeScheme TimeScheme::spreading_units(int steps, double tau_final, double sigma0) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("TimeScheme: sigma0 must be positive");
  return TimeScheme(steps, 0.5 * sigma0 * sigma0 * tau_final);
}

PotentialSpec PotentialSpec::none() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::static_gaussian(double v0, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("PotentialSpec: b must be positive");
  PotentialSpec p;
  p.kind = Kind::static_gaussian;
  p.v0 = v0;
  p.b = b;
  return p;
}

PotentialSpec PotentialSpec::driven_gaussian(double v0, double b, double omega) {
  PotentialSpec p = static_gaussian(v0, b);
  p.kind = Kind::driven_gaussian;
  p.omega = omega;
  return p;
}

PotentialSpec PotentialSpec::double_well(double v0, double b, double a0) {
  PotentialSpec p = static_gaussian(v0, b);
  p.kind = Kind::double_well;
  p.a0 = a0;
  return p;
}

PotentialSpec PotentialSpec::driven_delta(double lambda0, double amplitude, double freq_factor) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("PotentialSpec: lambda0 must be positive");
  PotentialSpec p;
  p.kind = Kind::driven_delta;
  p.lambda0 = lambda0;
  p.amplitude = amplitude;
  p.freq_factor = freq_factor;
  return p;
}

ComplexField make_gaussian(const GridPtr& grid, const WavePacketSpec& spec) {
  if (!(spec.sigma0 > 0.0)) throw std::invalid_argument("make_gaussian: sigma0 must be positive");
  const double k0 = spec.v / (spec.sigma0 * spec.sigma0);
  const double pref = std::pow(M_PI, -0.25) / std::sqrt(spec.sigma0);
  ComplexField f(grid);
  for (int i = 0; i < grid->nx; ++i) {
    const double u = grid->x[i] - spec.x0;
    const double envelope = pref * std::exp(-u * u / (2.0 * spec.sigma0 * spec.sigma0));
    f.values[i] = envelope * cdouble(std::cos(k0 * u), std::sin(k0 * u));
  }
  return f;
}

double eval_potential(const PotentialSpec& spec, double x, double tau_mid) {
  switch (spec.kind) {
    case PotentialSpec::Kind::none:
      return 0.0;
    case PotentialSpec::Kind::static_gaussian:
      return spec.v0 * std::exp(-x * x / (spec.b * spec.b));
    case PotentialSpec::Kind::driven_gaussian:
      return spec.v0 * (1.0 + std::sin(2.0 * M_PI * spec.omega * tau_mid)) *
             std::exp(-x * x / (spec.b * spec.b));
    case PotentialSpec::Kind::double_well: {
      const double um = x - spec.a0, up = x + spec.a0;
      return spec.v0 * (std::exp(-um * um / (spec.b * spec.b)) +
                        std::exp(-up * up / (spec.b * spec.b)));
    }
    case PotentialSpec::Kind::driven_delta:
      throw std::invalid_argument("eval_potential: driven delta is not grid-representable");
  }
  throw std::logic_error("eval_potential: unknown potential kind");
}

double analytic_free_density(const WavePacketSpec& spec, double x, double tau) {
  if (tau < 0.0) throw std::invalid_argument("analytic_free_density: tau must be >= 0");
  const double st = spec.sigma0 * std::sqrt(1.0 + tau * tau);
  const double u = x - spec.x0 - spec.v * tau;
  return std::exp(-u * u / (st * st)) / (std::sqrt(M_PI) * st);
}

double support_leak_ratio(const ComplexField& field) {
  double peak = 0.0;
  for (const cdouble& v : field.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const double edge = std::max(std::abs(field.values.front()), std::abs(field.values.back()));
  return edge / peak;
}

}  // namespace qtbc
