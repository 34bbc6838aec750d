#include <doctest.h>

#include <cmath>

#include "qtbc/observables.hpp"
#include "qtbc/scenario.hpp"

using namespace qtbc;

TEST_CASE("flux and overlap increments: degenerate inputs") {
  const cdouble mu2(0.0, 1000.0);
  CHECK(flux_increment(Side::right, {}, {}, {}, {}, mu2) == 0.0);
  CHECK(overlap_increment({}, {}, cdouble(1, 2), cdouble(3, -1), mu2) == cdouble(0.0, 0.0));
  // phi == psi reduces the overlap increment to the flux increment
  const cdouble s(0.3, -0.8), ds(1.1, 0.4);
  const cdouble ov = overlap_increment(s, ds, s, ds, mu2);
  CHECK(ov.real() == doctest::Approx(flux_increment(Side::right, s, cdouble(0, 0), ds,
                                                    cdouble(0, 0), mu2))
                         .epsilon(1e-14));
  CHECK(std::abs(ov.imag()) < 1e-15);
}

TEST_CASE("interior norm: normalization and trapezoid order") {
  auto g = std::make_shared<Grid1D>(1.0, 201);
  CHECK(interior_norm(make_gaussian(g, {0.0, 0.15, 0.0})) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(interior_norm(ComplexField(g)) == 0.0);

  // |psi|^2 = e^{2x}: trapezoid error halves twice per dx halving
  const double exact = std::sinh(2.0);
  auto trap_err = [&](int nx) {
    auto gi = std::make_shared<Grid1D>(1.0, nx);
    ComplexField f(gi);
    for (int i = 0; i < nx; ++i) f.values[i] = std::exp(gi->x[i]);
    return std::abs(interior_norm(f) - exact);
  };
  const double ratio = trap_err(101) / trap_err(201);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("free rightward packet: right flux dominates, left stays small but real") {
  SimulationConfig cfg = SimulationConfig::defaults("free-1d");
  cfg.t_final = 12.0;
  cfg.n_steps = 120;
  Assembled1D run = assemble_1d(cfg);
  FluxLedger ledger;
  ledger.start(interior_norm(run.stepper->psi()));
  for (int n = 1; n <= cfg.n_steps; ++n) {
    run.stepper->step();
    ledger.advance(interior_norm(run.stepper->psi()), run.stepper->history(Side::left),
                   run.stepper->history(Side::right), run.scheme.mu2);
  }
  const int N = cfg.n_steps;
  CHECK(ledger.right_cumulative(N) > 0.8);
  CHECK(ledger.left_cumulative(N) > 1e-6);
  CHECK(ledger.left_cumulative(N) < 0.1);
  CHECK(ledger.max_conservation_error() < kConservationTolerance);
}

TEST_CASE("after the packet exits, interior probability decays monotonically") {
  SimulationConfig cfg = SimulationConfig::defaults("free-1d");
  cfg.v = 0.5;
  cfg.t_final = 16.0;
  cfg.n_steps = 320;
  Assembled1D run = assemble_1d(cfg);
  FluxLedger ledger;
  ledger.start(interior_norm(run.stepper->psi()));
  for (int n = 1; n <= cfg.n_steps; ++n) {
    run.stepper->step();
    ledger.advance(interior_norm(run.stepper->psi()), run.stepper->history(Side::left),
                   run.stepper->history(Side::right), run.scheme.mu2);
  }
  bool below_half = false;
  for (int n = 1; n <= cfg.n_steps; ++n) {
    if (!below_half && ledger.interior(n) < 0.5) below_half = true;
    if (below_half) CHECK(ledger.interior(n) <= ledger.interior(n - 1) + 1e-12);
  }
  CHECK(ledger.interior(cfg.n_steps) < 1e-3);
}

TEST_CASE("driven trap drains while the static control plateaus") {
  SimulationConfig cfg = SimulationConfig::defaults("driven-trap");
  auto run_with = [&](const PotentialSpec& pot) {
    auto grid = std::make_shared<Grid1D>(cfg.a, cfg.nx);
    TimeScheme scheme = TimeScheme::spreading_units(cfg.n_steps, cfg.t_final, cfg.sigma0);
    auto table = std::make_shared<KernelTable>(scheme.mu2, cfg.n_steps);
    StepperOptions opt;
    opt.tau_per_step = cfg.tau_per_step();
    Stepper1D st(grid, scheme, pot, table, make_gaussian(grid, cfg.packet()), opt);
    FluxLedger ledger;
    ledger.start(interior_norm(st.psi()));
    for (int n = 1; n <= cfg.n_steps; ++n) {
      st.step();
      ledger.advance(interior_norm(st.psi()), st.history(Side::left), st.history(Side::right),
                     scheme.mu2);
    }
    return ledger;
  };
  const FluxLedger driven = run_with(cfg.potential());
  const FluxLedger control = run_with(PotentialSpec::static_gaussian(cfg.v0, cfg.b));
  const int N = cfg.n_steps;
  CHECK(driven.interior(N) < 0.3);
  CHECK(driven.interior(N) < driven.interior(N / 2));
  CHECK(control.interior(N) > 0.9);
  CHECK(std::abs(control.interior(N) - control.interior(N / 2)) < 0.01);
  CHECK(driven.max_conservation_error() < kConservationTolerance);
  CHECK(control.max_conservation_error() < kConservationTolerance);
}

TEST_CASE("ledger misuse") {
  FluxLedger ledger;
  BoundaryHistory h;
  CHECK_THROWS_AS(ledger.advance(1.0, h, h, cdouble(0.0, 1.0)), std::logic_error);
}
