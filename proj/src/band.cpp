#include "qtbc/band.hpp"

#include <cmath>
#include <stdexcept>

namespace qtbc {

BandGrid::BandGrid(GridPtr x_grid, int ny_points, double y_min, double y_max)
    : x(std::move(x_grid)), ny(ny_points), y0(y_min), y1(y_max) {
  if (!x) throw std::invalid_argument("BandGrid: null x grid");
  if (ny < 3) throw std::invalid_argument("BandGrid: need at least 3 transverse points");
  if (!(y1 > y0)) throw std::invalid_argument("BandGrid: empty transverse window");
  dy = (y1 - y0) / ny;
  y.resize(ny);
  ky.resize(ny);
  const double dk = 2.0 * M_PI / (y1 - y0);
  for (int j = 0; j < ny; ++j) {
    y[j] = y0 + j * dy;
    const int m = j <= ny / 2 ? j : j - ny;
    ky[j] = dk * m;
  }
}

Field2D::Field2D(BandGridPtr g) : grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("Field2D: null grid");
  values.assign(static_cast<size_t>(grid->x->nx) * grid->ny, cdouble(0.0, 0.0));
}

Field2D make_gaussian_2d(const BandGridPtr& grid, const Packet2DSpec& spec) {
  if (!(spec.sigma0 > 0.0)) throw std::invalid_argument("make_gaussian_2d: sigma0 > 0 required");
  WavePacketSpec px{spec.x0, spec.sigma0, spec.vx};
  const ComplexField gx = make_gaussian(grid->x, px);
  const double k0y = spec.vy / (spec.sigma0 * spec.sigma0);
  const double pref = std::pow(M_PI, -0.25) / std::sqrt(spec.sigma0);
  std::vector<cdouble> gy(grid->ny);
  for (int j = 0; j < grid->ny; ++j) {
    const double u = grid->y[j] - spec.y0;
    const double env = pref * std::exp(-u * u / (2.0 * spec.sigma0 * spec.sigma0));
    gy[j] = env * cdouble(std::cos(k0y * u), std::sin(k0y * u));
  }
  Field2D f(grid);
  for (int ix = 0; ix < grid->x->nx; ++ix)
    for (int j = 0; j < grid->ny; ++j) f.at(ix, j) = gx.values[ix] * gy[j];
  return f;
}

ModeSet decompose(const Field2D& field) {
  const BandGridPtr& g = field.grid;
  const int ny = g->ny, nx = g->x->nx;
  ModeSet out{g, std::vector<std::vector<cdouble>>(ny, std::vector<cdouble>(nx))};
  // Plain index DFT; ny stays small (tens of modes), no fft needed.
  std::vector<cdouble> phase(ny);
  for (int m = 0; m < ny; ++m) {
    for (int j = 0; j < ny; ++j) phase[j] = std::polar(1.0 / ny, -2.0 * M_PI * m * j / ny);
    for (int ix = 0; ix < nx; ++ix) {
      cdouble acc(0.0, 0.0);
      for (int j = 0; j < ny; ++j) acc += field.at(ix, j) * phase[j];
      out.modes[m][ix] = acc;
    }
  }
  return out;
}

Field2D recombine(const ModeSet& modes) {
  const BandGridPtr& g = modes.grid;
  const int ny = g->ny, nx = g->x->nx;
  Field2D out(g);
  std::vector<cdouble> phase(ny);
  for (int m = 0; m < ny; ++m) {
    for (int j = 0; j < ny; ++j) phase[j] = std::polar(1.0, 2.0 * M_PI * m * j / ny);
    for (int ix = 0; ix < nx; ++ix) {
      const cdouble c = modes.modes[m][ix];
      for (int j = 0; j < ny; ++j) out.at(ix, j) += c * phase[j];
    }
  }
  return out;
}

double nyquist_tail(const ModeSet& modes) {
  const int ny = modes.grid->ny;
  double peak = 0.0, edge = 0.0;
  double kmax = 0.0;
  for (int m = 0; m < ny; ++m) kmax = std::max(kmax, std::abs(modes.grid->ky[m]));
  for (int m = 0; m < ny; ++m) {
    double amp = 0.0;
    for (const cdouble& v : modes.modes[m]) amp = std::max(amp, std::abs(v));
    peak = std::max(peak, amp);
    if (std::abs(std::abs(modes.grid->ky[m]) - kmax) < 1e-12) edge = std::max(edge, amp);
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

BandSolver::BandSolver(BandGridPtr grid, const TimeScheme& scheme, const Packet2DSpec& packet)
    : grid_(std::move(grid)), scheme_(scheme) {
  table_ = std::make_shared<KernelTable>(scheme_.mu2, scheme_.n_steps);
  const Field2D initial = make_gaussian_2d(grid_, packet);
  ModeSet modes = decompose(initial);
  nyquist_tail_ = nyquist_tail(modes);

  for (int m = 0; m < grid_->ny; ++m) {
    const double k2 = grid_->ky[m] * grid_->ky[m];
    table_->add_transverse_mode(k2);
  }
  const double tau_step = scheme_.dt * 2.0 / (packet.sigma0 * packet.sigma0);
  ledgers_.resize(grid_->ny);
  for (int m = 0; m < grid_->ny; ++m) {
    const double k2 = grid_->ky[m] * grid_->ky[m];
    Stepper1D::Options opt;
    opt.transverse_energy = k2;
    opt.closure = table_->closure_transverse(k2);
    opt.tau_per_step = tau_step;
    steppers_.push_back(std::make_unique<Stepper1D>(
        grid_->x, scheme_, PotentialSpec::none(), table_,
        ComplexField(grid_->x, std::move(modes.modes[m])), opt));
    ledgers_[m].start(interior_norm(steppers_.back()->psi()));
  }
  initial_total_ = conservation_total();
}

void BandSolver::step() {
  for (size_t m = 0; m < steppers_.size(); ++m) {
    steppers_[m]->step();
    ledgers_[m].advance(interior_norm(steppers_[m]->psi()), steppers_[m]->history(Side::left),
                        steppers_[m]->history(Side::right), scheme_.mu2);
  }
  ++n_;
}

Field2D BandSolver::field() const {
  ModeSet modes{grid_, std::vector<std::vector<cdouble>>(grid_->ny)};
  for (int m = 0; m < grid_->ny; ++m) modes.modes[m] = steppers_[m]->psi().values;
  return recombine(modes);
}

std::vector<double> BandSolver::density() const {
  const Field2D f = field();
  std::vector<double> rho(f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) rho[i] = std::norm(f.values[i]);
  return rho;
}

double BandSolver::conservation_total() const {
  // Parseval in y: integral dy |psi|^2 = L sum_m |psi_m|^2.
  double total = 0.0;
  for (size_t m = 0; m < steppers_.size(); ++m)
    total += ledgers_[m].interior(n_) + ledgers_[m].left_cumulative(n_) +
             ledgers_[m].right_cumulative(n_);
  return total * grid_->length();
}

}  // namespace qtbc
