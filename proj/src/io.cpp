#include "qtbc/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qtbc {

namespace {
struct File {
  std::FILE* f;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
  }
  ~File() {
    if (f) std::fclose(f);
  }
};
}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_snapshot(const std::string& path, const ComplexField& field) {
  File out(path);
  std::fprintf(out.f, "# x re_psi im_psi density\n");
  for (int i = 0; i < field.size(); ++i) {
    const cdouble v = field.values[i];
    std::fprintf(out.f, "%.17g %.17g %.17g %.17g\n", field.grid->x[i], v.real(), v.imag(),
                 std::norm(v));
  }
}

void write_ledger(const std::string& path, const FluxLedger& ledger, double tau_per_step) {
  File out(path);
  std::fprintf(out.f, "# step tau interior left_cum right_cum total\n");
  for (int n = 0; n <= ledger.steps(); ++n) {
    std::fprintf(out.f, "%d %.17g %.17g %.17g %.17g %.17g\n", n, n * tau_per_step,
                 ledger.interior(n), ledger.left_cumulative(n), ledger.right_cumulative(n),
                 ledger.total(n));
  }
}

void write_density_2d(const std::string& path, int nx, int ny, double x0, double x1, double y0,
                      double y1, const std::vector<double>& rho) {
  if (static_cast<int>(rho.size()) != nx * ny)
    throw std::invalid_argument("write_density_2d: size mismatch");
  File out(path);
  std::fprintf(out.f, "# nx %d ny %d x %.17g %.17g y %.17g %.17g\n", nx, ny, x0, x1, y0, y1);
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy)
      std::fprintf(out.f, "%.17g%c", rho[ix * ny + iy], iy + 1 == ny ? '\n' : ' ');
  }
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries,
                    const std::vector<ManifestCheck>& checks) {
  File out(path);
  for (const auto& e : entries) std::fprintf(out.f, "%s = %s\n", e.key.c_str(), e.value.c_str());
  for (const auto& c : checks)
    std::fprintf(out.f, "check %s = %s (%s)\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                 c.details.c_str());
}

void write_kernel_dump(const std::string& path, const KernelTable& table) {
  File out(path);
  std::fprintf(out.f, "# q cq\n");
  for (size_t q = 0; q < table.cq_table().size(); ++q)
    std::fprintf(out.f, "%zu %.17g\n", q, table.cq_table()[q]);
  std::fprintf(out.f, "# p re_closed im_closed re_comb im_comb rel_mismatch\n");
  const std::vector<cdouble> comb = table.sums(0.0, 0.0);
  for (int p = 0; p < table.n_steps(); ++p) {
    const cdouble closed = kernel_sum_origin(p, table.mu());
    const double scale = std::abs(table.mu()) * table.cq(p / 2);
    std::fprintf(out.f, "%d %.17g %.17g %.17g %.17g %.3g\n", p, closed.real(), closed.imag(),
                 comb[p].real(), comb[p].imag(), std::abs(comb[p] - closed) / scale);
  }
}

}  // namespace qtbc
