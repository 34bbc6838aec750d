#pragma once

#include <string>
#include <vector>

#include "qtbc/field.hpp"
#include "qtbc/kernel.hpp"
#include "qtbc/observables.hpp"

namespace qtbc {

// Delimited-text writers with one-line headers; %.17g formatting keeps
// identical configs bit-identical on disk.

void write_snapshot(const std::string& path, const ComplexField& field);

void write_ledger(const std::string& path, const FluxLedger& ledger, double tau_per_step);

void write_density_2d(const std::string& path, int nx, int ny, double x0, double x1, double y0,
                      double y1, const std::vector<double>& rho);

struct ManifestEntry {
  std::string key, value;
};
struct ManifestCheck {
  std::string name;
  bool pass = true;
  std::string details;
};

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries,
                    const std::vector<ManifestCheck>& checks);

/// C_q table plus origin kernel sums (closed form, damped comb, mismatch).
void write_kernel_dump(const std::string& path, const KernelTable& table);

std::string format_double(double v);

}  // namespace qtbc
