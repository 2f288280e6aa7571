#pragma once

// Series CSV and binary snapshot formats.
//
// CSV: fixed header
//   step,t,abs_r,phase_r,abs_s,mass_min,mass_max,min_rho,tail_mass,boundary_leak
// one row per record, numbers with 17 significant digits.
//
// Snapshot: magic "KKF1"; n_omega, n_theta, n_Omega as u64 LE; d_omega, d_t,
// d_Omega, G_omega, t as f64 LE; then the values row-major (i outer, j
// middle, k inner) as f64 LE.

#include <string>
#include <vector>

#include "kkf/field.hpp"
#include "kkf/solver.hpp"

namespace kkf {

extern const char* const kSeriesHeader;

std::string series_to_string(const std::vector<DiagnosticsRecord>& records);
void write_series(const std::string& path, const std::vector<DiagnosticsRecord>& records);

void write_snapshot(const std::string& path, const DensityField& field, double t);

struct Snapshot {
  DensityField field;  // grid carries the recorded scalars; n_t/T are not stored
  double t = 0.0;
};

Snapshot read_snapshot(const std::string& path);

}  // namespace kkf
