#pragma once

// Density field on the (omega, theta, Omega) grid and its normalization.
// Per-slice invariant: values >= 0, boundary rows identically zero, and
// cell_measure() * sum_{i,j} rho[i][j][k] = 1 for every slice k.

#include <cstddef>
#include <vector>

#include "kkf/model.hpp"

namespace kkf {

struct DensityField {
  GridSpec grid;
  std::vector<double> values;  // layout ((i * n_theta) + j) * n_Omega + k

  DensityField() = default;
  explicit DensityField(const GridSpec& g)
      : grid(g), values(g.n_omega * g.n_theta * g.n_Omega, 0.0) {}

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * grid.n_theta + j) * grid.n_Omega + k;
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) { return values[index(i, j, k)]; }
  double at(std::size_t i, std::size_t j, std::size_t k) const { return values[index(i, j, k)]; }
};

// Mass of slice k, cell_measure-weighted. Kahan-compensated so the value is
// trustworthy at the 1e-15 level even on large slices.
double slice_mass(const DensityField& f, std::size_t k);
std::vector<double> slice_masses(const DensityField& f);

// Scales each slice to unit mass. Throws on a zero, negative or non-finite
// slice mass.
void renormalize(DensityField& f);

double min_value(const DensityField& f);

// Mass sitting at |omega| > G_omega / 2, summed over slices and divided by
// the slice count (so the result is comparable to the unit slice mass).
double tail_mass(const DensityField& f);

bool has_non_finite(const DensityField& f);

}  // namespace kkf
