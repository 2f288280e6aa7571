#include "kkf/field.hpp"

#include <cmath>
#include <stdexcept>

namespace kkf {

namespace {

// Kahan-compensated strided sum over one slice.
double compensated_slice_sum(const DensityField& f, std::size_t k) {
  const std::size_t stride = f.grid.n_Omega;
  double sum = 0.0, carry = 0.0;
  for (std::size_t idx = k; idx < f.values.size(); idx += stride) {
    const double y = f.values[idx] - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

double slice_mass(const DensityField& f, std::size_t k) {
  return f.grid.cell_measure() * compensated_slice_sum(f, k);
}

std::vector<double> slice_masses(const DensityField& f) {
  std::vector<double> masses(f.grid.n_Omega);
  for (std::size_t k = 0; k < f.grid.n_Omega; ++k) masses[k] = slice_mass(f, k);
  return masses;
}

void renormalize(DensityField& f) {
  for (std::size_t k = 0; k < f.grid.n_Omega; ++k) {
    const double mass = slice_mass(f, k);
    if (!std::isfinite(mass) || !(mass > 0.0))
      throw std::runtime_error("renormalize: slice mass is zero or not finite");
    const double scale = 1.0 / mass;
    const std::size_t stride = f.grid.n_Omega;
    for (std::size_t idx = k; idx < f.values.size(); idx += stride) f.values[idx] *= scale;
  }
}

double min_value(const DensityField& f) {
  double mn = 0.0;
  for (double v : f.values) mn = std::min(mn, v);
  return mn;
}

double tail_mass(const DensityField& f) {
  const double half = f.grid.G_omega / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.grid.n_omega; ++i) {
    if (std::abs(f.grid.omega_at(i)) <= half) continue;
    for (std::size_t j = 0; j < f.grid.n_theta; ++j)
      for (std::size_t k = 0; k < f.grid.n_Omega; ++k) sum += f.at(i, j, k);
  }
  return f.grid.cell_measure() * sum / static_cast<double>(f.grid.n_Omega);
}

bool has_non_finite(const DensityField& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return true;
  return false;
}

}  // namespace kkf
