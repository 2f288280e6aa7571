#include "kkf/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace kkf {

OrderParameters order_parameters(const DensityField& f, const FrequencyDistribution& g) {
  const GridSpec& grid = f.grid;
  if (g.size() != grid.n_Omega)
    throw std::invalid_argument("frequency distribution does not match the grid");
  for (std::size_t k = 0; k < grid.n_Omega; ++k)
    if (std::abs(slice_mass(f, k) - 1.0) > 1e-6)
      throw std::invalid_argument("order_parameters: slice mass deviates from 1");

  std::vector<double> cos_th(grid.n_theta), sin_th(grid.n_theta);
  for (std::size_t j = 0; j < grid.n_theta; ++j) {
    cos_th[j] = std::cos(grid.theta_at(j));
    sin_th[j] = std::sin(grid.theta_at(j));
  }
  std::vector<double> cos_w(grid.n_omega), sin_w(grid.n_omega);
  for (std::size_t i = 0; i < grid.n_omega; ++i) {
    cos_w[i] = std::cos(grid.omega_at(i));
    sin_w[i] = std::sin(grid.omega_at(i));
  }

  const double measure = grid.cell_measure();
  double r_re = 0.0, r_im = 0.0, s_re = 0.0, s_im = 0.0;
  for (std::size_t k = 0; k < grid.n_Omega; ++k) {
    double kr_re = 0.0, kr_im = 0.0, ks_re = 0.0, ks_im = 0.0;
    for (std::size_t j = 0; j < grid.n_theta; ++j) {
      const double cj = cos_th[j], sj = sin_th[j];
      for (std::size_t i = 0; i < grid.n_omega; ++i) {
        const double rho = f.at(i, j, k);
        kr_re += rho * cj;
        kr_im += rho * sj;
        ks_re += rho * cos_w[i];
        ks_im += rho * sin_w[i];
      }
    }
    const double wk = g.weight(k) * measure;
    r_re += wk * kr_re;
    r_im += wk * kr_im;
    s_re += wk * ks_re;
    s_im += wk * ks_im;
  }

  OrderParameters out;
  out.r = {std::hypot(r_re, r_im), std::atan2(r_im, r_re)};
  out.s = {std::hypot(s_re, s_im), std::atan2(s_im, s_re)};
  return out;
}

double kura_field(double K, const OrderParameter& r, double theta) {
  return K * r.abs * std::sin(r.phase - theta);
}

std::vector<double> phi_discrete(const DensityField& f, const FrequencyDistribution& g,
                                 const ModelParams& p) {
  const OrderParameters ops = order_parameters(f, g);
  const GridSpec& grid = f.grid;
  std::vector<double> phi(grid.n_theta * grid.n_Omega);
  for (std::size_t j = 0; j < grid.n_theta; ++j) {
    const double coupling = kura_field(p.K, ops.r, grid.theta_at(j));
    for (std::size_t k = 0; k < grid.n_Omega; ++k)
      phi[j * grid.n_Omega + k] = -g.node(k) - coupling;
  }
  return phi;
}

}  // namespace kkf
