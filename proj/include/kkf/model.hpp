#pragma once

// Model parameters, grid construction and the stability gate for the explicit
// scheme solving the kinetic mean-field oscillator equation
//
//   (D/m^2) d2_ww rho + (1/m) d_w[(w - Omega - K_rho) rho] - w d_th rho - d_t rho = 0
//
// on [-G_omega, G_omega] x [0, 2pi) x supp(g) x [0, T].

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kkf {

struct ModelParams {
  double m = 1.0;       // inertia, > 0
  double D = 1.0;       // noise strength, > 0
  double K = 0.0;       // coupling, >= 0
  double Omega1 = 0.0;  // natural frequencies live in [-Omega1, Omega1]

  bool operator==(const ModelParams&) const = default;
};

// Throws std::invalid_argument on out-of-range parameters.
void validate_params(const ModelParams& p);

// Mesh for the density field. The theta spacing is tied to the other two:
// d_theta = d_omega * d_t and n_theta * d_theta = 2pi exactly, so that the
// theta advection by omega_i over one step is an exact shift of i cells.
struct GridSpec {
  double d_omega = 0.0;
  double d_t = 0.0;      // adjusted so n_theta * d_omega * d_t = 2pi
  double d_theta = 0.0;  // = d_omega * d_t
  double d_Omega = 0.0;  // 0 marks a degenerate single-node frequency grid
  double G_omega = 0.0;  // omega domain is [-G_omega, G_omega]
  double T = 0.0;
  std::size_t n_omega = 0;  // rows 0 and n_omega-1 are the hard-zero boundary
  std::size_t n_theta = 0;
  std::size_t n_Omega = 0;
  std::size_t n_t = 0;  // steps to reach T

  std::size_t center_row() const { return (n_omega - 1) / 2; }
  double omega_at(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(center_row())) * d_omega;
  }
  double theta_at(std::size_t j) const { return static_cast<double>(j) * d_theta; }
  // Quadrature weight of one (omega, theta) cell; equals d_omega^2 * d_t.
  double cell_measure() const { return d_omega * d_theta; }
  std::size_t cells_per_slice() const { return n_omega * n_theta; }

  bool operator==(const GridSpec&) const = default;
};

struct StabilityReport {
  bool d_omega_ok = false;        // d_omega <= sqrt(2 D) / m
  std::optional<double> d_t_max;  // empty when 2D <= m d_omega^2: no constraint
  bool d_t_ok = false;
  double G_omega_max = 0.0;       // 2D/(m d_omega) - Omega1 - K
  bool G_omega_ok = false;
  bool overall_ok = false;

  std::string summary() const;
};

// Checks the sufficient conditions for nonnegativity of the scheme weights:
//   d_omega <= sqrt(2D)/m,
//   d_t <= m^2 d_omega^2 / (2D - m d_omega^2)   (when the denominator is > 0),
//   G_omega <= 2D/(m d_omega) - Omega1 - K.
// Malformed grids (non-positive spacings) are rejected with an exception.
StabilityReport validate_stability(const ModelParams& p, const GridSpec& g);

// Largest stable d_t for a given d_omega; empty when unconstrained.
std::optional<double> stability_d_t_max(const ModelParams& p, double d_omega);
// Largest admissible G_omega for a given d_omega (may be <= 0).
double stability_G_omega_max(const ModelParams& p, double d_omega);

// Builds the grid from target spacings. G_omega/d_omega and, for a resolved
// frequency grid, Omega1/d_Omega must be integral within rounding distance.
// d_t is recomputed from n_theta = round(2pi / (d_omega * d_t_target)).
// Throws if the adjusted grid fails validate_stability, unless allow_unstable.
GridSpec build_grid(const ModelParams& p, double d_omega, double d_t_target,
                    double G_omega, double T, double d_Omega = 0.0,
                    bool allow_unstable = false);

enum class DistributionKind { PointMass, Uniform, Gaussian, Table };

struct DistributionSpec {
  DistributionKind kind = DistributionKind::PointMass;
  double center = 0.0;        // point-mass location, |center| <= Omega1
  double sigma = 1.0;         // gaussian width
  std::vector<double> table;  // raw g values on the Omega grid (Table kind)

  bool operator==(const DistributionSpec&) const = default;
};

// Natural-frequency density g tabulated on the Omega nodes of a grid.
// Every node carries the full rectangle-rule cell: weight(k) = g_k * d_Omega,
// renormalized so the weights sum to 1. A point mass is a single node of
// weight 1. Node values are exposed directly for the mean-field sums.
class FrequencyDistribution {
 public:
  FrequencyDistribution() = default;

  static FrequencyDistribution point_mass(double Omega0);
  // nodes and raw g values of equal size; g >= 0 with positive total.
  static FrequencyDistribution tabulated(std::vector<double> nodes,
                                         std::vector<double> g_values,
                                         double d_Omega);

  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t k) const { return nodes_[k]; }
  double weight(std::size_t k) const { return weights_[k]; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;  // g_k * d_Omega after normalization
};

// Realizes a distribution description on the Omega nodes implied by the grid.
// The described support must sit inside [-Omega1, Omega1] and the node count
// must match grid.n_Omega.
FrequencyDistribution build_frequency_distribution(const DistributionSpec& spec,
                                                   const ModelParams& p,
                                                   const GridSpec& g);

}  // namespace kkf
