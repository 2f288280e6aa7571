#pragma once

// Positivity-preserving explicit scheme. One update reads
//
//   rho^{n+1}[i][j][k] = A0       * rho^n[i  ][(j-i) mod n_theta][k]
//                      + A_minus  * rho^n[i-1][(j-i) mod n_theta][k]
//                      + A_plus   * rho^n[i+1][(j-i) mod n_theta][k]
//
// with A0      = 1 - 2 D dt / (m^2 dw^2) + dt/m,
//      A_-/+   = D dt / (m^2 dw^2) -/+ (dt / (2 dw m)) (i dw + Phi[(j-i)][k]),
// i counted from the center row. The theta shift by i cells is the exact
// advection by omega_i because d_theta = d_omega * d_t. Under the stability
// conditions all three weights are nonnegative, so nonnegative fields stay
// nonnegative, and A0(i) + A_minus(i+1) + A_plus(i-1) = 1 identically makes
// interior mass exact up to the flux absorbed by the zero boundary rows.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kkf/field.hpp"
#include "kkf/meanfield.hpp"

namespace kkf {

enum class InitialPreset {
  Default,   // exp(-w^2) (sin th + 1) / (1 + w^2)
  HalfSine,  // exp(-w^2) (sin(th/2) + 1) / (1 + w^2)
  Literal,   // exp(-w^2) (sin th + 1) / (w + 1); only on grids with G_omega < 1
  Gaussian,       // centered at (omega0, theta0) with the given sigmas
  Uniform,
};

struct InitialSpec {
  InitialPreset preset = InitialPreset::Default;
  double omega0 = 0.0;
  double theta0 = 0.0;
  double sigma_omega = 0.5;
  double sigma_theta = 0.5;

  bool operator==(const InitialSpec&) const = default;
};

// Pointwise evaluator (omega, theta) -> density, unnormalized.
std::function<double(double, double)> initial_evaluator(const InitialSpec& spec,
                                                        const GridSpec& grid);

// Samples the evaluator at the nodes, clips negatives to zero, zeroes the
// boundary rows, copies the slice to every Omega node and renormalizes.
// Evaluators that produce NaN or an all-zero slice are rejected.
DensityField init_density(const std::function<double(double, double)>& rho0,
                          const GridSpec& grid);
DensityField init_density(const InitialSpec& spec, const GridSpec& grid);

struct LaCoefficients {
  double a_minus = 0.0;
  double a0 = 0.0;
  double a_plus = 0.0;
};

// Stencil weights at frequency omega and drift offset phi.
LaCoefficients la_coefficients(const ModelParams& p, const GridSpec& g, double omega,
                               double phi);

// One explicit step; phi is the j * n_Omega + k table from phi_discrete.
// Writes into out (resized as needed), keeps the boundary rows zero, and
// returns the mass (cell_measure-weighted, averaged over slices) that the
// boundary rows absorbed. No normalization happens here.
double la_step(const DensityField& in, const std::vector<double>& phi,
               const ModelParams& p, DensityField& out);

struct StepReport {
  std::size_t step = 0;
  std::vector<double> pre_mass;  // per-slice mass before renormalization
  double min_value = 0.0;
  double boundary_leak = 0.0;
  double tail_mass = 0.0;  // beyond |omega| > G_omega/2, after renormalization
};

struct DiagnosticsRecord {
  std::size_t step = 0;
  double t = 0.0;
  double abs_r = 0.0;
  double phase_r = 0.0;
  double abs_s = 0.0;
  double mass_min = 0.0;  // slice-mass extremes before renormalization
  double mass_max = 0.0;
  double min_rho = 0.0;
  double tail_mass = 0.0;
  double boundary_leak = 0.0;
};

struct SimulationResult {
  std::vector<DiagnosticsRecord> series;  // rows 0..n_t
  DensityField final_field;
};

// Raised when the field stops being finite; carries the last healthy step.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& msg, std::size_t last_good)
      : std::runtime_error(msg), last_good_step_(last_good) {}
  std::size_t last_good_step() const { return last_good_step_; }

 private:
  std::size_t last_good_step_;
};

using StepCallback = std::function<void(std::size_t step, double t, const DensityField&)>;

// Runs n_t steps of (phi_discrete -> la_step -> renormalize), recording one
// diagnostics row per step including step 0 for the initial state. on_step,
// when set, fires after each recorded row with the current field.
SimulationResult run_simulation(const ModelParams& p, const FrequencyDistribution& g,
                                DensityField initial, const StepCallback& on_step = {});

// Worker count for the cell-update map: KKF_THREADS if set, otherwise the
// hardware concurrency. The update is an independent per-cell map, so the
// partitioning never changes results.
unsigned thread_count();

}  // namespace kkf
