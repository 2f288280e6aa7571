#pragma once

// Finite-N oscillator ensemble for the second-order system
//
//   m theta_l'' + theta_l' = Omega_l + K r_N sin(psi_N - theta_l) + xi_l,
//
// integrated by Euler-Maruyama in the (omega, theta) variables:
//
//   omega <- omega + (dt/m)(-omega + Omega_l + K r_N sin(psi_N - theta))
//                  + (sqrt(2 D)/m) sqrt(dt) xi,
//   theta <- theta + omega dt   (mod 2pi, with the updated omega).
//
// The noise scaling sqrt(2 D)/m makes the ensemble law match the kinetic
// equation's diffusion coefficient D/m^2.
//
// Noise is counter-based: variate (seed, step, oscillator) is produced by a
// splitmix64 hash chain feeding a Box-Muller transform. Serial and parallel
// partitions of the loop therefore agree bit for bit, and a fixed seed fixes
// the run.

#include <cstdint>
#include <functional>

#include "kkf/meanfield.hpp"

namespace kkf {

struct OscillatorEnsemble {
  std::vector<double> omega;
  std::vector<double> theta;
  std::vector<double> Omega;  // natural frequencies, fixed per oscillator

  std::size_t size() const { return theta.size(); }
};

// Standard normal variate of the (seed, step, oscillator) counter.
double normal_variate(std::uint64_t seed, std::uint64_t step, std::uint64_t oscillator);

// Draws N oscillators: (omega, theta) by rejection sampling of rho0 over
// [-G_omega, G_omega] x [0, 2pi) against a scanned envelope, Omega by inverse
// CDF of the tabulated weights. Throws if the acceptance rate degenerates
// (below 1e-4) or if rho0 is negative/non-finite on the scan lattice.
OscillatorEnsemble sample_ensemble(const std::function<double(double, double)>& rho0,
                                   const FrequencyDistribution& g, double G_omega,
                                   std::size_t N, std::uint64_t seed);

// One Euler-Maruyama step; the mean field r_N e^(i psi_N) is computed from
// the current ensemble before any oscillator moves.
void langevin_step(OscillatorEnsemble& ens, const ModelParams& p, double dt,
                   std::uint64_t seed, std::uint64_t step);

// r_N e^(i psi_N) = (1/N) sum_l e^(i theta_l); frequency analogue over omega.
OrderParameter ensemble_phase_order(const OscillatorEnsemble& ens);
OrderParameter ensemble_freq_order(const OscillatorEnsemble& ens);

}  // namespace kkf
