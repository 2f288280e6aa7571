#pragma once

// Order parameters and the discrete mean-field drift.
//
// r e^(i psi) = sum_k weight(k) sum_{i,j} e^(i theta_j) rho[i][j][k] * cell,
// s e^(i chi) analogously with e^(i omega_i). The coupling field enters the
// scheme through the drift offset
//   Phi(theta_j, Omega_k) = -Omega_k - K |r| sin(psi - theta_j),
// which equals the O(n^2) double sum over the field by the addition theorem.

#include <vector>

#include "kkf/field.hpp"

namespace kkf {

struct OrderParameter {
  double abs = 0.0;
  double phase = 0.0;
};

struct OrderParameters {
  OrderParameter r;  // phase coherence
  OrderParameter s;  // frequency coherence
};

// Reduction order is fixed (k outer, j middle, i inner, sequential) so runs
// are bit-reproducible. Requires every slice mass within 1e-6 of 1.
OrderParameters order_parameters(const DensityField& f, const FrequencyDistribution& g);

// K |r| sin(psi - theta).
double kura_field(double K, const OrderParameter& r, double theta);

// Drift offset table, layout j * n_Omega + k. Bounded by Omega1 + K.
std::vector<double> phi_discrete(const DensityField& f, const FrequencyDistribution& g,
                                 const ModelParams& p);

}  // namespace kkf
