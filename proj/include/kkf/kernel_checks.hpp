#pragma once

// Self-contained identity suite for the kernel machinery. Each check compares
// a closed-form quantity against an independent quadrature (tensor midpoint
// on boxes sized from the covariance, Simpson for the time integral):
//
//   - backward normalization: integral of Gamma^eps over (xi, eta) equals 1,
//   - forward mass: integral of e^(t-tau) Gamma^eps over (w, th) equals 1,
//   - theta marginal: integral of Gamma^eps over eta equals the 1-d kernel,
//   - covariance closed form vs quadrature of its defining integral,
//   - Chapman-Kolmogorov composition of the mass-conserving kernel.

#include <string>
#include <vector>

namespace kkf {

struct KernelCheck {
  std::string name;
  double value = 0.0;      // measured (quadrature) side
  double reference = 0.0;  // closed-form side
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<KernelCheck> run_kernel_checks();

bool all_pass(const std::vector<KernelCheck>& checks);

}  // namespace kkf
