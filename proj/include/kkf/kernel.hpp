#pragma once

// Fundamental-solution machinery for the degenerate Kolmogorov operator
//
//   L^eps u = (1 + eps) u_ww + w u_w - w u_th - u_t
//
// together with the Lie group structure that makes it translation invariant,
// and the linear-regime oracle (K = 0, m = D = 1, constant drift Omega) used
// to verify the finite-difference scheme.

#include <vector>

#include "kkf/model.hpp"

namespace kkf {

struct Vec2 {
  double w = 0.0;
  double th = 0.0;
};

struct Matrix2 {
  // [[a, b], [c, d]]
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  Matrix2 transpose() const { return {a, c, b, d}; }
  double det() const { return a * d - b * c; }
  Matrix2 operator*(const Matrix2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Vec2 operator*(const Vec2& v) const { return {a * v.w + b * v.th, c * v.w + d * v.th}; }
  Matrix2 operator+(const Matrix2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
};

// E(t) = exp(-t B) with B = [[1, 0], [-1, 0]]; B is idempotent, so
// E(t) = [[e^-t, 0], [1 - e^-t, 1]]. Flow matrix of the drift part.
Matrix2 exp_flow(double t);

// C_eps(t) = int_0^t E(s) A_eps E(s)^T ds with A_eps = diag(1 + eps, 0):
//   (1+eps)/2 * [[1 - e^-2t,            (1 - e^-t)^2           ],
//                [(1 - e^-t)^2,  2t - 3 + 4 e^-t - e^-2t]].
// Small-t entries switch to series form to dodge cancellation. t < 0 throws.
Matrix2 covariance(double t, double eps);

// Fundamental solution with pole at the origin,
//   Gamma^eps(x, t) = (4 pi sqrt(det C_eps(t)))^-1 exp(-<C_eps^-1 x, x>/4 - t),
// extended by zero to t <= 0. Below t = 1e-12 the Gaussian factor collapses
// numerically, so the evaluator returns 0 off the pole.
double gamma_eps(double w, double th, double t, double eps);

// Pole at (w0, th0, t0): Gamma^eps(x - E(t - t0) x0, t - t0).
double gamma_eps_at(double w, double th, double t, double w0, double th0, double t0,
                    double eps);

// theta-marginal of gamma_eps: the Gaussian N(e^-(t-tau) xi, V) times
// e^-(t-tau), with V = (1+eps)(1 - e^-2(t-tau)) = 2 (C_eps)_11. Solves the
// one-variable operator (1+eps) u_ww + w u_w - u_t. Requires t > tau.
double gamma_tilde(double w, double t, double xi, double tau, double eps);

// Group law on R^2 x R: (w,th,t) o (xi,eta,tau) =
//   (xi + w e^-tau, eta + th + w (1 - e^-tau), t + tau).
struct GroupPoint {
  double w = 0.0;
  double th = 0.0;
  double t = 0.0;
};

GroupPoint group_compose(const GroupPoint& z, const GroupPoint& zeta);
GroupPoint group_inverse(const GroupPoint& z);

// Anisotropic norm |w| + |th|^(1/3) + |t|^(1/2) and the induced left-invariant
// distance ||zeta^-1 o z||.
double aniso_norm(const GroupPoint& z);
double aniso_distance(const GroupPoint& z, const GroupPoint& zeta);

// ----- linear oracle ------------------------------------------------------
//
// In the K = 0, m = D = 1 regime with constant drift Omega the equation is an
// Ornstein-Uhlenbeck system: point masses evolve into Gaussians with mean
//   (Omega + (w0 - Omega) e^-t, th0 + Omega t + (w0 - Omega)(1 - e^-t))
// and covariance 2 C_0(t); general data evolve by superposition against the
// mass-conserving kernel G(x,t; y,tau) = e^(t-tau) Gamma^0(x,t; y,tau).

// Throws unless params sit in the oracle regime.
void require_oracle_regime(const ModelParams& p);

struct GaussianState {
  Vec2 mean;    // (w, th), theta on the line (unwrapped)
  Matrix2 cov;  // symmetric positive semidefinite
};

// Closed-form push-forward of a Gaussian through time t under drift Omega.
GaussianState oracle_advance(const GaussianState& init, double t, double Omega);

// Density at (w, theta) with theta understood modulo 2pi: sums the Gaussian
// over enough 2pi images of theta to cover eight standard deviations.
double oracle_eval_wrapped(const GaussianState& s, double w, double theta);

// Quadrature superposition over one grid slice: advances tabulated slice data
// (layout i * n_theta + j, normalized per cell_measure) to time t. Cost is
// quadratic in the slice size; intended for verification-sized grids.
std::vector<double> oracle_advance_slice(const std::vector<double>& slice0,
                                         const GridSpec& grid, double t, double Omega);

}  // namespace kkf
