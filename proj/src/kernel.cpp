#include "kkf/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kkf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 2t - 3 + 4 e^-t - e^-2t. The four O(t) terms cancel down to (2/3) t^3, so
// for small t the difference form loses all precision; the Taylor series
// sum_{n>=3} (4 (-1)^n - (-2)^n)/n! t^n converges fast there.
double theta_variance_factor(double t) {
  if (t >= 0.02) return 2.0 * t + 4.0 * std::expm1(-t) - std::expm1(-2.0 * t);
  double sum = 0.0;
  double p1 = -t * t * t;        // (-t)^n starting at n = 3
  double p2 = -8.0 * t * t * t;  // (-2t)^n starting at n = 3
  double fact = 6.0;             // n!
  for (int n = 3; n <= 14; ++n) {
    sum += (4.0 * p1 - p2) / fact;
    p1 *= -t;
    p2 *= -2.0 * t;
    fact *= n + 1;
  }
  return sum;
}

}  // namespace

Matrix2 exp_flow(double t) {
  const double e = std::exp(-t);
  return {e, 0.0, 1.0 - e, 1.0};
}

Matrix2 covariance(double t, double eps) {
  if (t < 0.0) throw std::invalid_argument("covariance requires t >= 0");
  const double f = 0.5 * (1.0 + eps);
  const double c11 = -std::expm1(-2.0 * t);         // 1 - e^-2t
  const double em = std::expm1(-t);                 // e^-t - 1
  const double c12 = em * em;                       // (1 - e^-t)^2
  const double c22 = theta_variance_factor(t);
  return {f * c11, f * c12, f * c12, f * c22};
}

double gamma_eps(double w, double th, double t, double eps) {
  if (t <= 1e-12) return 0.0;
  const Matrix2 C = covariance(t, eps);
  const double det = C.det();
  // <C^-1 x, x> via the adjugate.
  const double quad = (C.d * w * w - 2.0 * C.b * w * th + C.a * th * th) / det;
  return std::exp(-0.25 * quad - t) / (4.0 * std::numbers::pi * std::sqrt(det));
}

double gamma_eps_at(double w, double th, double t, double w0, double th0, double t0,
                    double eps) {
  const double dt = t - t0;
  if (dt <= 1e-12) return 0.0;
  const Matrix2 E = exp_flow(dt);
  const Vec2 moved = E * Vec2{w0, th0};
  return gamma_eps(w - moved.w, th - moved.th, dt, eps);
}

double gamma_tilde(double w, double t, double xi, double tau, double eps) {
  if (!(t > tau)) throw std::invalid_argument("gamma_tilde requires t > tau");
  const double dt = t - tau;
  // variance of the OU velocity: 2 (C_eps)_11 = (1+eps)(1 - e^-2dt)
  const double var = (1.0 + eps) * -std::expm1(-2.0 * dt);
  const double dw = w - std::exp(-dt) * xi;
  return std::exp(-0.5 * dw * dw / var - dt) / std::sqrt(kTwoPi * var);
}

GroupPoint group_compose(const GroupPoint& z, const GroupPoint& zeta) {
  const double e = std::exp(-zeta.t);
  return {zeta.w + z.w * e, zeta.th + z.th + z.w * (1.0 - e), z.t + zeta.t};
}

GroupPoint group_inverse(const GroupPoint& z) {
  const double e = std::exp(z.t);
  return {-z.w * e, -z.th - z.w * (1.0 - e), -z.t};
}

double aniso_norm(const GroupPoint& z) {
  return std::abs(z.w) + std::cbrt(std::abs(z.th)) + std::sqrt(std::abs(z.t));
}

double aniso_distance(const GroupPoint& z, const GroupPoint& zeta) {
  return aniso_norm(group_compose(z, group_inverse(zeta)));
}

// ----- linear oracle ------------------------------------------------------

void require_oracle_regime(const ModelParams& p) {
  if (p.K != 0.0 || p.m != 1.0 || p.D != 1.0)
    throw std::invalid_argument("linear oracle is defined only for K = 0, m = D = 1");
}

GaussianState oracle_advance(const GaussianState& init, double t, double Omega) {
  if (t < 0.0) throw std::invalid_argument("oracle_advance requires t >= 0");
  // Shift to the drift-free frame w' = w - Omega, th' = th - Omega t, where
  // the flow is x' -> E(t) x' plus noise of covariance 2 C_0(t).
  const Matrix2 E = exp_flow(t);
  const Vec2 shifted{init.mean.w - Omega, init.mean.th};
  const Vec2 moved = E * shifted;
  GaussianState out;
  out.mean = {moved.w + Omega, moved.th + Omega * t};
  const Matrix2 C2 = covariance(t, 0.0);
  out.cov = E * init.cov * E.transpose() + Matrix2{2.0 * C2.a, 2.0 * C2.b, 2.0 * C2.c, 2.0 * C2.d};
  return out;
}

double oracle_eval_wrapped(const GaussianState& s, double w, double theta) {
  const double det = s.cov.det();
  if (!(det > 0.0)) throw std::invalid_argument("degenerate covariance in oracle evaluation");
  const double sigma_th = std::sqrt(s.cov.d);
  const int images = static_cast<int>(std::ceil(8.0 * sigma_th / kTwoPi)) + 1;
  const double norm = 1.0 / (kTwoPi * std::sqrt(det));
  const double dw = w - s.mean.w;
  double sum = 0.0;
  for (int n = -images; n <= images; ++n) {
    const double dth = theta + kTwoPi * n - s.mean.th;
    const double quad = (s.cov.d * dw * dw - 2.0 * s.cov.b * dw * dth + s.cov.a * dth * dth) / det;
    sum += std::exp(-0.5 * quad);
  }
  return norm * sum;
}

std::vector<double> oracle_advance_slice(const std::vector<double>& slice0,
                                         const GridSpec& grid, double t, double Omega) {
  if (slice0.size() != grid.cells_per_slice())
    throw std::invalid_argument("slice size does not match the grid");
  if (!(t > 0.0)) throw std::invalid_argument("oracle_advance_slice requires t > 0");

  const Matrix2 C = covariance(t, 0.0);
  const Matrix2 S{2.0 * C.a, 2.0 * C.b, 2.0 * C.c, 2.0 * C.d};
  const double det = S.det();
  const double norm = 1.0 / (kTwoPi * std::sqrt(det));
  const double emt = std::exp(-t);
  const int images = static_cast<int>(std::ceil(8.0 * std::sqrt(S.d) / kTwoPi)) + 1;
  const double measure = grid.cell_measure();

  const std::size_t nw = grid.n_omega, nth = grid.n_theta;
  std::vector<double> out(slice0.size(), 0.0);
  for (std::size_t i = 0; i < nw; ++i) {
    const double w = grid.omega_at(i) - Omega;
    for (std::size_t ii = 0; ii < nw; ++ii) {
      const double xi = grid.omega_at(ii) - Omega;
      const double u1 = w - emt * xi;          // drift-free omega offset
      const double th_shift = xi * (1.0 - emt);
      for (std::size_t j = 0; j < nth; ++j) {
        const double th = grid.theta_at(j) - Omega * t;
        double acc = 0.0;
        for (std::size_t jj = 0; jj < nth; ++jj) {
          const double rho = slice0[ii * nth + jj];
          if (rho == 0.0) continue;
          const double base = th - grid.theta_at(jj) - th_shift;
          double ker = 0.0;
          for (int n = -images; n <= images; ++n) {
            const double u2 = base + kTwoPi * n;
            const double quad = (S.d * u1 * u1 - 2.0 * S.b * u1 * u2 + S.a * u2 * u2) / det;
            ker += std::exp(-0.5 * quad);
          }
          acc += ker * rho;
        }
        out[i * nth + j] += norm * measure * acc;
      }
    }
  }
  return out;
}

}  // namespace kkf
