#include "kkf/kernel_checks.hpp"

#include <cmath>
#include <functional>

#include "kkf/kernel.hpp"

namespace kkf {

namespace {

struct Box {
  double lo1, hi1, lo2, hi2;
};

// Tensor midpoint rule. On boxes that cover eight standard deviations of a
// Gaussian the composite midpoint sum is accurate far beyond the tolerances
// used here (all boundary corrections vanish with the integrand).
double midpoint2(const std::function<double(double, double)>& f, const Box& b, int n) {
  const double h1 = (b.hi1 - b.lo1) / n;
  const double h2 = (b.hi2 - b.lo2) / n;
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    const double x = b.lo1 + (a + 0.5) * h1;
    double inner = 0.0;
    for (int c = 0; c < n; ++c) inner += f(x, b.lo2 + (c + 0.5) * h2);
    sum += inner;
  }
  return sum * h1 * h2;
}

double midpoint1(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int a = 0; a < n; ++a) sum += f(lo + (a + 0.5) * h);
  return sum * h;
}

double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
  // n even panels
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int a = 1; a < n; ++a) sum += f(lo + a * h) * (a % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

KernelCheck make(const std::string& name, double value, double reference, double tol) {
  KernelCheck c;
  c.name = name;
  c.value = value;
  c.reference = reference;
  c.error = std::abs(value - reference);
  c.tolerance = tol;
  c.pass = c.error <= tol;
  return c;
}

// Box in the backward variables (xi, eta) covering the kernel's mass: the
// Gaussian in x0 has mean E(dt)^-1 x and covariance E^-1 (2C) E^-T.
Box backward_box(double w, double th, double dt, double eps) {
  const Matrix2 Einv = exp_flow(-dt);
  const Matrix2 C = covariance(dt, eps);
  const Matrix2 S2{2.0 * C.a, 2.0 * C.b, 2.0 * C.c, 2.0 * C.d};
  const Matrix2 V = Einv * S2 * Einv.transpose();
  const Vec2 center = Einv * Vec2{w, th};
  const double s1 = 8.0 * std::sqrt(V.a), s2 = 8.0 * std::sqrt(V.d);
  return {center.w - s1, center.w + s1, center.th - s2, center.th + s2};
}

}  // namespace

std::vector<KernelCheck> run_kernel_checks() {
  std::vector<KernelCheck> out;

  // Backward normalization at two spots.
  {
    const double t = 0.7, eps = 0.1, w = 0.3, th = -0.2;
    const double v = midpoint2(
        [&](double xi, double eta) { return gamma_eps_at(w, th, t, xi, eta, 0.0, eps); },
        backward_box(w, th, t, eps), 400);
    out.push_back(make("backward normalization (t=0.7, eps=0.1)", v, 1.0, 1e-6));
  }
  {
    const double t = 1.5, eps = 0.0, w = -0.8, th = 1.1;
    const double v = midpoint2(
        [&](double xi, double eta) { return gamma_eps_at(w, th, t, xi, eta, 0.0, eps); },
        backward_box(w, th, t, eps), 400);
    out.push_back(make("backward normalization (t=1.5, eps=0)", v, 1.0, 1e-6));
  }

  // Forward mass of the mass-conserving kernel e^(t-tau) Gamma^eps.
  {
    const double t = 0.9, eps = 0.05, xi = 0.4, eta = 2.0;
    const Matrix2 C = covariance(t, eps);
    const Vec2 mean = exp_flow(t) * Vec2{xi, eta};
    const double s1 = 8.0 * std::sqrt(2.0 * C.a), s2 = 8.0 * std::sqrt(2.0 * C.d);
    const Box box{mean.w - s1, mean.w + s1, mean.th - s2, mean.th + s2};
    const double v = midpoint2(
        [&](double w, double th) {
          return std::exp(t) * gamma_eps_at(w, th, t, xi, eta, 0.0, eps);
        },
        box, 400);
    out.push_back(make("forward mass conservation (t=0.9, eps=0.05)", v, 1.0, 1e-6));
  }

  // theta marginal: integral over eta against the 1-d kernel, worst spot of a
  // small (w, xi) panel.
  {
    const double t = 0.7, tau = 0.0, eps = 0.1;
    double worst = 0.0;
    double value = 0.0, reference = 0.0;
    for (double w : {-0.5, 0.2, 1.0}) {
      for (double xi : {-1.0, 0.0, 0.7}) {
        const Matrix2 C = covariance(t - tau, eps);
        // In u2 = th - eta - xi (1 - e^-dt) coordinates the conditional mean
        // given the omega offset u1 is (C12/C11) u1.
        const double u1 = w - std::exp(-(t - tau)) * xi;
        const double sh = xi * (1.0 - std::exp(-(t - tau)));
        const double center = C.b / C.a * u1;
        const double sd = std::sqrt(2.0 * (C.d - C.b * C.b / C.a));
        const double v = midpoint1(
            [&](double u2) { return gamma_eps_at(w, u2 + sh, t, xi, 0.0, tau, eps); },
            center - 10.0 * sd, center + 10.0 * sd, 2000);
        const double ref = gamma_tilde(w, t, xi, tau, eps);
        if (std::abs(v - ref) > worst) {
          worst = std::abs(v - ref);
          value = v;
          reference = ref;
        }
      }
    }
    out.push_back(make("theta marginal (t=0.7, eps=0.1)", value, reference, 1e-6));
  }

  // Covariance closed form vs Simpson quadrature of the defining integral.
  {
    double worst = 0.0, value = 0.0, reference = 0.0;
    for (double eps : {0.0, 0.1}) {
      for (double t : {0.25, 1.0, 3.0}) {
        const Matrix2 closed = covariance(t, eps);
        const double quad[3] = {
            simpson([&](double s) { return (1.0 + eps) * std::exp(-2.0 * s); }, 0, t, 2048),
            simpson(
                [&](double s) {
                  return (1.0 + eps) * std::exp(-s) * (1.0 - std::exp(-s));
                },
                0, t, 2048),
            simpson(
                [&](double s) {
                  const double u = 1.0 - std::exp(-s);
                  return (1.0 + eps) * u * u;
                },
                0, t, 2048)};
        const double cf[3] = {closed.a, closed.b, closed.d};
        for (int e = 0; e < 3; ++e) {
          if (std::abs(quad[e] - cf[e]) > worst) {
            worst = std::abs(quad[e] - cf[e]);
            value = quad[e];
            reference = cf[e];
          }
        }
      }
    }
    out.push_back(make("covariance closed form vs quadrature", value, reference, 1e-8));
  }

  // Chapman-Kolmogorov for G(x,t;y,tau) = e^(t-tau) Gamma^eps.
  {
    double worst = 0.0, value = 0.0, reference = 0.0;
    const double t = 1.2, s = 0.5;
    for (double eps : {0.0, 0.1}) {
      const double yw = 0.6, yth = -0.4;
      for (double xw : {-0.3, 0.8}) {
        for (double xth : {0.5, 1.5}) {
          auto G = [eps](double aw, double ath, double at, double bw, double bth,
                         double bt) {
            return std::exp(at - bt) * gamma_eps_at(aw, ath, at, bw, bth, bt, eps);
          };
          // Box covering both Gaussian factors seen as functions of z.
          const Box b1 = backward_box(xw, xth, t - s, eps);
          const Matrix2 Cs = covariance(s, eps);
          const Vec2 m2 = exp_flow(s) * Vec2{yw, yth};
          const double s1 = 8.0 * std::sqrt(2.0 * Cs.a), s2 = 8.0 * std::sqrt(2.0 * Cs.d);
          const Box box{std::min(b1.lo1, m2.w - s1), std::max(b1.hi1, m2.w + s1),
                        std::min(b1.lo2, m2.th - s2), std::max(b1.hi2, m2.th + s2)};
          const double v = midpoint2(
              [&](double zw, double zth) {
                return G(xw, xth, t, zw, zth, s) * G(zw, zth, s, yw, yth, 0.0);
              },
              box, 700);
          const double ref = G(xw, xth, t, yw, yth, 0.0);
          if (std::abs(v - ref) > worst) {
            worst = std::abs(v - ref);
            value = v;
            reference = ref;
          }
        }
      }
    }
    out.push_back(make("Chapman-Kolmogorov composition (t=1.2 via s=0.5)", value,
                       reference, 1e-4));
  }

  return out;
}

bool all_pass(const std::vector<KernelCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace kkf
