#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kkf/kernel.hpp"
#include "kkf/kernel_checks.hpp"
#include "kkf/field.hpp"
#include "kkf/model.hpp"

using namespace kkf;

namespace {
constexpr double kPi = std::numbers::pi;

bool matrix_close(const Matrix2& a, const Matrix2& b, double tol) {
  return std::abs(a.a - b.a) <= tol && std::abs(a.b - b.b) <= tol &&
         std::abs(a.c - b.c) <= tol && std::abs(a.d - b.d) <= tol;
}
}  // namespace

TEST_CASE("flow matrix at log 2") {
  const Matrix2 e = exp_flow(std::log(2.0));
  CHECK(e.a == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.b == 0.0);
  CHECK(e.c == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.d == 1.0);
}

TEST_CASE("flow matrices compose as a semigroup") {
  const double s = 0.37, t = 1.21;
  CHECK(matrix_close(exp_flow(s + t), exp_flow(t) * exp_flow(s), 1e-15));
}

TEST_CASE("covariance closed form matches the frozen value") {
  const Matrix2 c = covariance(0.5, 0.0);
  CHECK(c.a == doctest::Approx(0.31606027941427883).epsilon(1e-15));
  CHECK(c.b == c.c);
}

TEST_CASE("covariance obeys the propagation identity") {
  // C(s+t) = C(t) + E(t) C(s) E(t)^T
  for (double eps : {0.0, 0.1}) {
    const double s = 0.4, t = 0.9;
    const Matrix2 lhs = covariance(s + t, eps);
    const Matrix2 e = exp_flow(t);
    const Matrix2 rhs = covariance(t, eps) + e * covariance(s, eps) * e.transpose();
    CHECK(matrix_close(lhs, rhs, 1e-14));
  }
}

TEST_CASE("covariance determinant stays positive across scales") {
  for (double lg = -8.0; lg <= 2.0; lg += 0.25) {
    const double t = std::pow(10.0, lg);
    CHECK(covariance(t, 0.0).det() > 0.0);
    CHECK(covariance(t, 0.1).det() > 0.0);
  }
  CHECK(covariance(1.0, 0.0).det() == doctest::Approx(0.032755957487965615).epsilon(1e-13));
}

TEST_CASE("small-time covariance expansion is smooth") {
  // straddle the branch switch and subtract the first-order change; any
  // residual beyond second order would expose a series/expm1 mismatch
  const double t = 0.02, h = t * 1e-6;
  const Matrix2 below = covariance(t - h, 0.0);
  const Matrix2 above = covariance(t + h, 0.0);
  const double slope = std::expm1(-t) * std::expm1(-t);  // d/dt of the (2,2) factor, halved
  CHECK(std::abs((above.d - below.d) - 2.0 * h * slope) < 1e-15);
}

TEST_CASE("density kernel frozen point value and degenerate cutoff") {
  CHECK(gamma_eps(0.0, 0.0, 1.0, 0.0) ==
        doctest::Approx(0.1617523148756739).epsilon(1e-13));
  CHECK(gamma_eps(0.3, 0.1, 0.0, 0.0) == 0.0);
  CHECK(gamma_eps(0.3, 0.1, -1.0, 0.1) == 0.0);
}

TEST_CASE("velocity-marginal kernel peak and ordering guard") {
  // peak sits at w = e^-(t-tau) xi where the Gaussian factor is 1
  const double v = gamma_tilde(0.5 * std::exp(-0.5), 0.5, 0.5, 0.0, 0.1);
  CHECK(v == doctest::Approx(0.2901793640658015).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_tilde(0.5, 1.0, 0.3, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("group operation: worked example, inverse, associativity") {
  const GroupPoint z{0.5, 0.5, std::log(2.0)};
  const GroupPoint w{1.0, 0.0, std::log(2.0)};
  const GroupPoint zw = group_compose(z, w);
  CHECK(zw.w == doctest::Approx(1.0 + 0.5 * 0.5).epsilon(1e-15));
  CHECK(zw.th == doctest::Approx(0.0 + 0.5 + 0.5 * 0.5).epsilon(1e-15));
  CHECK(zw.t == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));

  const GroupPoint zi = group_inverse(z);
  const GroupPoint id = group_compose(z, zi);
  CHECK(std::abs(id.w) < 1e-15);
  CHECK(std::abs(id.th) < 1e-15);
  CHECK(std::abs(id.t) < 1e-15);

  const GroupPoint a{0.3, -1.2, 0.7}, b{-0.8, 0.4, -0.2}, c{1.1, 2.0, 0.5};
  const GroupPoint left = group_compose(group_compose(a, b), c);
  const GroupPoint right = group_compose(a, group_compose(b, c));
  CHECK(std::abs(left.w - right.w) < 1e-12);
  CHECK(std::abs(left.th - right.th) < 1e-12);
  CHECK(std::abs(left.t - right.t) < 1e-12);
}

TEST_CASE("homogeneous norm") {
  CHECK(aniso_norm(GroupPoint{1.0, 1.0, 1.0}) == doctest::Approx(3.0));
  CHECK(aniso_norm(GroupPoint{0.0, -8.0, 0.0}) == doctest::Approx(2.0));
  const GroupPoint z{0.5, 1.5, 0.25};
  CHECK(aniso_distance(z, z) == doctest::Approx(0.0));
}

TEST_CASE("gaussian oracle relaxes the mean velocity to the natural frequency") {
  GaussianState init{};
  init.mean = Vec2{0.0, 1.0};
  init.cov = Matrix2{0.09, 0.0, 0.0, 0.04};
  const double Omega = 2.0;
  const GaussianState late = oracle_advance(init, 8.0, Omega);
  CHECK(late.mean.w == doctest::Approx(2.0).epsilon(1e-3));
  const GaussianState mid = oracle_advance(init, 1.0, Omega);
  CHECK(mid.mean.w == doctest::Approx(Omega + (0.0 - Omega) * std::exp(-1.0)).epsilon(1e-14));
  CHECK(mid.mean.th ==
        doctest::Approx(1.0 + Omega * 1.0 + (0.0 - Omega) * (1.0 - std::exp(-1.0)))
            .epsilon(1e-14));
  CHECK(mid.cov.det() > init.cov.det());
}

TEST_CASE("wrapped oracle density integrates to one on a grid") {
  ModelParams p{.m = 1.0, .D = 1.0, .K = 0.0, .Omega1 = 0.0};
  const GridSpec g = build_grid(p, 0.1, 0.004, 10.0, 1.0);
  GaussianState st{};
  st.mean = Vec2{0.3, kPi};
  st.cov = Matrix2{0.25, 0.0, 0.0, 0.25};
  const GaussianState adv = oracle_advance(st, 1.0, 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < g.n_omega; ++i)
    for (std::size_t j = 0; j < g.n_theta; ++j)
      mass += oracle_eval_wrapped(adv, g.omega_at(i), g.theta_at(j));
  mass *= g.cell_measure();
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("kernel push-forward of a grid slice matches the moment route") {
  ModelParams p{.m = 1.0, .D = 1.0, .K = 0.0, .Omega1 = 0.0};
  const GridSpec g = build_grid(p, 0.25, 0.1, 3.0, 0.4, 0.0, /*allow_unstable=*/true);
  GaussianState st{};
  st.mean = Vec2{0.2, kPi};
  st.cov = Matrix2{0.16, 0.0, 0.0, 0.25};

  std::vector<double> slice0(g.cells_per_slice());
  for (std::size_t i = 0; i < g.n_omega; ++i)
    for (std::size_t j = 0; j < g.n_theta; ++j)
      slice0[i * g.n_theta + j] = oracle_eval_wrapped(st, g.omega_at(i), g.theta_at(j));

  const double t = 0.4;
  const std::vector<double> pushed = oracle_advance_slice(slice0, g, t, 0.0);
  const GaussianState adv = oracle_advance(st, t, 0.0);

  double sup = 0.0;
  for (std::size_t i = 0; i < g.n_omega; ++i)
    for (std::size_t j = 0; j < g.n_theta; ++j) {
      const double direct = oracle_eval_wrapped(adv, g.omega_at(i), g.theta_at(j));
      sup = std::max(sup, std::abs(direct - pushed[i * g.n_theta + j]));
    }
  CHECK(sup < 2e-2);
}

TEST_CASE("oracle regime guard") {
  ModelParams off{.m = 2.0, .D = 1.0, .K = 0.0, .Omega1 = 0.0};
  CHECK_THROWS_AS(require_oracle_regime(off), std::invalid_argument);
  ModelParams coupled{.m = 1.0, .D = 1.0, .K = 1.0, .Omega1 = 0.0};
  CHECK_THROWS_AS(require_oracle_regime(coupled), std::invalid_argument);
  ModelParams ok{.m = 1.0, .D = 1.0, .K = 0.0, .Omega1 = 0.3};
  CHECK_NOTHROW(require_oracle_regime(ok));
}

TEST_CASE("kernel identity suite holds") {
  const auto checks = run_kernel_checks();
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.value, " vs ", c.reference, " err ", c.error);
    CHECK(c.pass);
  }
  CHECK(all_pass(checks));
}
