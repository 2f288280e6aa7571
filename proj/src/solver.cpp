#include "kkf/solver.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace kkf {

namespace {

double paper_default(double w, double th) {
  return std::exp(-w * w) * (std::sin(th) + 1.0) / (1.0 + w * w);
}

double paper_half_sine(double w, double th) {
  return std::exp(-w * w) * (std::sin(0.5 * th) + 1.0) / (1.0 + w * w);
}

double paper_literal(double w, double th) {
  return std::exp(-w * w) * (std::sin(th) + 1.0) / (w + 1.0);
}

}  // namespace

std::function<double(double, double)> initial_evaluator(const InitialSpec& spec,
                                                        const GridSpec& grid) {
  switch (spec.preset) {
    case InitialPreset::Default:
      return paper_default;
    case InitialPreset::HalfSine:
      return paper_half_sine;
    case InitialPreset::Literal:
      // The (w + 1) denominator blows up at w = -1; only narrow grids keep
      // clear of the pole.
      if (grid.G_omega >= 1.0)
        throw std::invalid_argument(
            "literal initial datum is singular at omega = -1; needs G_omega < 1");
      return paper_literal;
    case InitialPreset::Gaussian: {
      if (!(spec.sigma_omega > 0.0) || !(spec.sigma_theta > 0.0))
        throw std::invalid_argument("gaussian initial datum needs positive sigmas");
      const double w0 = spec.omega0, th0 = spec.theta0;
      const double aw = 0.5 / (spec.sigma_omega * spec.sigma_omega);
      const double ath = 0.5 / (spec.sigma_theta * spec.sigma_theta);
      return [w0, th0, aw, ath](double w, double th) {
        const double dw = w - w0;
        const double dth = th - th0;
        return std::exp(-aw * dw * dw - ath * dth * dth);
      };
    }
    case InitialPreset::Uniform:
      return [](double, double) { return 1.0; };
  }
  throw std::invalid_argument("unknown initial preset");
}

DensityField init_density(const std::function<double(double, double)>& rho0,
                          const GridSpec& grid) {
  DensityField f(grid);
  bool any_positive = false;
  for (std::size_t i = 1; i + 1 < grid.n_omega; ++i) {
    const double w = grid.omega_at(i);
    for (std::size_t j = 0; j < grid.n_theta; ++j) {
      double v = rho0(w, grid.theta_at(j));
      if (std::isnan(v)) throw std::invalid_argument("initial evaluator produced NaN");
      if (v < 0.0) v = 0.0;
      if (v > 0.0) any_positive = true;
      for (std::size_t k = 0; k < grid.n_Omega; ++k) f.at(i, j, k) = v;
    }
  }
  if (!any_positive) throw std::invalid_argument("initial evaluator produced an all-zero slice");
  renormalize(f);
  return f;
}

DensityField init_density(const InitialSpec& spec, const GridSpec& grid) {
  return init_density(initial_evaluator(spec, grid), grid);
}

LaCoefficients la_coefficients(const ModelParams& p, const GridSpec& g, double omega,
                               double phi) {
  const double diff = p.D * g.d_t / (p.m * p.m * g.d_omega * g.d_omega);
  const double adv = g.d_t / (2.0 * g.d_omega * p.m) * (omega + phi);
  return {diff - adv, 1.0 - 2.0 * diff + g.d_t / p.m, diff + adv};
}

namespace {

// Update of the interior rows [row_begin, row_end).
void update_rows(const DensityField& in, const std::vector<double>& phi,
                 const ModelParams& p, DensityField& out, std::size_t row_begin,
                 std::size_t row_end) {
  const GridSpec& g = in.grid;
  const std::size_t nth = g.n_theta, nO = g.n_Omega;
  const double diff = p.D * g.d_t / (p.m * p.m * g.d_omega * g.d_omega);
  const double a0 = 1.0 - 2.0 * diff + g.d_t / p.m;
  const double advc = g.d_t / (2.0 * g.d_omega * p.m);
  const long long n = static_cast<long long>(nth);

  for (std::size_t i = row_begin; i < row_end; ++i) {
    const long long si = static_cast<long long>(i) - static_cast<long long>(g.center_row());
    const double w = g.omega_at(i);
    const std::size_t rot = static_cast<std::size_t>(((si % n) + n) % n);
    const double* row0 = &in.values[(i * nth) * nO];
    const double* rowm = &in.values[((i - 1) * nth) * nO];
    const double* rowp = &in.values[((i + 1) * nth) * nO];
    double* out_base = &out.values[(i * nth) * nO];
    for (std::size_t jj = 0; jj < nth; ++jj) {
      std::size_t j = jj + rot;
      if (j >= nth) j -= nth;
      double* dst = out_base + j * nO;
      const double* phij = &phi[jj * nO];
      for (std::size_t k = 0; k < nO; ++k) {
        const double adv = advc * (w + phij[k]);
        dst[k] = a0 * row0[jj * nO + k] + (diff - adv) * rowm[jj * nO + k] +
                 (diff + adv) * rowp[jj * nO + k];
      }
    }
  }
}

}  // namespace

unsigned thread_count() {
  if (const char* env = std::getenv("KKF_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

double la_step(const DensityField& in, const std::vector<double>& phi,
               const ModelParams& p, DensityField& out) {
  const GridSpec& g = in.grid;
  if (phi.size() != g.n_theta * g.n_Omega)
    throw std::invalid_argument("phi table does not match the grid");
  if (g.n_omega < 3) throw std::invalid_argument("grid has no interior rows");
  if (&out == &in) throw std::invalid_argument("la_step cannot update in place");
  if (out.values.size() != in.values.size()) out = DensityField(g);
  out.grid = g;

  const std::size_t first = 1, last = g.n_omega - 1;  // interior rows [1, n-2]
  const unsigned workers =
      std::min<unsigned>(thread_count(),
                         static_cast<unsigned>(std::max<std::size_t>(1, (last - first) / 8)));
  if (workers <= 1 || g.cells_per_slice() * g.n_Omega < 200000) {
    update_rows(in, phi, p, out, first, last);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (last - first + workers - 1) / workers;
    for (unsigned t = 1; t < workers; ++t) {
      const std::size_t b = first + t * chunk;
      if (b >= last) break;
      pool.emplace_back(update_rows, std::cref(in), std::cref(phi), std::cref(p),
                        std::ref(out), b, std::min(last, b + chunk));
    }
    update_rows(in, phi, p, out, first, std::min(last, first + chunk));
    for (auto& th : pool) th.join();
  }

  // Boundary rows stay zero; collect what would have landed there. Row n-1
  // receives A_minus(top) from row n-2, row 0 receives A_plus(bottom) from
  // row 1; everything else addressed to them involves rows outside the grid.
  const std::size_t nth = g.n_theta, nO = g.n_Omega;
  const double diff = p.D * g.d_t / (p.m * p.m * g.d_omega * g.d_omega);
  const double advc = g.d_t / (2.0 * g.d_omega * p.m);
  double leak = 0.0, carry = 0.0;
  const double w_top = g.omega_at(g.n_omega - 1);
  const double w_bot = g.omega_at(0);
  const double* row_top = &in.values[((g.n_omega - 2) * nth) * nO];
  const double* row_bot = &in.values[(1 * nth) * nO];
  for (std::size_t jj = 0; jj < nth; ++jj) {
    for (std::size_t k = 0; k < nO; ++k) {
      const double phiv = phi[jj * nO + k];
      const double lost = (diff - advc * (w_top + phiv)) * row_top[jj * nO + k] +
                          (diff + advc * (w_bot + phiv)) * row_bot[jj * nO + k];
      const double y = lost - carry;
      const double t = leak + y;
      carry = (t - leak) - y;
      leak = t;
    }
  }
  for (std::size_t j = 0; j < nth; ++j)
    for (std::size_t k = 0; k < nO; ++k) {
      out.at(0, j, k) = 0.0;
      out.at(g.n_omega - 1, j, k) = 0.0;
    }
  return g.cell_measure() * leak / static_cast<double>(nO);
}

SimulationResult run_simulation(const ModelParams& p, const FrequencyDistribution& g,
                                DensityField initial, const StepCallback& on_step) {
  validate_params(p);
  const GridSpec grid = initial.grid;

  SimulationResult result;
  result.series.reserve(grid.n_t + 1);

  DensityField cur = std::move(initial);
  DensityField next(grid);

  auto record = [&](std::size_t step, double mass_min, double mass_max, double min_rho,
                    double leak) {
    const OrderParameters ops = order_parameters(cur, g);
    DiagnosticsRecord rec;
    rec.step = step;
    rec.t = static_cast<double>(step) * grid.d_t;
    rec.abs_r = ops.r.abs;
    rec.phase_r = ops.r.phase;
    rec.abs_s = ops.s.abs;
    rec.mass_min = mass_min;
    rec.mass_max = mass_max;
    rec.min_rho = min_rho;
    rec.tail_mass = tail_mass(cur);
    rec.boundary_leak = leak;
    result.series.push_back(rec);
    if (on_step) on_step(step, rec.t, cur);
  };

  record(0, 1.0, 1.0, min_value(cur), 0.0);

  for (std::size_t n = 1; n <= grid.n_t; ++n) {
    const std::vector<double> phi = phi_discrete(cur, g, p);
    const double leak = la_step(cur, phi, p, next);
    std::swap(cur, next);
    if (has_non_finite(cur))
      throw SimulationError("field became non-finite at step " + std::to_string(n), n - 1);
    const std::vector<double> masses = slice_masses(cur);
    double mn = masses[0], mx = masses[0];
    for (double m : masses) {
      mn = std::min(mn, m);
      mx = std::max(mx, m);
    }
    const double min_rho = min_value(cur);
    renormalize(cur);
    record(n, mn, mx, min_rho, leak);
  }

  result.final_field = std::move(cur);
  return result;
}

}  // namespace kkf
