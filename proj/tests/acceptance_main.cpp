// End-to-end acceptance checks for the solver stack. Each check prints one
// [PASS]/[FAIL] line with the measured quantities; the process exits nonzero
// if anything fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kkf/config.hpp"
#include "kkf/kernel.hpp"
#include "kkf/kernel_checks.hpp"
#include "kkf/langevin.hpp"
#include "kkf/meanfield.hpp"
#include "kkf/solver.hpp"

using namespace kkf;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

DensityField random_interior_field(const GridSpec& g, unsigned seed) {
  DensityField f(g);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 1; i + 1 < g.n_omega; ++i)
    for (std::size_t j = 0; j < g.n_theta; ++j)
      for (std::size_t k = 0; k < g.n_Omega; ++k) f.at(i, j, k) = u(rng);
  renormalize(f);
  return f;
}

// --- 1: nonnegativity of the explicit update under the admissibility gate ---

Outcome check_positivity() {
  const int kFields = 50, kSteps = 200;
  double worst = 0.0;  // most negative min/max ratio seen
  int runs = 0;
  for (double K : {0.0, 2.0, 6.0}) {
    const ModelParams p{.m = 1.0, .D = 1.0, .K = K, .Omega1 = 0.0};
    const GridSpec g = build_grid(p, 0.2, 0.02, 4.0, 10.0);
    const FrequencyDistribution dist = FrequencyDistribution::point_mass(0.0);
    const int share = K == 6.0 ? kFields - 2 * (kFields / 3) : kFields / 3;
    for (int f = 0; f < share; ++f) {
      DensityField cur = random_interior_field(g, 1000 + 100 * static_cast<int>(K) + f);
      DensityField next;
      ++runs;
      for (int n = 0; n < kSteps; ++n) {
        const auto phi = phi_discrete(cur, dist, p);
        la_step(cur, phi, p, next);
        std::swap(cur, next);
        double mx = 0.0;
        for (double v : cur.values) mx = std::max(mx, v);
        const double mn = min_value(cur);
        if (mx > 0.0) worst = std::min(worst, mn / mx);
        if (mn < -1e-12 * mx) {
          std::ostringstream os;
          os << "K=" << K << " field " << f << " step " << n << ": min/max = " << mn / mx;
          return {false, os.str()};
        }
        renormalize(cur);
      }
    }
  }
  std::ostringstream os;
  os << runs << " fields x " << kSteps << " steps, K in {0,2,6}; worst min/max ratio "
     << worst;
  return {true, os.str()};
}

// --- 2: interior mass conservation before any boundary contact ---

Outcome check_mass_conservation() {
  const ModelParams p{.m = 1.0, .D = 1.0, .K = 2.0, .Omega1 = 0.0};
  const GridSpec g = build_grid(p, 0.2, 0.02, 4.0, 10.0);
  const FrequencyDistribution dist = FrequencyDistribution::point_mass(0.0);

  // Gaussian bump cut off at half the window so the outer rows start empty;
  // sigma_omega = 0.15 keeps the rows near the cut at the e^-50 level, so the
  // tail needs several steps of outward hops before it can reach 1e-10.
  const double half = g.G_omega / 2.0;
  DensityField cur = init_density(
      [half](double w, double th) {
        if (std::abs(w) > half) return 0.0;
        const double dth = th - kPi;
        return std::exp(-w * w / (2.0 * 0.0225) - dth * dth / (2.0 * 0.25));
      },
      g);
  if (tail_mass(cur) != 0.0) return {false, "initial tail mass is not exactly zero"};

  DensityField next;
  int window = 0;
  double worst_drift = 0.0;
  for (int n = 0; n < 200; ++n) {
    const auto phi = phi_discrete(cur, dist, p);
    la_step(cur, phi, p, next);
    std::swap(cur, next);
    const double drift = std::abs(slice_mass(cur, 0) - 1.0);
    renormalize(cur);
    if (tail_mass(cur) > 1e-10) break;
    ++window;
    worst_drift = std::max(worst_drift, drift);
    if (drift > 1e-12) {
      std::ostringstream os;
      os << "step " << n << ": relative mass drift " << drift;
      return {false, os.str()};
    }
  }
  std::ostringstream os;
  os << window << " steps before tail mass exceeded 1e-10; worst per-step drift "
     << worst_drift;
  return {window >= 3, os.str()};
}

// --- 3: convergence to the transported-Gaussian solution of the linear case ---

Outcome check_linear_convergence() {
  const ModelParams p{.m = 1.0, .D = 1.0, .K = 0.0, .Omega1 = 0.0};
  GaussianState init{};
  init.mean = Vec2{1.0, kPi};
  init.cov = Matrix2{0.25, 0.0, 0.0, 0.25};
  InitialSpec spec{};
  spec.preset = InitialPreset::Gaussian;
  spec.omega0 = 1.0;
  spec.theta0 = kPi;
  spec.sigma_omega = 0.5;
  spec.sigma_theta = 0.5;
  const FrequencyDistribution dist = FrequencyDistribution::point_mass(0.0);

  std::vector<double> errs, dts;
  for (const double d_omega : {0.2, 4.0 / 28.0, 0.1}) {
    const GridSpec g = build_grid(p, d_omega, 0.5 * d_omega * d_omega, 4.0, 1.0);
    const SimulationResult res = run_simulation(p, dist, init_density(spec, g));
    const double t_end = static_cast<double>(g.n_t) * g.d_t;
    const GaussianState ref = oracle_advance(init, t_end, 0.0);
    double l1 = 0.0;
    for (std::size_t i = 0; i < g.n_omega; ++i)
      for (std::size_t j = 0; j < g.n_theta; ++j)
        l1 += std::abs(res.final_field.at(i, j, 0) -
                       oracle_eval_wrapped(ref, g.omega_at(i), g.theta_at(j)));
    errs.push_back(l1 * g.cell_measure());
    dts.push_back(g.d_t);
  }

  const double order1 = std::log(errs[0] / errs[1]) / std::log(dts[0] / dts[1]);
  const double order2 = std::log(errs[1] / errs[2]) / std::log(dts[1] / dts[2]);
  std::ostringstream os;
  os << "L1 errors " << errs[0] << " / " << errs[1] << " / " << errs[2]
     << "; observed orders " << order1 << ", " << order2;
  return {order1 >= 0.8 && order2 >= 0.8, os.str()};
}

// --- 4: analytic kernel identities ---

Outcome check_kernel_identities() {
  const auto checks = run_kernel_checks();
  std::ostringstream os;
  bool ok = true;
  for (const auto& c : checks) {
    if (!c.pass) {
      ok = false;
      os << c.name << " err " << c.error << " > tol " << c.tolerance << "; ";
    }
  }
  if (ok) os << checks.size() << " identities within tolerance";
  return {ok, os.str()};
}

// --- 5: discrete mean-field term equals its order-parameter form ---

Outcome check_meanfield_identity() {
  const ModelParams p{.m = 1.0, .D = 1.0, .K = 2.0, .Omega1 = 0.2};
  const GridSpec g =
      build_grid(p, 0.2, 2.0 * kPi / (32.0 * 0.2), 1.6, 1.0, 0.2, /*allow_unstable=*/true);
  DistributionSpec dspec{};
  dspec.kind = DistributionKind::Table;
  dspec.table = {0.3, 0.5, 0.2};
  const FrequencyDistribution dist = build_frequency_distribution(dspec, p, g);

  double worst_id = 0.0, worst_bound = 0.0;
  for (unsigned seed = 0; seed < 100; ++seed) {
    const DensityField f = random_interior_field(g, 5000 + seed);
    const auto phi = phi_discrete(f, dist, p);
    const double cell = g.cell_measure();
    for (std::size_t j = 0; j < g.n_theta; ++j) {
      double coupling = 0.0;
      for (std::size_t k2 = 0; k2 < g.n_Omega; ++k2) {
        double s = 0.0;
        for (std::size_t j2 = 0; j2 < g.n_theta; ++j2)
          for (std::size_t i = 0; i < g.n_omega; ++i)
            s += std::sin(g.theta_at(j2) - g.theta_at(j)) * f.at(i, j2, k2);
        coupling += dist.weight(k2) * s * cell;
      }
      coupling *= p.K;
      for (std::size_t k = 0; k < g.n_Omega; ++k) {
        const double v = phi[j * g.n_Omega + k];
        worst_id = std::max(worst_id, std::abs(v - (-dist.node(k) - coupling)));
        worst_bound = std::max(worst_bound, std::abs(v) - (p.Omega1 + p.K));
      }
    }
  }
  std::ostringstream os;
  os << "100 fields; worst identity gap " << worst_id << ", worst bound excess "
     << worst_bound;
  return {worst_id <= 1e-12 && worst_bound <= 1e-12, os.str()};
}

// --- 6: ordinal trends across the preset sweeps ---

std::vector<DiagnosticsRecord> run_member(const RunConfig& cfg) {
  Problem pb = assemble(cfg);
  return run_simulation(pb.params, pb.distribution, std::move(pb.initial)).series;
}

double late_mean(const std::vector<DiagnosticsRecord>& series,
                 double (*pick)(const DiagnosticsRecord&)) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& rec : series)
    if (rec.t >= 8.0 - 1e-9) {
      sum += pick(rec);
      ++n;
    }
  return sum / static_cast<double>(n);
}

double pick_r(const DiagnosticsRecord& r) { return r.abs_r; }
double pick_s(const DiagnosticsRecord& r) { return r.abs_s; }

Outcome check_figure_trends() {
  std::ostringstream os;

  std::vector<double> r_by_K;
  for (const RunConfig& cfg : run_preset("fig1")) r_by_K.push_back(late_mean(run_member(cfg), pick_r));
  os << "late |r| over K in {1,2,4,6}: ";
  for (double v : r_by_K) os << v << " ";
  for (std::size_t i = 1; i < r_by_K.size(); ++i)
    if (!(r_by_K[i] > r_by_K[i - 1])) return {false, os.str() + "(not increasing)"};

  std::vector<double> s_by_m;
  for (const RunConfig& cfg : run_preset("fig3")) s_by_m.push_back(late_mean(run_member(cfg), pick_s));
  os << "| late |s| over m in {0.5,1,2}: ";
  for (double v : s_by_m) os << v << " ";
  for (std::size_t i = 1; i < s_by_m.size(); ++i)
    if (!(s_by_m[i] > s_by_m[i - 1])) return {false, os.str() + "(not increasing)"};

  std::vector<double> r_by_D, s_by_D;
  for (const RunConfig& cfg : run_preset("fig5")) {
    const auto series = run_member(cfg);
    r_by_D.push_back(late_mean(series, pick_r));
    s_by_D.push_back(late_mean(series, pick_s));
  }
  os << "| late |r|, |s| over D in {2,1,0.5}: ";
  for (std::size_t i = 0; i < r_by_D.size(); ++i) os << r_by_D[i] << "/" << s_by_D[i] << " ";
  for (std::size_t i = 1; i < r_by_D.size(); ++i)
    if (!(r_by_D[i] > r_by_D[i - 1]) || !(s_by_D[i] > s_by_D[i - 1]))
      return {false, os.str() + "(not increasing as D decreases)"};

  const auto pair = run_preset("fig78");
  const auto sa = run_member(pair[0]);
  const auto sb = run_member(pair[1]);
  if (sa.size() != sb.size()) return {false, "paired runs returned different lengths"};
  double sup = 0.0;
  for (std::size_t n = 0; n < sa.size(); ++n)
    sup = std::max(sup, std::abs(sa[n].abs_r - sb[n].abs_r));
  os << "| sup distance between paired initial data |r| curves: " << sup;
  return {sup > 0.05, os.str()};
}

// --- 7: kinetic solution vs finite ensembles ---

Outcome check_langevin_cross_validation() {
  const ModelParams p{.m = 1.0, .D = 1.0, .K = 6.0, .Omega1 = 0.0};
  const GridSpec g = build_grid(p, 0.2, 0.019, 4.0, 10.0);
  const FrequencyDistribution dist = FrequencyDistribution::point_mass(0.0);
  const SimulationResult pde = run_simulation(p, dist, init_density(InitialSpec{}, g));

  const std::size_t N = 5000, substeps = 4;
  const double dt = g.d_t / static_cast<double>(substeps);
  const auto rho0 = initial_evaluator(InitialSpec{}, g);

  std::vector<double> mean_r(g.n_t + 1, 0.0);
  const int kSeeds = 8;
  for (int s = 0; s < kSeeds; ++s) {
    const std::uint64_t seed = 101 + static_cast<std::uint64_t>(s);
    OscillatorEnsemble ens = sample_ensemble(rho0, dist, g.G_omega, N, seed);
    std::uint64_t counter = 0;
    mean_r[0] += ensemble_phase_order(ens).abs;
    for (std::size_t n = 1; n <= g.n_t; ++n) {
      for (std::size_t q = 0; q < substeps; ++q) langevin_step(ens, p, dt, seed, counter++);
      mean_r[n] += ensemble_phase_order(ens).abs;
    }
  }
  double rms = 0.0;
  for (std::size_t n = 0; n <= g.n_t; ++n) {
    const double diff = mean_r[n] / kSeeds - pde.series[n].abs_r;
    rms += diff * diff;
  }
  rms = std::sqrt(rms / static_cast<double>(g.n_t + 1));
  std::ostringstream os;
  os << kSeeds << " seeds, N = " << N << ", RMS gap between mean ensemble |r| and kinetic |r| = "
     << rms;
  return {rms <= 0.05, os.str()};
}

// --- 8: pinned stability-gate arithmetic ---

Outcome check_stability_examples() {
  std::ostringstream os;
  bool ok = true;

  const ModelParams base{.m = 1.0, .D = 1.0, .K = 0.0, .Omega1 = 0.0};
  const auto dt_max = stability_d_t_max(base, 0.1);
  const double expected = 0.01 / 1.99;
  if (!dt_max || std::abs(*dt_max - expected) > 4.0 * std::numeric_limits<double>::epsilon()) {
    ok = false;
    os << "d_t bound mismatch; ";
  } else {
    os << "d_t bound " << *dt_max << " == 0.01/1.99; ";
  }
  if (stability_G_omega_max(base, 0.1) != 20.0) {
    ok = false;
    os << "window bound != 20; ";
  }

  if (stability_d_t_max(base, std::sqrt(2.0)).has_value()) {
    ok = false;
    os << "sqrt(2) spacing should leave d_t unconstrained; ";
  } else {
    GridSpec g{};
    g.d_omega = std::sqrt(2.0);
    g.d_t = 123.0;  // arbitrary: no upper bound applies
    g.d_theta = g.d_omega * g.d_t;
    g.G_omega = std::sqrt(2.0);
    g.n_omega = 3;
    g.n_theta = 4;
    g.n_Omega = 1;
    const StabilityReport rep = validate_stability(base, g);
    if (!rep.d_omega_ok || rep.d_t_max.has_value() || !rep.d_t_ok) {
      ok = false;
      os << "boundary-spacing report wrong; ";
    } else {
      os << "spacing at the bound: unconstrained d_t; ";
    }
  }

  const ModelParams strong{.m = 1.0, .D = 1.0, .K = 6.0, .Omega1 = 0.0};
  GridSpec wide{};
  wide.d_omega = 0.1;
  wide.d_t = 0.005;
  wide.d_theta = wide.d_omega * wide.d_t;
  wide.G_omega = 15.0;
  wide.n_omega = 301;
  wide.n_theta = 12566;
  wide.n_Omega = 1;
  const StabilityReport rep = validate_stability(strong, wide);
  if (rep.G_omega_max != 14.0 || rep.G_omega_ok || rep.overall_ok) {
    ok = false;
    os << "oversized window not rejected (max " << rep.G_omega_max << ")";
  } else {
    os << "window bound 14 rejects 15";
  }
  return {ok, os.str()};
}

}  // namespace

int main() {
  using CheckFn = std::function<Outcome()>;
  const std::vector<std::pair<const char*, CheckFn>> checks = {
      {"positivity of the explicit update", check_positivity},
      {"interior mass conservation", check_mass_conservation},
      {"linear-case convergence to the analytic kernel", check_linear_convergence},
      {"kernel identity suite", check_kernel_identities},
      {"mean-field drift identity and bound", check_meanfield_identity},
      {"sweep trend ordering", check_figure_trends},
      {"kinetic vs ensemble cross-validation", check_langevin_cross_validation},
      {"stability gate worked examples", check_stability_examples},
  };

  int failures = 0;
  for (std::size_t c = 0; c < checks.size(); ++c) {
    Outcome out;
    try {
      out = checks[c].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("[%s] %zu/%zu %s: %s\n", out.pass ? "PASS" : "FAIL", c + 1, checks.size(),
                checks[c].first, out.detail.c_str());
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d of %zu checks failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
