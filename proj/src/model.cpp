#include "kkf/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kkf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Relative slack for the inequality checks; several figure grids sit exactly
// on the stability boundary and must not fail to roundoff.
constexpr double kGateSlack = 1e-12;

// G_omega / d_omega (and Omega1 / d_Omega) must be integers up to rounding.
long long ratio_as_integer(double num, double den, const char* what) {
  const double ratio = num / den;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(rounded))) {
    std::ostringstream os;
    os << what << ": " << num << " is not an integer multiple of " << den;
    throw std::invalid_argument(os.str());
  }
  return static_cast<long long>(rounded);
}

}  // namespace

void validate_params(const ModelParams& p) {
  if (!(p.m > 0.0)) throw std::invalid_argument("inertia m must be positive");
  if (!(p.D > 0.0)) throw std::invalid_argument("noise strength D must be positive");
  if (!(p.K >= 0.0)) throw std::invalid_argument("coupling must be nonnegative");
  if (!(p.Omega1 >= 0.0))
    throw std::invalid_argument("frequency bound Omega1 must be nonnegative");
}

std::optional<double> stability_d_t_max(const ModelParams& p, double d_omega) {
  const double den = 2.0 * p.D - p.m * d_omega * d_omega;
  if (den <= 0.0) return std::nullopt;  // diffusion weight cannot go negative
  return p.m * p.m * d_omega * d_omega / den;
}

double stability_G_omega_max(const ModelParams& p, double d_omega) {
  return 2.0 * p.D / (p.m * d_omega) - p.Omega1 - p.K;
}

StabilityReport validate_stability(const ModelParams& p, const GridSpec& g) {
  validate_params(p);
  if (!(g.d_omega > 0.0) || !(g.d_t > 0.0) || !(g.G_omega > 0.0))
    throw std::invalid_argument("malformed grid: spacings and G_omega must be positive");

  StabilityReport rep;
  rep.d_omega_ok = g.d_omega <= std::sqrt(2.0 * p.D) / p.m * (1.0 + kGateSlack);
  rep.d_t_max = stability_d_t_max(p, g.d_omega);
  rep.d_t_ok = !rep.d_t_max || g.d_t <= *rep.d_t_max * (1.0 + kGateSlack);
  rep.G_omega_max = stability_G_omega_max(p, g.d_omega);
  rep.G_omega_ok = g.G_omega <= rep.G_omega_max * (1.0 + kGateSlack);
  rep.overall_ok = rep.d_omega_ok && rep.d_t_ok && rep.G_omega_ok;
  return rep;
}

std::string StabilityReport::summary() const {
  std::ostringstream os;
  os << "d_omega " << (d_omega_ok ? "ok" : "VIOLATED") << "; d_t ";
  if (d_t_max)
    os << (d_t_ok ? "ok" : "VIOLATED") << " (max " << *d_t_max << ")";
  else
    os << "unconstrained";
  os << "; G_omega " << (G_omega_ok ? "ok" : "VIOLATED") << " (max " << G_omega_max
     << "); overall " << (overall_ok ? "ok" : "VIOLATED");
  return os.str();
}

GridSpec build_grid(const ModelParams& p, double d_omega, double d_t_target,
                    double G_omega, double T, double d_Omega, bool allow_unstable) {
  validate_params(p);
  if (!(d_omega > 0.0) || !(d_t_target > 0.0) || !(G_omega > 0.0) || !(T > 0.0))
    throw std::invalid_argument("grid targets must be positive");

  GridSpec g;
  g.d_omega = d_omega;
  g.G_omega = G_omega;
  g.T = T;
  g.d_Omega = d_Omega;

  const long long half_rows = ratio_as_integer(G_omega, d_omega, "G_omega/d_omega");
  if (half_rows < 1) throw std::invalid_argument("grid needs at least one interior row");
  g.n_omega = static_cast<std::size_t>(2 * half_rows + 1);

  // Close the circle: pick the integer theta count nearest the target, then
  // recompute d_t so n_theta * d_omega * d_t = 2pi holds exactly.
  const double n_theta_real = kTwoPi / (d_omega * d_t_target);
  const long long n_theta = std::llround(n_theta_real);
  if (n_theta < 4) throw std::invalid_argument("d_t target leaves fewer than 4 theta cells");
  g.n_theta = static_cast<std::size_t>(n_theta);
  g.d_t = kTwoPi / (static_cast<double>(n_theta) * d_omega);
  g.d_theta = g.d_omega * g.d_t;

  g.n_t = static_cast<std::size_t>(std::ceil(T / g.d_t - 1e-9));

  if (d_Omega > 0.0 && p.Omega1 > 0.0) {
    const long long half_slices = ratio_as_integer(p.Omega1, d_Omega, "Omega1/d_Omega");
    g.n_Omega = static_cast<std::size_t>(2 * half_slices + 1);
  } else {
    g.n_Omega = 1;
  }

  const StabilityReport rep = validate_stability(p, g);
  if (!rep.overall_ok && !allow_unstable)
    throw std::invalid_argument("grid fails the stability conditions: " + rep.summary());
  return g;
}

FrequencyDistribution FrequencyDistribution::point_mass(double Omega0) {
  FrequencyDistribution d;
  d.nodes_ = {Omega0};
  d.weights_ = {1.0};
  return d;
}

FrequencyDistribution FrequencyDistribution::tabulated(std::vector<double> nodes,
                                                       std::vector<double> g_values,
                                                       double d_Omega) {
  if (nodes.size() != g_values.size() || nodes.empty())
    throw std::invalid_argument("frequency table and nodes must match and be nonempty");
  if (!(d_Omega > 0.0))
    throw std::invalid_argument("tabulated distribution needs d_Omega > 0");
  double total = 0.0;
  for (double v : g_values) {
    if (!(v >= 0.0)) throw std::invalid_argument("frequency density must be nonnegative");
    total += v * d_Omega;
  }
  if (!(total > 0.0)) throw std::invalid_argument("frequency density has zero mass");

  FrequencyDistribution d;
  d.nodes_ = std::move(nodes);
  d.weights_.resize(g_values.size());
  for (std::size_t k = 0; k < g_values.size(); ++k)
    d.weights_[k] = g_values[k] * d_Omega / total;
  return d;
}

FrequencyDistribution build_frequency_distribution(const DistributionSpec& spec,
                                                   const ModelParams& p,
                                                   const GridSpec& g) {
  validate_params(p);
  switch (spec.kind) {
    case DistributionKind::PointMass: {
      if (g.n_Omega != 1)
        throw std::invalid_argument("point mass requires a single-node frequency grid");
      if (std::abs(spec.center) > p.Omega1 + 1e-12 && spec.center != 0.0)
        throw std::invalid_argument("point mass sits outside [-Omega1, Omega1]");
      return FrequencyDistribution::point_mass(spec.center);
    }
    case DistributionKind::Uniform:
    case DistributionKind::Gaussian:
    case DistributionKind::Table: {
      if (g.n_Omega < 1) throw std::invalid_argument("empty frequency grid");
      if (g.n_Omega > 1 && !(g.d_Omega > 0.0))
        throw std::invalid_argument("resolved frequency grid needs d_Omega > 0");
      const long long half = static_cast<long long>((g.n_Omega - 1) / 2);
      std::vector<double> nodes(g.n_Omega);
      for (std::size_t k = 0; k < g.n_Omega; ++k)
        nodes[k] = (static_cast<long long>(k) - half) * g.d_Omega;
      std::vector<double> gv(g.n_Omega);
      if (spec.kind == DistributionKind::Uniform) {
        const double v = p.Omega1 > 0.0 ? 1.0 / (2.0 * p.Omega1) : 1.0;
        for (auto& x : gv) x = v;
      } else if (spec.kind == DistributionKind::Gaussian) {
        if (!(spec.sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
        for (std::size_t k = 0; k < g.n_Omega; ++k)
          gv[k] = std::exp(-nodes[k] * nodes[k] / (2.0 * spec.sigma * spec.sigma));
      } else {
        if (spec.table.size() != g.n_Omega)
          throw std::invalid_argument("frequency table size does not match the Omega grid");
        gv = spec.table;
      }
      const double dO = g.n_Omega == 1 ? 1.0 : g.d_Omega;
      return FrequencyDistribution::tabulated(std::move(nodes), std::move(gv), dO);
    }
  }
  throw std::invalid_argument("unknown distribution kind");
}

}  // namespace kkf
