#include "kkf/langevin.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kkf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform in (0, 1]: the +1 keeps log() finite in Box-Muller.
double bits_to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

double wrap_theta(double th) {
  th = std::fmod(th, kTwoPi);
  return th < 0.0 ? th + kTwoPi : th;
}

}  // namespace

double normal_variate(std::uint64_t seed, std::uint64_t step, std::uint64_t oscillator) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ step) ^ oscillator);
  const double u1 = bits_to_unit(h);
  const double u2 = bits_to_unit(splitmix64(h ^ 0xD1B54A32D192ED03ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

OscillatorEnsemble sample_ensemble(const std::function<double(double, double)>& rho0,
                                   const FrequencyDistribution& g, double G_omega,
                                   std::size_t N, std::uint64_t seed) {
  if (!(G_omega > 0.0)) throw std::invalid_argument("sample_ensemble needs G_omega > 0");
  if (N == 0) throw std::invalid_argument("sample_ensemble needs N > 0");

  // Envelope from a scan lattice; 5% headroom over the largest sample.
  double peak = 0.0;
  constexpr int kScan = 512;
  for (int a = 0; a < kScan; ++a) {
    const double w = -G_omega + (2.0 * G_omega) * (a + 0.5) / kScan;
    for (int b = 0; b < kScan; ++b) {
      const double v = rho0(w, kTwoPi * (b + 0.5) / kScan);
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("rho0 must be finite and nonnegative");
      peak = std::max(peak, v);
    }
  }
  if (!(peak > 0.0)) throw std::invalid_argument("rho0 vanishes on the sampling window");
  const double envelope = 1.05 * peak;

  std::mt19937_64 eng(seed);
  auto unit = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };

  OscillatorEnsemble ens;
  ens.omega.reserve(N);
  ens.theta.reserve(N);
  ens.Omega.reserve(N);

  std::uint64_t proposals = 0;
  while (ens.size() < N) {
    const double w = -G_omega + 2.0 * G_omega * unit();
    const double th = kTwoPi * unit();
    ++proposals;
    if (proposals > 200000 && static_cast<double>(ens.size()) <
                                  1e-4 * static_cast<double>(proposals))
      throw std::runtime_error("rejection sampling acceptance rate below 1e-4");
    if (unit() * envelope > rho0(w, th)) continue;
    ens.omega.push_back(w);
    ens.theta.push_back(th);
    const double u = unit();
    double cum = 0.0;
    std::size_t pick = g.size() - 1;
    for (std::size_t k = 0; k < g.size(); ++k) {
      cum += g.weight(k);
      if (u <= cum) {
        pick = k;
        break;
      }
    }
    ens.Omega.push_back(g.node(pick));
  }
  return ens;
}

void langevin_step(OscillatorEnsemble& ens, const ModelParams& p, double dt,
                   std::uint64_t seed, std::uint64_t step) {
  validate_params(p);
  if (!(dt > 0.0)) throw std::invalid_argument("langevin_step needs dt > 0");
  const OrderParameter r = ensemble_phase_order(ens);
  const double noise_scale = std::sqrt(2.0 * p.D) / p.m * std::sqrt(dt);
  for (std::size_t l = 0; l < ens.size(); ++l) {
    const double drive =
        -ens.omega[l] + ens.Omega[l] + p.K * r.abs * std::sin(r.phase - ens.theta[l]);
    ens.omega[l] += dt / p.m * drive +
                    noise_scale * normal_variate(seed, step, static_cast<std::uint64_t>(l));
    ens.theta[l] = wrap_theta(ens.theta[l] + ens.omega[l] * dt);
  }
}

namespace {

OrderParameter phasor_mean(const std::vector<double>& angles) {
  double re = 0.0, im = 0.0;
  for (double a : angles) {
    re += std::cos(a);
    im += std::sin(a);
  }
  const double n = static_cast<double>(angles.size());
  return {std::hypot(re, im) / n, std::atan2(im, re)};
}

}  // namespace

OrderParameter ensemble_phase_order(const OscillatorEnsemble& ens) {
  if (ens.size() == 0) throw std::invalid_argument("empty ensemble");
  return phasor_mean(ens.theta);
}

OrderParameter ensemble_freq_order(const OscillatorEnsemble& ens) {
  if (ens.size() == 0) throw std::invalid_argument("empty ensemble");
  return phasor_mean(ens.omega);
}

}  // namespace kkf
