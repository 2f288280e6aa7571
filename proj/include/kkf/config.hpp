#pragma once

// Run configuration: JSON parsing/serialization, preset expansion, and
// assembly of the solver inputs.

#include <cstdint>
#include <string>
#include <vector>

#include "kkf/field.hpp"
#include "kkf/solver.hpp"

namespace kkf {

struct GridTargets {
  double d_omega = 0.2;
  double d_t = 0.02;  // target; the built grid adjusts it to close the circle
  double G_omega = 4.0;
  double T = 10.0;
  double d_Omega = 0.0;

  bool operator==(const GridTargets&) const = default;
};

struct OutputSpec {
  std::string series;           // CSV path; empty writes nothing
  std::size_t snapshot_every = 0;  // 0 disables snapshots
  std::string snapshot_prefix;

  bool operator==(const OutputSpec&) const = default;
};

struct ModeSpec {
  bool deterministic = true;   // reductions are always sequential; kept for config compatibility
  bool unsafe_grid = false;    // skip the stability gate in build_grid
  std::size_t langevin_n = 5000;
  std::size_t langevin_substeps = 1;  // Euler-Maruyama substeps per grid d_t
  std::uint64_t seed = 12345;

  bool operator==(const ModeSpec&) const = default;
};

struct RunConfig {
  ModelParams model;
  GridTargets grid;
  DistributionSpec distribution;
  InitialSpec initial;
  OutputSpec output;
  ModeSpec mode;
  std::string label;

  bool operator==(const RunConfig&) const = default;
};

// Parses a JSON document. model and grid are required, the rest defaults.
// Unknown keys are rejected unless lenient is set (then they are ignored).
// Value errors throw std::invalid_argument with a pointed message.
RunConfig parse_config(const std::string& json_text, bool lenient = false);
RunConfig parse_config_file(const std::string& path, bool lenient = false);

// Lossless inverse of parse_config.
std::string serialize_config(const RunConfig& cfg);

// Everything needed to run, built from a config.
struct Problem {
  ModelParams params;
  GridSpec grid;
  FrequencyDistribution distribution;
  DensityField initial;
};

Problem assemble(const RunConfig& cfg);

// Figure presets. Captions pin model parameters, T and a d_t target; the grid
// reconstruction defaults to d_omega = 0.2, G_omega = 4, identical
// oscillators (point mass at 0) and the default initial datum. Where the
// caption d_t exceeds the stability bound it is clamped to 0.95 of the bound,
// and d_omega is halved where no admissible G_omega = 4 grid exists at 0.2
// (the m = 2 and D = 0.5 members). Every emitted config passes the gate.
//
//   fig1/fig2: m = 1, D = 1, T = 10, d_t target 0.0317, K sweep {1, 2, 4, 6}
//   fig3/fig4: D = 1, K = 6, T = 10, d_t target 0.0079, m sweep {0.5, 1, 2}
//   fig5/fig6: m = 1, K = 6, T = 10, d_t target 0.0317, D sweep {2, 1, 0.5}
//   fig78:     m = 1, D = 1, K = 4, T = 10, d_t target 0.053,
//              default vs half-angle initial datum
std::vector<std::string> preset_names();
std::vector<RunConfig> run_preset(const std::string& name);

}  // namespace kkf
