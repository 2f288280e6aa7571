// Command-line front end: solve a configured run, expand and run figure
// presets, run the finite-N cross-check, the kernel identity suite, or just
// the stability gate. Exit codes: 0 success, 2 validation failure, 1 runtime
// error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kkf/config.hpp"
#include "kkf/io.hpp"
#include "kkf/kernel_checks.hpp"
#include "kkf/langevin.hpp"

namespace {

using kkf::RunConfig;

void run_solve(const RunConfig& cfg, const std::string& out_dir) {
  kkf::Problem pb = kkf::assemble(cfg);
  const auto out_path = [&](const std::string& name) {
    return out_dir.empty() ? name : (std::filesystem::path(out_dir) / name).string();
  };

  kkf::StepCallback on_step;
  if (cfg.output.snapshot_every > 0) {
    const std::string prefix =
        cfg.output.snapshot_prefix.empty() ? "snapshot" : cfg.output.snapshot_prefix;
    const std::size_t every = cfg.output.snapshot_every;
    on_step = [&, prefix, every](std::size_t step, double t, const kkf::DensityField& f) {
      if (step % every == 0)
        kkf::write_snapshot(out_path(prefix + "_" + std::to_string(step) + ".kkf"), f, t);
    };
  }

  const kkf::SimulationResult result =
      kkf::run_simulation(pb.params, pb.distribution, std::move(pb.initial), on_step);

  if (!cfg.output.series.empty()) kkf::write_series(out_path(cfg.output.series), result.series);

  const auto& last = result.series.back();
  std::printf("steps %zu, t = %.6g, |r| = %.6g, |s| = %.6g, tail = %.3g\n", last.step,
              last.t, last.abs_r, last.abs_s, last.tail_mass);
}

void run_langevin(const RunConfig& cfg, const std::string& out_dir) {
  kkf::ModelParams params = cfg.model;
  kkf::validate_params(params);
  const kkf::GridSpec grid =
      kkf::build_grid(params, cfg.grid.d_omega, cfg.grid.d_t, cfg.grid.G_omega, cfg.grid.T,
                      cfg.grid.d_Omega, cfg.mode.unsafe_grid);
  const kkf::FrequencyDistribution dist =
      kkf::build_frequency_distribution(cfg.distribution, params, grid);
  const auto rho0 = kkf::initial_evaluator(cfg.initial, grid);

  kkf::OscillatorEnsemble ens =
      kkf::sample_ensemble(rho0, dist, grid.G_omega, cfg.mode.langevin_n, cfg.mode.seed);

  const std::size_t sub = cfg.mode.langevin_substeps;
  const double dt = grid.d_t / static_cast<double>(sub);

  std::string csv = "step,t,abs_r,phase_r,abs_s\n";
  char buf[160];
  std::uint64_t counter = 0;
  for (std::size_t n = 0; n <= grid.n_t; ++n) {
    if (n > 0)
      for (std::size_t q = 0; q < sub; ++q)
        kkf::langevin_step(ens, params, dt, cfg.mode.seed, counter++);
    const kkf::OrderParameter r = kkf::ensemble_phase_order(ens);
    const kkf::OrderParameter s = kkf::ensemble_freq_order(ens);
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", n,
                  static_cast<double>(n) * grid.d_t, r.abs, r.phase, s.abs);
    csv += buf;
  }

  if (!cfg.output.series.empty()) {
    const std::string path =
        out_dir.empty() ? cfg.output.series
                        : (std::filesystem::path(out_dir) / cfg.output.series).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open series file: " + path);
    out << csv;
  } else {
    std::cout << csv;
  }
}

// --override key.path=value applied to the serialized config.
RunConfig apply_overrides(const RunConfig& cfg, const std::vector<std::string>& overrides) {
  if (overrides.empty()) return cfg;
  nlohmann::json root = nlohmann::json::parse(kkf::serialize_config(cfg));
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must look like section.key=value: " + ov);
    std::string path = ov.substr(0, eq);
    const std::string value = ov.substr(eq + 1);
    nlohmann::json* node = &root;
    std::size_t start = 0;
    for (std::size_t dot = path.find('.'); dot != std::string::npos;
         start = dot + 1, dot = path.find('.', start))
      node = &(*node)[path.substr(start, dot - start)];
    nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
    (*node)[path.substr(start)] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
  }
  return kkf::parse_config(root.dump());
}

int dispatch(int argc, char** argv) {
  CLI::App app{"finite-difference solver for the kinetic mean-field oscillator equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset;
  std::vector<std::string> overrides;
  bool configs_only = false;
  bool lenient = false;

  CLI::App* solve = app.add_subcommand("solve", "run the solver from a JSON config");
  solve->add_option("config", config_path, "config file")->required();
  solve->add_option("--out", out_dir, "directory for outputs");
  solve->add_flag("--lenient", lenient, "ignore unknown config keys");

  CLI::App* pre = app.add_subcommand("preset", "expand and run a figure preset");
  pre->add_option("name", preset, "preset name (fig1..fig6, fig78)")->required();
  pre->add_option("--out", out_dir, "directory for outputs (default .)");
  pre->add_option("--override", overrides, "section.key=value tweaks applied to every member");
  pre->add_flag("--configs-only", configs_only, "write member configs, do not run");

  CLI::App* lang = app.add_subcommand("langevin", "run the finite-N ensemble cross-check");
  lang->add_option("config", config_path, "config file")->required();
  lang->add_option("--out", out_dir, "directory for outputs");
  lang->add_flag("--lenient", lenient, "ignore unknown config keys");

  CLI::App* kc = app.add_subcommand("kernel-check", "run the kernel identity suite");

  CLI::App* stab = app.add_subcommand("stability", "evaluate the stability gate for a config");
  stab->add_option("config", config_path, "config file")->required();
  stab->add_flag("--lenient", lenient, "ignore unknown config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (solve->parsed()) {
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    run_solve(kkf::parse_config_file(config_path, lenient), out_dir);
    return 0;
  }

  if (pre->parsed()) {
    if (out_dir.empty()) out_dir = ".";
    std::filesystem::create_directories(out_dir);
    for (RunConfig cfg : kkf::run_preset(preset)) {
      cfg = apply_overrides(cfg, overrides);
      if (cfg.output.series.empty()) cfg.output.series = cfg.label + ".csv";
      const auto cfg_path = std::filesystem::path(out_dir) / (cfg.label + ".json");
      std::ofstream cf(cfg_path);
      cf << kkf::serialize_config(cfg) << '\n';
      if (configs_only) {
        std::printf("wrote %s\n", cfg_path.string().c_str());
        continue;
      }
      std::printf("running %s\n", cfg.label.c_str());
      run_solve(cfg, out_dir);
    }
    return 0;
  }

  if (lang->parsed()) {
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    run_langevin(kkf::parse_config_file(config_path, lenient), out_dir);
    return 0;
  }

  if (kc->parsed()) {
    const auto checks = kkf::run_kernel_checks();
    for (const auto& c : checks)
      std::printf("[%s] %s: %.12g vs %.12g (err %.3g, tol %.1g)\n", c.pass ? "ok" : "FAIL",
                  c.name.c_str(), c.value, c.reference, c.error, c.tolerance);
    return kkf::all_pass(checks) ? 0 : 1;
  }

  if (stab->parsed()) {
    const RunConfig cfg = kkf::parse_config_file(config_path, lenient);
    const kkf::GridSpec grid =
        kkf::build_grid(cfg.model, cfg.grid.d_omega, cfg.grid.d_t, cfg.grid.G_omega,
                        cfg.grid.T, cfg.grid.d_Omega, /*allow_unstable=*/true);
    const kkf::StabilityReport rep = kkf::validate_stability(cfg.model, grid);
    std::printf("grid: d_omega=%.6g d_t=%.10g d_theta=%.10g n_omega=%zu n_theta=%zu n_t=%zu\n",
                grid.d_omega, grid.d_t, grid.d_theta, grid.n_omega, grid.n_theta, grid.n_t);
    std::printf("%s\n", rep.summary().c_str());
    return rep.overall_ok ? 0 : 2;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
