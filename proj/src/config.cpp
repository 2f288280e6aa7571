#include "kkf/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kkf {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* section, bool lenient) {
  if (lenient) return;
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known)
      throw std::invalid_argument(std::string("unknown key '") + key + "' in " + section);
  }
}

double require_number(const json& obj, const char* key, const char* section) {
  if (!obj.contains(key))
    throw std::invalid_argument(std::string("missing '") + key + "' in " + section);
  if (!obj[key].is_number())
    throw std::invalid_argument(std::string("'") + key + "' in " + section +
                                " must be a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj[key].get<double>();
}

const char* kind_name(DistributionKind k) {
  switch (k) {
    case DistributionKind::PointMass: return "point";
    case DistributionKind::Uniform: return "uniform";
    case DistributionKind::Gaussian: return "gaussian";
    case DistributionKind::Table: return "table";
  }
  return "point";
}

DistributionKind kind_from_name(const std::string& s) {
  if (s == "point") return DistributionKind::PointMass;
  if (s == "uniform") return DistributionKind::Uniform;
  if (s == "gaussian") return DistributionKind::Gaussian;
  if (s == "table") return DistributionKind::Table;
  throw std::invalid_argument("unknown distribution kind '" + s + "'");
}

const char* preset_name(InitialPreset p) {
  switch (p) {
    case InitialPreset::Default: return "default";
    case InitialPreset::HalfSine: return "half-sine";
    case InitialPreset::Literal: return "literal";
    case InitialPreset::Gaussian: return "gaussian";
    case InitialPreset::Uniform: return "uniform";
  }
  return "default";
}

InitialPreset preset_from_name(const std::string& s) {
  if (s == "default") return InitialPreset::Default;
  if (s == "half-sine") return InitialPreset::HalfSine;
  if (s == "literal") return InitialPreset::Literal;
  if (s == "gaussian") return InitialPreset::Gaussian;
  if (s == "uniform") return InitialPreset::Uniform;
  throw std::invalid_argument("unknown initial preset '" + s + "'");
}

}  // namespace

RunConfig parse_config(const std::string& json_text, bool lenient) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config root must be an object");
  reject_unknown(root, {"model", "grid", "distribution", "initial", "output", "mode", "label"},
                 "config", lenient);

  RunConfig cfg;

  if (!root.contains("model")) throw std::invalid_argument("missing 'model' section");
  {
    const json& m = root["model"];
    reject_unknown(m, {"m", "D", "K", "Omega1"}, "model", lenient);
    cfg.model.m = require_number(m, "m", "model");
    cfg.model.D = require_number(m, "D", "model");
    cfg.model.K = number_or(m, "K", 0.0);
    cfg.model.Omega1 = number_or(m, "Omega1", 0.0);
    validate_params(cfg.model);
  }

  if (!root.contains("grid")) throw std::invalid_argument("missing 'grid' section");
  {
    const json& g = root["grid"];
    reject_unknown(g, {"d_omega", "d_t", "G_omega", "T", "d_Omega"}, "grid", lenient);
    cfg.grid.d_omega = require_number(g, "d_omega", "grid");
    cfg.grid.d_t = require_number(g, "d_t", "grid");
    cfg.grid.G_omega = require_number(g, "G_omega", "grid");
    cfg.grid.T = require_number(g, "T", "grid");
    cfg.grid.d_Omega = number_or(g, "d_Omega", 0.0);
    if (!(cfg.grid.d_omega > 0) || !(cfg.grid.d_t > 0) || !(cfg.grid.G_omega > 0) ||
        !(cfg.grid.T > 0))
      throw std::invalid_argument("grid targets must be positive");
  }

  if (root.contains("distribution")) {
    const json& d = root["distribution"];
    reject_unknown(d, {"kind", "center", "sigma", "table"}, "distribution", lenient);
    if (d.contains("kind")) cfg.distribution.kind = kind_from_name(d["kind"].get<std::string>());
    cfg.distribution.center = number_or(d, "center", 0.0);
    cfg.distribution.sigma = number_or(d, "sigma", 1.0);
    if (d.contains("table")) cfg.distribution.table = d["table"].get<std::vector<double>>();
  }

  if (root.contains("initial")) {
    const json& i = root["initial"];
    reject_unknown(i, {"preset", "omega0", "theta0", "sigma_omega", "sigma_theta"}, "initial",
                   lenient);
    if (i.contains("preset")) cfg.initial.preset = preset_from_name(i["preset"].get<std::string>());
    cfg.initial.omega0 = number_or(i, "omega0", 0.0);
    cfg.initial.theta0 = number_or(i, "theta0", 0.0);
    cfg.initial.sigma_omega = number_or(i, "sigma_omega", 0.5);
    cfg.initial.sigma_theta = number_or(i, "sigma_theta", 0.5);
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    reject_unknown(o, {"series", "snapshot_every", "snapshot_prefix"}, "output", lenient);
    if (o.contains("series")) cfg.output.series = o["series"].get<std::string>();
    if (o.contains("snapshot_every"))
      cfg.output.snapshot_every = o["snapshot_every"].get<std::size_t>();
    if (o.contains("snapshot_prefix"))
      cfg.output.snapshot_prefix = o["snapshot_prefix"].get<std::string>();
  }

  if (root.contains("mode")) {
    const json& m = root["mode"];
    reject_unknown(m,
                   {"deterministic", "unsafe_grid", "langevin_n", "langevin_substeps", "seed"},
                   "mode", lenient);
    if (m.contains("deterministic")) cfg.mode.deterministic = m["deterministic"].get<bool>();
    if (m.contains("unsafe_grid")) cfg.mode.unsafe_grid = m["unsafe_grid"].get<bool>();
    if (m.contains("langevin_n")) cfg.mode.langevin_n = m["langevin_n"].get<std::size_t>();
    if (m.contains("langevin_substeps"))
      cfg.mode.langevin_substeps = m["langevin_substeps"].get<std::size_t>();
    if (m.contains("seed")) cfg.mode.seed = m["seed"].get<std::uint64_t>();
    if (cfg.mode.langevin_substeps == 0)
      throw std::invalid_argument("langevin_substeps must be at least 1");
  }

  if (root.contains("label")) cfg.label = root["label"].get<std::string>();

  return cfg;
}

RunConfig parse_config_file(const std::string& path, bool lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), lenient);
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["model"] = {{"m", cfg.model.m}, {"D", cfg.model.D}, {"K", cfg.model.K},
                   {"Omega1", cfg.model.Omega1}};
  root["grid"] = {{"d_omega", cfg.grid.d_omega},
                  {"d_t", cfg.grid.d_t},
                  {"G_omega", cfg.grid.G_omega},
                  {"T", cfg.grid.T},
                  {"d_Omega", cfg.grid.d_Omega}};
  root["distribution"] = {{"kind", kind_name(cfg.distribution.kind)},
                          {"center", cfg.distribution.center},
                          {"sigma", cfg.distribution.sigma}};
  if (!cfg.distribution.table.empty()) root["distribution"]["table"] = cfg.distribution.table;
  root["initial"] = {{"preset", preset_name(cfg.initial.preset)},
                     {"omega0", cfg.initial.omega0},
                     {"theta0", cfg.initial.theta0},
                     {"sigma_omega", cfg.initial.sigma_omega},
                     {"sigma_theta", cfg.initial.sigma_theta}};
  root["output"] = {{"series", cfg.output.series},
                    {"snapshot_every", cfg.output.snapshot_every},
                    {"snapshot_prefix", cfg.output.snapshot_prefix}};
  root["mode"] = {{"deterministic", cfg.mode.deterministic},
                  {"unsafe_grid", cfg.mode.unsafe_grid},
                  {"langevin_n", cfg.mode.langevin_n},
                  {"langevin_substeps", cfg.mode.langevin_substeps},
                  {"seed", cfg.mode.seed}};
  if (!cfg.label.empty()) root["label"] = cfg.label;
  return root.dump(2);
}

Problem assemble(const RunConfig& cfg) {
  Problem pb;
  pb.params = cfg.model;
  pb.grid = build_grid(cfg.model, cfg.grid.d_omega, cfg.grid.d_t, cfg.grid.G_omega,
                       cfg.grid.T, cfg.grid.d_Omega, cfg.mode.unsafe_grid);
  pb.distribution = build_frequency_distribution(cfg.distribution, cfg.model, pb.grid);
  pb.initial = init_density(cfg.initial, pb.grid);
  return pb;
}

namespace {

// Shrinks d_omega (by halving) until a G_omega = 4 grid is admissible, then
// clamps the caption d_t target to 0.95 of the stability bound.
RunConfig preset_base(ModelParams mp, double d_t_caption, const std::string& label) {
  RunConfig cfg;
  cfg.model = mp;
  cfg.grid.G_omega = 4.0;
  cfg.grid.T = 10.0;
  double d_omega = 0.2;
  int halvings = 0;
  while (stability_G_omega_max(mp, d_omega) < cfg.grid.G_omega - 1e-12) {
    d_omega *= 0.5;
    if (++halvings > 8)
      throw std::invalid_argument("no admissible preset grid for these parameters");
  }
  cfg.grid.d_omega = d_omega;
  double d_t = d_t_caption;
  if (const auto cap = stability_d_t_max(mp, d_omega); cap && d_t > 0.95 * *cap)
    d_t = 0.95 * *cap;
  cfg.grid.d_t = d_t;
  cfg.label = label;
  return cfg;
}

std::string trimmed(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig78"};
}

std::vector<RunConfig> run_preset(const std::string& name) {
  std::vector<RunConfig> out;
  if (name == "fig1" || name == "fig2") {
    for (double K : {1.0, 2.0, 4.0, 6.0})
      out.push_back(preset_base({1.0, 1.0, K, 0.0}, 0.0317, name + "_K=" + trimmed(K)));
  } else if (name == "fig3" || name == "fig4") {
    for (double m : {0.5, 1.0, 2.0})
      out.push_back(preset_base({m, 1.0, 6.0, 0.0}, 0.0079, name + "_m=" + trimmed(m)));
  } else if (name == "fig5" || name == "fig6") {
    for (double D : {2.0, 1.0, 0.5})
      out.push_back(preset_base({1.0, D, 6.0, 0.0}, 0.0317, name + "_D=" + trimmed(D)));
  } else if (name == "fig78") {
    RunConfig a = preset_base({1.0, 1.0, 4.0, 0.0}, 0.053, "fig78_default");
    RunConfig b = a;
    b.initial.preset = InitialPreset::HalfSine;
    b.label = "fig78_half-sine";
    out.push_back(a);
    out.push_back(b);
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return out;
}

}  // namespace kkf
