#include "wavemaps/config.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace wm {

Json default_config() {
  return Json::parse(R"({
  "grid": {"dim": 1, "n_per_axis": 1024, "period": 20.0},
  "scheme": {
    "tau": 0.0078125,
    "t_end": 0.5,
    "filter_constant": 1.0,
    "activation_steps": 2,
    "filter_mode": "literal",
    "null_form_scale": 0.5
  },
  "data": {
    "source": "geodesic-smooth",
    "amplitude": 1.0,
    "width": 1.0,
    "s": 1.7,
    "seed": 0,
    "random_phases": false,
    "path": "",
    "point": [0.0, 0.0, 1.0]
  },
  "run": {"steps": 0, "snapshot_every": 0, "deviation_every": 1},
  "study": {
    "taus": [0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125, 0.000244140625],
    "t_final": 0.5,
    "s1": 0.0,
    "reference": "exact",
    "oracle_refinement": 16,
    "threads": 1,
    "svg": true,
    "record_wall_time": false
  },
  "diagnostics": {
    "seed": 1,
    "suites": ["identities", "vanishing", "strichartz"],
    "identity_n": 128,
    "identity_m": 32,
    "identity_tau": 0.05,
    "identity_period": 20.0,
    "tol_null_identity": 1e-10,
    "tol_box_symbol": 1e-10,
    "tol_parseval": 1e-12,
    "tol_group_law": 1e-12,
    "tol_energy": 1e-12,
    "vanishing_cases": ["geom4", "geom5", "claim2", "claim1", "claim3", "claim4"],
    "vanishing_trials": 20,
    "control_trials": 5,
    "controls": true,
    "tol_vanishing": 1e-10,
    "control_threshold": 1e-4,
    "strichartz_pairs": ["4,4", "inf,2"],
    "strichartz_taus": [0.0625, 0.03125, 0.015625],
    "strichartz_trials": 50,
    "strichartz_k": 3,
    "tol_strichartz_spread": 2.0
  },
  "synth": {"theta_spectrum": true}
})");
}

namespace {

const char* type_name(const Json& j) { return j.type_name(); }

bool compatible(const Json& have, const Json& incoming) {
  if (have.is_number()) {
    if (!incoming.is_number()) return false;
    if (have.is_number_integer() && !incoming.is_number_integer()) return false;
    return true;
  }
  if (have.is_array()) {
    if (!incoming.is_array()) return false;
    if (have.empty()) return true;
    for (const auto& e : incoming) {
      if (!compatible(have.front(), e)) return false;
    }
    return true;
  }
  return have.type() == incoming.type();
}

}  // namespace

void merge_config(Json& base, const Json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError("config" + where + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    Json& slot = base[key];
    if (slot.is_object()) {
      merge_config(slot, value, path);
    } else if (!compatible(slot, value)) {
      throw ConfigError("config key '" + path + "' expects " + type_name(slot) + ", got " +
                        type_name(value));
    } else {
      slot = value;
    }
  }
}

Json load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path.string());
  Json doc;
  try {
    doc = Json::parse(f);
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) {
    doc = doc["config"];
  }
  Json cfg = default_config();
  merge_config(cfg, doc);
  return cfg;
}

void apply_override(Json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json* slot = &cfg;
  std::stringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (!slot->is_object() || !slot->contains(part)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    slot = &(*slot)[part];
  }
  if (slot->is_object()) throw ConfigError("'" + key + "' names a section, not a key");
  Json value;
  if (slot->is_string()) {
    value = text;
  } else {
    try {
      value = Json::parse(text);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse value '" + text + "' for '" + key + "'");
    }
    if (slot->is_number_float() && value.is_number_integer()) {
      value = value.get<double>();
    }
  }
  if (!compatible(*slot, value)) {
    throw ConfigError("config key '" + key + "' expects " + type_name(*slot) + ", got " +
                      type_name(value));
  }
  *slot = value;
}

void apply_environment(Json& cfg, char** env) {
  if (env == nullptr) return;
  const std::size_t plen = std::strlen(kEnvPrefix);
  for (char** e = env; *e != nullptr; ++e) {
    const std::string entry(*e);
    if (entry.compare(0, plen, kEnvPrefix) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(plen, eq - plen);
    const auto sep = name.find("__");
    if (sep == std::string::npos) {
      throw ConfigError("environment override " + entry.substr(0, eq) +
                        " must look like WMSOLVE_SECTION__KEY");
    }
    std::string key = name.substr(0, sep) + "." + name.substr(sep + 2);
    for (auto& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    apply_override(cfg, key + "=" + entry.substr(eq + 1));
  }
}

namespace {

template <class T>
T get(const Json& cfg, const char* section, const char* key) {
  try {
    return cfg.at(section).at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config ") + section + "." + key + ": " + e.what());
  }
}

template <class F>
auto translate(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

GridSpec grid_from(const Json& cfg) {
  GridSpec g;
  g.dim = get<int>(cfg, "grid", "dim");
  const auto n = get<long long>(cfg, "grid", "n_per_axis");
  if (n <= 0) throw ConfigError("grid.n_per_axis must be positive");
  g.n_per_axis = static_cast<std::size_t>(n);
  g.period = get<double>(cfg, "grid", "period");
  translate([&] { g.validate(); return 0; });
  return g;
}

SchemeParams scheme_from(const Json& cfg) {
  SchemeParams p;
  p.grid = grid_from(cfg);
  p.tau = get<double>(cfg, "scheme", "tau");
  p.t_end = get<double>(cfg, "scheme", "t_end");
  p.filter_constant = get<double>(cfg, "scheme", "filter_constant");
  p.activation_steps = get<int>(cfg, "scheme", "activation_steps");
  p.null_form_scale = get<double>(cfg, "scheme", "null_form_scale");
  const auto steps = get<long long>(cfg, "run", "steps");
  if (steps < 0) throw ConfigError("run.steps must be >= 0");
  if (steps > 0) p.t_end = static_cast<double>(steps) * p.tau;
  translate([&] {
    p.filter_mode = filter_mode_from_string(get<std::string>(cfg, "scheme", "filter_mode"));
    p.validate();
    return 0;
  });
  return p;
}

DataSpec data_from(const Json& cfg) {
  DataSpec d;
  translate([&] {
    d.source = data_source_from_string(get<std::string>(cfg, "data", "source"));
    return 0;
  });
  d.amplitude = get<double>(cfg, "data", "amplitude");
  d.width = get<double>(cfg, "data", "width");
  d.s = get<double>(cfg, "data", "s");
  d.seed = get<std::uint64_t>(cfg, "data", "seed");
  d.random_phases = get<bool>(cfg, "data", "random_phases");
  d.path = get<std::string>(cfg, "data", "path");
  const auto point = get<std::vector<double>>(cfg, "data", "point");
  if (point.size() != 3) throw ConfigError("data.point needs three entries");
  for (std::size_t i = 0; i < 3; ++i) d.point[i] = point[i];
  if (d.source == DataSource::custom_file && d.path.empty()) {
    throw ConfigError("data.path is required for custom-file");
  }
  if (d.source == DataSource::geodesic_rough && !(d.s > 0.0)) {
    throw ConfigError("data.s must be > 0");
  }
  if (d.source == DataSource::geodesic_smooth && !(d.width > 0.0)) {
    throw ConfigError("data.width must be > 0");
  }
  return d;
}

StudyConfig study_from(const Json& cfg) {
  StudyConfig c;
  c.grid = grid_from(cfg);
  c.data = data_from(cfg);
  c.taus = get<std::vector<double>>(cfg, "study", "taus");
  c.t_final = get<double>(cfg, "study", "t_final");
  c.s1 = get<double>(cfg, "study", "s1");
  c.filter_constant = get<double>(cfg, "scheme", "filter_constant");
  c.activation_steps = get<int>(cfg, "scheme", "activation_steps");
  c.null_form_scale = get<double>(cfg, "scheme", "null_form_scale");
  c.oracle_refinement = get<int>(cfg, "study", "oracle_refinement");
  const auto threads = get<long long>(cfg, "study", "threads");
  if (threads < 1) throw ConfigError("study.threads must be >= 1");
  c.threads = static_cast<unsigned>(threads);
  c.record_wall_time = get<bool>(cfg, "study", "record_wall_time");
  translate([&] {
    c.filter_mode = filter_mode_from_string(get<std::string>(cfg, "scheme", "filter_mode"));
    c.reference = reference_from_string(get<std::string>(cfg, "study", "reference"));
    c.validate();
    return 0;
  });
  return c;
}

DiagnosticsConfig diagnostics_from(const Json& cfg) {
  DiagnosticsConfig d;
  const char* s = "diagnostics";
  d.seed = get<std::uint64_t>(cfg, s, "seed");
  d.suites = get<std::vector<std::string>>(cfg, s, "suites");
  d.identity_n = get<std::size_t>(cfg, s, "identity_n");
  d.identity_m = get<std::size_t>(cfg, s, "identity_m");
  d.identity_tau = get<double>(cfg, s, "identity_tau");
  d.identity_period = get<double>(cfg, s, "identity_period");
  d.tol_null_identity = get<double>(cfg, s, "tol_null_identity");
  d.tol_box_symbol = get<double>(cfg, s, "tol_box_symbol");
  d.tol_parseval = get<double>(cfg, s, "tol_parseval");
  d.tol_group_law = get<double>(cfg, s, "tol_group_law");
  d.tol_energy = get<double>(cfg, s, "tol_energy");
  d.vanishing_cases = get<std::vector<std::string>>(cfg, s, "vanishing_cases");
  d.vanishing_trials = get<std::size_t>(cfg, s, "vanishing_trials");
  d.control_trials = get<std::size_t>(cfg, s, "control_trials");
  d.controls = get<bool>(cfg, s, "controls");
  d.tol_vanishing = get<double>(cfg, s, "tol_vanishing");
  d.control_threshold = get<double>(cfg, s, "control_threshold");
  d.strichartz_pairs = get<std::vector<std::string>>(cfg, s, "strichartz_pairs");
  d.strichartz_taus = get<std::vector<double>>(cfg, s, "strichartz_taus");
  d.strichartz_trials = get<std::size_t>(cfg, s, "strichartz_trials");
  d.strichartz_k = get<int>(cfg, s, "strichartz_k");
  d.tol_strichartz_spread = get<double>(cfg, s, "tol_strichartz_spread");
  for (const auto& suite : d.suites) {
    if (suite != "identities" && suite != "vanishing" && suite != "strichartz") {
      throw ConfigError("unknown diagnostics suite '" + suite + "'");
    }
  }
  translate([&] {
    for (const auto& c : d.vanishing_cases) vanishing_case_from_string(c);
    return 0;
  });
  if (d.identity_m < 3) throw ConfigError("diagnostics.identity_m must be >= 3");
  return d;
}

}  // namespace wm
