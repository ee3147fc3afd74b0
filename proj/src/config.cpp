#include "mwion/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mwion {

using nlohmann::json;

namespace {

constexpr std::array<ScenarioId, 7> kScenarios{ScenarioId::fig3b, ScenarioId::fig3c,
                                               ScenarioId::fig4b, ScenarioId::fig5,
                                               ScenarioId::fig6,  ScenarioId::fig7,
                                               ScenarioId::scaling_check};

json grid(double start, double stop, int points) { return json::array({start, stop, points}); }

// Walks `overrides` against `base`, rejecting keys the defaults do not have.
void merge_into(json& base, const json& overrides, const std::string& prefix) {
  if (!overrides.is_object()) {
    throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected a key-value table");
  }
  for (const auto& [key, value] : overrides.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError(path, "unknown key");
    json& slot = base[key];
    if (slot.is_object()) {
      merge_into(slot, value, path);
    } else {
      slot = value;
    }
  }
}

const json& lookup(const json& tree, const std::string& path) {
  const json* node = &tree;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (!node->is_object() || !node->contains(key)) throw ConfigError(path, "missing key");
    node = &(*node)[key];
    if (dot == std::string::npos) return *node;
    pos = dot + 1;
  }
}

double number(const json& tree, const std::string& path) {
  const json& v = lookup(tree, path);
  if (!v.is_number()) throw ConfigError(path, "expected a number, got " + v.dump());
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

double at_least(const json& tree, const std::string& path, double lo) {
  const double d = number(tree, path);
  if (!(d >= lo)) throw ConfigError(path, "must be >= " + json(lo).dump() + ", got " + json(d).dump());
  return d;
}

double positive(const json& tree, const std::string& path) {
  const double d = number(tree, path);
  if (!(d > 0.0)) throw ConfigError(path, "must be > 0, got " + json(d).dump());
  return d;
}

double probability(const json& tree, const std::string& path) {
  const double d = number(tree, path);
  if (!(d >= 0.0 && d <= 1.0)) throw ConfigError(path, "must lie in [0, 1]");
  return d;
}

long integer(const json& tree, const std::string& path, long lo) {
  const json& v = lookup(tree, path);
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer, got " + v.dump());
  const long n = v.get<long>();
  if (n < lo) throw ConfigError(path, "must be >= " + std::to_string(lo));
  return n;
}

std::string text(const json& tree, const std::string& path) {
  const json& v = lookup(tree, path);
  if (!v.is_string()) throw ConfigError(path, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

std::array<double, 2> pair(const json& tree, const std::string& path) {
  const json& v = lookup(tree, path);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(path, "expected [waveguide_1, waveguide_2]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::span<const ScenarioId> all_scenarios() { return kScenarios; }

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::fig3b:
      return "fig3b";
    case ScenarioId::fig3c:
      return "fig3c";
    case ScenarioId::fig4b:
      return "fig4b";
    case ScenarioId::fig5:
      return "fig5";
    case ScenarioId::fig6:
      return "fig6";
    case ScenarioId::fig7:
      return "fig7";
    case ScenarioId::scaling_check:
      return "scaling-check";
  }
  return "?";
}

std::optional<ScenarioId> parse_scenario(std::string_view name) {
  for (const auto id : kScenarios) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::vector<double> Grid::linear() const {
  std::vector<double> v(static_cast<std::size_t>(points));
  if (points == 1) {
    v[0] = start;
    return v;
  }
  const double step = (stop - start) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = start + step * i;
  v.back() = stop;
  return v;
}

std::vector<double> Grid::logarithmic() const {
  if (!(start > 0.0 && stop >= start)) throw std::invalid_argument("log grid needs 0 < start <= stop");
  std::vector<double> v(static_cast<std::size_t>(points));
  if (points == 1) {
    v[0] = start;
    return v;
  }
  const double step = std::log(stop / start) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = start * std::exp(step * i);
  v.back() = stop;
  return v;
}

json default_config_tree() {
  const RabiProfile profile = default_quadratic_profile();
  json t;
  t["scenario"] = "fig5";
  t["seed"] = 0;
  t["field"] = {
      {"beta_x", json::array({0.08, 0.08})},
      {"beta_y", json::array({0.17, -0.17})},
      {"z0_um", profile.z0_um},
      {"omega_max_mhz", 0.52},
      {"shape", "quadratic"},
      {"curvature_per_um2", profile.curvature_per_um2},
      {"lambda_g_um", profile.lambda_g_um},
      {"traveling_fraction", 0.0},
      {"z_min_um", profile.z_min_um},
      {"z_max_um", profile.z_max_um},
      {"g_sigma", 1.0},
  };
  t["drive"] = {
      {"current_1_a", 0.1},
      {"current_2_a", 0.1},
      {"phi_1_rad", 0.0},
      {"phi_2_rad", std::numbers::pi},
      {"omega_mw_ghz", constants::qubit_frequency_ghz},
  };
  t["ion"] = {
      {"omega_hf_ghz", constants::qubit_frequency_ghz},
      {"static_field_mt", 0.74},
      {"delta_zeeman_mhz", nullptr},
      {"detuning_mhz", 0.0},
  };
  t["detection"] = {{"p_dark_given_bright", 0.0}, {"p_bright_given_dark", 0.0}};
  t["sequence"] = {{"kind", "simple"}, {"theta_over_pi", 1.0}, {"phi", 0.0}};
  t["noise"] = {{"shots", 0}};
  t["fig3b"] = {{"z_um", 300.0}, {"t_us", grid(0.0, 5.0, 501)}};
  t["fig3c"] = {{"z_um", 957.0},
                {"detuning_mhz", grid(-15.0, 15.0, 601)},
                {"pulse_time_us", nullptr},
                {"single_waveguide", true}};
  t["fig4b"] = {{"z_um", 957.0}, {"phi_r_rad", grid(0.0, 2.0 * std::numbers::pi, 73)}};
  t["fig5"] = {{"z_um", grid(157.0, 1757.0, 17)}};
  t["fig6"] = {{"scale", grid(0.0, 2.0, 201)}};
  t["fig7"] = {{"z_um", grid(157.0, 1757.0, 33)}, {"n_max", 55}, {"four_level", false}};
  t["scaling-check"] = {{"epsilon", grid(1e-3, 3e-2, 16)}};
  return t;
}

ScenarioConfig::ScenarioConfig(ScenarioId id) : scenario_(id), tree_(default_config_tree()) {
  tree_["scenario"] = std::string(to_string(id));
}

void ScenarioConfig::merge(const json& overrides) {
  if (!overrides.is_object()) throw ConfigError("<root>", "expected a key-value table");
  json patch = overrides;
  if (patch.contains("scenario")) {
    const json& s = patch["scenario"];
    if (!s.is_string() || s.get<std::string>() != to_string(scenario_)) {
      throw ConfigError("scenario", "config is for " + s.dump() + ", running " +
                                        std::string(to_string(scenario_)));
    }
    patch.erase("scenario");
  }
  if (patch.contains("seed")) {
    const json& s = patch["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    seed_ = s.get<std::uint64_t>();
    patch.erase("seed");
  }
  merge_into(tree_, patch, "");
}

void ScenarioConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw UsageError("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  // build the nested patch {a: {b: value}} from "a.b"
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = rest.find('.', pos);
    parts.push_back(rest.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (it->empty()) throw ConfigError(key, "empty key segment");
    patch = json{{*it, patch}};
  }
  merge(patch);
}

json ScenarioConfig::resolved_tree() const {
  json out = tree_;
  for (const auto id : kScenarios) {
    if (id != scenario_) out.erase(std::string(to_string(id)));
  }
  out["scenario"] = std::string(to_string(scenario_));
  out["seed"] = seed_;
  return out;
}

ResolvedConfig ScenarioConfig::resolve() const {
  const json& t = tree_;
  ResolvedConfig r;
  r.scenario = scenario_;
  r.seed = seed_;

  const auto bx = pair(t, "field.beta_x");
  const auto by = pair(t, "field.beta_y");
  r.modes = {WaveguideMode{bx[0], by[0]}, WaveguideMode{bx[1], by[1]}};

  RabiProfile& p = r.profile;
  p.z0_um = number(t, "field.z0_um");
  p.omega_max = mhz_to_rad(positive(t, "field.omega_max_mhz"));
  const std::string shape = text(t, "field.shape");
  if (shape == "quadratic") {
    p.shape = ProfileShape::quadratic;
  } else if (shape == "cosine") {
    p.shape = ProfileShape::cosine;
  } else {
    throw ConfigError("field.shape", "expected quadratic or cosine, got " + shape);
  }
  p.curvature_per_um2 = at_least(t, "field.curvature_per_um2", 0.0);
  p.lambda_g_um = positive(t, "field.lambda_g_um");
  p.traveling_fraction = at_least(t, "field.traveling_fraction", 0.0);
  if (!(p.traveling_fraction < 1.0)) throw ConfigError("field.traveling_fraction", "must be < 1");
  p.z_min_um = number(t, "field.z_min_um");
  p.z_max_um = number(t, "field.z_max_um");
  if (!(p.z_min_um < p.z_max_um)) throw ConfigError("field.z_max_um", "must exceed field.z_min_um");
  r.rabi_constants.g_sigma = at_least(t, "field.g_sigma", 0.0);

  const double i1 = at_least(t, "drive.current_1_a", 0.0);
  const double i2 = at_least(t, "drive.current_2_a", 0.0);
  const double f_mw = positive(t, "drive.omega_mw_ghz");
  r.drive = DriveSettings(i1, i2, number(t, "drive.phi_1_rad"), number(t, "drive.phi_2_rad"),
                          mhz_to_rad(f_mw * 1e3));

  r.system = HyperfineSystem::from_static_field(at_least(t, "ion.static_field_mt", 0.0));
  r.system.omega_hf = mhz_to_rad(positive(t, "ion.omega_hf_ghz") * 1e3);
  if (!lookup(t, "ion.delta_zeeman_mhz").is_null()) {
    r.system.delta_zeeman = mhz_to_rad(at_least(t, "ion.delta_zeeman_mhz", 0.0));
  }
  r.detuning = mhz_to_rad(number(t, "ion.detuning_mhz"));

  r.detection.p_dark_given_bright = probability(t, "detection.p_dark_given_bright");
  r.detection.p_bright_given_dark = probability(t, "detection.p_bright_given_dark");

  const std::string kind = text(t, "sequence.kind");
  const auto k = parse_sequence_kind(kind);
  if (!k) throw ConfigError("sequence.kind", "expected simple, sk1 or bb1, got " + kind);
  r.kind = *k;
  const double theta_over_pi = at_least(t, "sequence.theta_over_pi", 0.0);
  if (theta_over_pi > 4.0) throw ConfigError("sequence.theta_over_pi", "must be <= 4");
  r.theta = theta_over_pi * std::numbers::pi;
  r.phi = number(t, "sequence.phi");

  r.shots = static_cast<int>(integer(t, "noise.shots", 0));

  const std::string name(to_string(scenario_));
  r.block = t[name];
  // validate the scenario block's shape up front so run errors name the key
  for (const auto& [key, value] : r.block.items()) {
    const std::string path = name + "." + key;
    if (value.is_array()) {
      if (value.size() != 3 || !value[0].is_number() || !value[1].is_number() ||
          !value[2].is_number_integer() || value[2].get<long>() < 1 ||
          value[2].get<long>() > 1'000'000) {
        throw ConfigError(path, "expected [start, stop, points] with 1 <= points <= 1000000");
      }
    }
  }
  return r;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  if (!content.empty() && content.front() == '#') {
    std::istringstream lines(content);
    std::string line;
    const std::string tag = "# config: ";
    while (std::getline(lines, line) && !line.empty() && line.front() == '#') {
      if (line.rfind(tag, 0) == 0) {
        json j = json::parse(line.substr(tag.size()), nullptr, false);
        if (j.is_discarded()) throw ConfigError("<config header>", "malformed JSON");
        return j;
      }
    }
    throw ConfigError("<config header>", "no '# config:' line in " + path.string());
  }
  json j = json::parse(content, nullptr, false);
  if (j.is_discarded()) throw ConfigError("<config file>", "malformed JSON in " + path.string());
  return j;
}

}  // namespace mwion
