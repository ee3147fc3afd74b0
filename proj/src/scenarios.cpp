#include "mwion/scenarios.hpp"

#include "mwion/fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace mwion {

using nlohmann::json;

namespace {

std::string block_key(const ResolvedConfig& cfg, const std::string& key) {
  return std::string(to_string(cfg.scenario)) + "." + key;
}

Grid grid_of(const ResolvedConfig& cfg, const std::string& key) {
  const json& v = cfg.block.at(key);
  if (!v.is_array()) throw ConfigError(block_key(cfg, key), "expected [start, stop, points]");
  return Grid{v[0].get<double>(), v[1].get<double>(), v[2].get<int>()};
}

double block_number(const ResolvedConfig& cfg, const std::string& key) {
  const json& v = cfg.block.at(key);
  if (!v.is_number()) throw ConfigError(block_key(cfg, key), "expected a number");
  return v.get<double>();
}

// Model range errors (z outside the trap, quadratic out of validity) become
// invalid-parameter errors naming the scenario key that produced them.
template <typename Fn>
auto with_key(const ResolvedConfig& cfg, const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const std::out_of_range& e) {
    throw ConfigError(block_key(cfg, key), e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(block_key(cfg, key), e.what());
  }
}

std::string fmt(double v) { return format_number(v); }

FourLevelDrive four_level(const ResolvedConfig& cfg, const TransitionRabis& rabis) {
  FourLevelDrive d;
  d.rabis = rabis;
  d.detuning = cfg.detuning;
  d.system = cfg.system;
  return d;
}

double observed(double p, const ResolvedConfig& cfg) {
  return apply_detection(std::clamp(p, 0.0, 1.0), cfg.detection);
}

void add_shot_noise(Table& t, const ResolvedConfig& cfg) {
  if (cfg.shots <= 0) return;
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c].rfind("p_", 0) == 0) cols.push_back(c);
  }
  std::mt19937_64 rng(cfg.seed);
  for (auto& row : t.rows) {
    for (const std::size_t c : cols) {
      std::binomial_distribution<int> draw(cfg.shots, std::clamp(row[c], 0.0, 1.0));
      row[c] = static_cast<double>(draw(rng)) / cfg.shots;
    }
  }
}

Table fig3b(const ResolvedConfig& cfg, const RunOptions& opt, std::vector<std::string>& notes) {
  const double z = block_number(cfg, "z_um");
  const TransitionRabis rabis =
      with_key(cfg, "z_um", [&] { return profile_calibrated_rabis(cfg, cfg.drive, z); });
  const FourLevelDrive drive = four_level(cfg, rabis);
  const std::vector<double> t_us = grid_of(cfg, "t_us").linear();
  Table t;
  t.rows.resize(t_us.size());
  parallel_for(t_us.size(), opt.threads, [&](std::size_t i) {
    const double dt = t_us[i] * 1e-6;
    t.rows[i] = {t_us[i], observed(drive_scan(std::span(&dt, 1), drive)[0], cfg)};
  });
  notes.push_back("clock_rabi_mhz=" + fmt(rad_to_mhz(rabis.clock)) +
                  " pi_time_us=" + fmt(std::numbers::pi / rabis.clock * 1e6));
  return t;
}

Table fig3c(const ResolvedConfig& cfg, const RunOptions& opt, std::vector<std::string>& notes) {
  const double z = block_number(cfg, "z_um");
  const json& single = cfg.block.at("single_waveguide");
  if (!single.is_boolean()) throw ConfigError(block_key(cfg, "single_waveguide"), "expected true or false");
  const DriveSettings drive =
      single.get<bool>() ? DriveSettings(cfg.drive.current_1(), 0.0, cfg.drive.phi_1(),
                                         cfg.drive.phi_2(), cfg.drive.omega_mw())
                         : cfg.drive;
  const TransitionRabis rabis =
      with_key(cfg, "z_um", [&] { return profile_calibrated_rabis(cfg, drive, z); });
  const FourLevelDrive fl = four_level(cfg, rabis);
  std::optional<double> pulse_time;
  const json& pt = cfg.block.at("pulse_time_us");
  if (!pt.is_null()) {
    if (!pt.is_number() || !(pt.get<double>() >= 0.0)) {
      throw ConfigError(block_key(cfg, "pulse_time_us"), "expected null or a number >= 0");
    }
    pulse_time = pt.get<double>() * 1e-6;
  }
  const double used = pulse_time ? *pulse_time : std::numbers::pi / rabis.strongest();
  const std::vector<double> det = grid_of(cfg, "detuning_mhz").linear();
  Table t;
  t.rows.resize(det.size());
  parallel_for(det.size(), opt.threads, [&](std::size_t i) {
    const double d = mhz_to_rad(det[i]);
    t.rows[i] = {det[i], observed(spectrum_scan(std::span(&d, 1), fl, pulse_time)[0], cfg)};
  });
  notes.push_back("pulse_time_us=" + fmt(used * 1e6) + " delta_zeeman_mhz=" +
                  fmt(rad_to_mhz(cfg.system.delta_zeeman)) + " rabi_mhz(clock,sigma+,sigma-)=" +
                  fmt(rad_to_mhz(rabis.clock)) + "," + fmt(rad_to_mhz(rabis.sigma_plus)) + "," +
                  fmt(rad_to_mhz(rabis.sigma_minus)));
  return t;
}

Table fig4b(const ResolvedConfig& cfg, const RunOptions& opt, std::vector<std::string>&) {
  const double z = block_number(cfg, "z_um");
  with_key(cfg, "z_um", [&] { return axial_scale(z, cfg.profile); });
  const std::vector<double> phases = grid_of(cfg, "phi_r_rad").linear();
  Table t;
  t.rows.resize(phases.size());
  parallel_for(phases.size(), opt.threads, [&](std::size_t i) {
    const DriveSettings d(cfg.drive.current_1(), cfg.drive.current_2(), cfg.drive.phi_1(),
                          cfg.drive.phi_1() + phases[i], cfg.drive.omega_mw());
    const TransitionRabis r = transition_rabi(z, d, cfg.modes, cfg.profile, cfg.rabi_constants);
    t.rows[i] = {phases[i], rad_to_mhz(r.clock), rad_to_mhz(r.sigma_plus),
                 rad_to_mhz(r.sigma_minus)};
  });
  return t;
}

Table fig5(const ResolvedConfig& cfg, const RunOptions&, std::vector<std::string>& notes) {
  const std::vector<double> z = grid_of(cfg, "z_um").linear();
  Table t;
  for (const double zi : z) {
    t.rows.push_back({zi, with_key(cfg, "z_um", [&] { return rad_to_mhz(profile_rabi(zi, cfg.profile)); })});
  }
  if (z.size() >= 3 && cfg.profile.shape == ProfileShape::quadratic) {
    std::vector<double> y;
    for (const auto& r : t.rows) y.push_back(r[1]);
    try {
      const FitResult f = fit_quadratic(z, y);
      notes.push_back("quadratic_fit z0_um=" + fmt(f.value("z0")) + " rabi_max_mhz=" +
                      fmt(f.value("peak")) + " curvature_per_um2=" + fmt(f.value("curvature")));
    } catch (const std::invalid_argument&) {
      // flat profile: nothing to report
    }
  }
  return t;
}

Table fig6(const ResolvedConfig& cfg, const RunOptions& opt, std::vector<std::string>&) {
  const std::vector<double> s = grid_of(cfg, "scale").linear();
  for (const double v : s) {
    if (!(v >= 0.0)) throw ConfigError(block_key(cfg, "scale"), "scales must be >= 0");
  }
  Table t;
  t.rows.resize(s.size());
  parallel_for(s.size(), opt.threads, [&](std::size_t i) {
    std::vector<double> row{s[i]};
    for (const auto k : all_sequence_kinds) {
      const auto seq = build_sequence(k, cfg.theta, cfg.phi);
      row.push_back(observed(excitation_profile(seq, std::span(&s[i], 1))[0], cfg));
    }
    t.rows[i] = std::move(row);
  });
  return t;
}

Table fig7(const ResolvedConfig& cfg, const RunOptions& opt, std::vector<std::string>& notes) {
  const std::vector<double> z = grid_of(cfg, "z_um").linear();
  const json& nmax_j = cfg.block.at("n_max");
  if (!nmax_j.is_number_integer() || nmax_j.get<long>() < 0 || nmax_j.get<long>() > 100000) {
    throw ConfigError(block_key(cfg, "n_max"), "expected an integer in [0, 100000]");
  }
  const long n_max = nmax_j.get<long>();
  const json& fl_j = cfg.block.at("four_level");
  if (!fl_j.is_boolean()) throw ConfigError(block_key(cfg, "four_level"), "expected true or false");
  const bool use_four_level = fl_j.get<bool>();
  const auto seq = build_sequence(cfg.kind, cfg.theta, cfg.phi);

  std::vector<double> eps(z.size());
  std::vector<TransitionRabis> rabis(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    eps[i] = with_key(cfg, "z_um", [&] { return amplitude_error(z[i], cfg.profile); });
    if (use_four_level) {
      rabis[i] = with_key(cfg, "z_um", [&] { return profile_calibrated_rabis(cfg, cfg.drive, z[i]); });
    }
  }
  const std::size_t per_z = static_cast<std::size_t>(n_max) + 1;
  Table t;
  t.rows.resize(z.size() * per_z);
  parallel_for(t.rows.size(), opt.threads, [&](std::size_t idx) {
    const std::size_t i = idx / per_z;
    const long n = static_cast<long>(idx % per_z);
    const double p = use_four_level
                         ? repeated_gate_population(seq, n, four_level(cfg, rabis[i]),
                                                    cfg.profile.omega_max)
                         : repeated_gate_population(seq, n, eps[i]);
    t.rows[idx] = {z[i], static_cast<double>(n), observed(p, cfg)};
  });
  notes.push_back("kind=" + std::string(to_string(cfg.kind)) +
                  (use_four_level ? " model=four-level" : " model=qubit"));
  return t;
}

Table scaling(const ResolvedConfig& cfg, const RunOptions&, std::vector<std::string>& notes) {
  const Grid g = grid_of(cfg, "epsilon");
  if (!(g.start > 0.0 && g.stop > g.start) || g.points < 2) {
    throw ConfigError(block_key(cfg, "epsilon"), "expected 0 < start < stop and points >= 2");
  }
  std::map<SequenceKind, ScalingFit> fits;
  for (const auto k : all_sequence_kinds) {
    try {
      fits[k] = scaling_order(k, g.start, g.stop, g.points);
    } catch (const std::runtime_error& e) {
      throw ConfigError(block_key(cfg, "epsilon"), e.what());
    }
  }
  Table t;
  const std::vector<double> eps = fits[SequenceKind::simple].epsilons;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::vector<double> row{eps[i]};
    for (const auto k : all_sequence_kinds) row.push_back(fits[k].infidelities[i]);
    for (const auto k : all_sequence_kinds) row.push_back(analytic_infidelity(k, eps[i]));
    t.rows.push_back(std::move(row));
  }
  std::string s = "loglog_slope";
  for (const auto k : all_sequence_kinds) {
    s += " " + std::string(to_string(k)) + "=" + fmt(fits[k].slope);
  }
  notes.push_back(s);
  return t;
}

}  // namespace

const std::vector<std::string>& scenario_columns(ScenarioId id) {
  static const std::map<ScenarioId, std::vector<std::string>> schemas{
      {ScenarioId::fig3b, {"t_us", "p_f1"}},
      {ScenarioId::fig3c, {"detuning_mhz", "p_f1"}},
      {ScenarioId::fig4b,
       {"phi_r_rad", "rabi_clock_mhz", "rabi_sigma_plus_mhz", "rabi_sigma_minus_mhz"}},
      {ScenarioId::fig5, {"z_um", "rabi_mhz"}},
      {ScenarioId::fig6, {"scale", "p_simple", "p_sk1", "p_bb1"}},
      {ScenarioId::fig7, {"z_um", "n", "p_f1"}},
      {ScenarioId::scaling_check,
       {"epsilon", "infidelity_simple", "infidelity_sk1", "infidelity_bb1", "analytic_simple",
        "analytic_sk1", "analytic_bb1"}},
  };
  return schemas.at(id);
}

TransitionRabis profile_calibrated_rabis(const ResolvedConfig& cfg, const DriveSettings& drive,
                                         double z_um) {
  const TransitionRabis field =
      transition_rabi(z_um, drive, cfg.modes, cfg.profile, cfg.rabi_constants);
  if (!(field.clock > 0.0)) {
    throw ConfigError("drive", "drive produces no pi-polarized field at z = " + fmt(z_um) +
                                   " um; the clock Rabi frequency cannot be set");
  }
  return field.rescaled_to_clock(profile_rabi(z_um, cfg.profile));
}

Table run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const ResolvedConfig cfg = config.resolve();
  std::vector<std::string> notes;
  Table t;
  switch (cfg.scenario) {
    case ScenarioId::fig3b:
      t = fig3b(cfg, options, notes);
      break;
    case ScenarioId::fig3c:
      t = fig3c(cfg, options, notes);
      break;
    case ScenarioId::fig4b:
      t = fig4b(cfg, options, notes);
      break;
    case ScenarioId::fig5:
      t = fig5(cfg, options, notes);
      break;
    case ScenarioId::fig6:
      t = fig6(cfg, options, notes);
      break;
    case ScenarioId::fig7:
      t = fig7(cfg, options, notes);
      break;
    case ScenarioId::scaling_check:
      t = scaling(cfg, options, notes);
      break;
  }
  const std::size_t keys = cfg.scenario == ScenarioId::fig7 ? 2 : 1;
  std::stable_sort(t.rows.begin(), t.rows.end(), [keys](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.begin() + keys, b.begin(), b.begin() + keys);
  });
  t.columns = scenario_columns(cfg.scenario);
  add_shot_noise(t, cfg);

  const json tree = config.resolved_tree();
  t.comments.push_back("mwsim scenario " + std::string(to_string(cfg.scenario)));
  t.comments.push_back("config: " + tree.dump());
  if (tree["ion"]["delta_zeeman_mhz"].is_null()) {
    t.comments.push_back("assumed: delta_zeeman_mhz=" + fmt(rad_to_mhz(cfg.system.delta_zeeman)) +
                         " derived from static_field_mt with g_F=1");
  }
  t.comments.push_back("assumed: detection p_dark_given_bright=" +
                       fmt(cfg.detection.p_dark_given_bright) +
                       " p_bright_given_dark=" + fmt(cfg.detection.p_bright_given_dark));
  for (auto& n : notes) t.comments.push_back("note: " + n);
  return t;
}

}  // namespace mwion
