// Acceptance gate: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include "mwion/core.hpp"
#include "mwion/field.hpp"
#include "mwion/fit.hpp"
#include "mwion/ion.hpp"
#include "mwion/pulses.hpp"
#include "mwion/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mwion;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Table run(ScenarioId id, std::initializer_list<std::string> sets = {}, unsigned threads = 1,
          std::uint64_t seed = 0) {
  ScenarioConfig cfg(id);
  for (const auto& s : sets) cfg.set(s);
  cfg.set_seed(seed);
  return run_scenario(cfg, RunOptions{threads});
}

void fidelity_anchors(Outcome& o) {
  const auto start = Clock::now();
  const double eps = 0.06;
  const auto target = logical_x<double>();
  const auto gate = [&](SequenceKind k) {
    return sequence_unitary(build_sequence(k, pi, 0.0), AmplitudeError<double>(eps));
  };
  const double f_simple = gate_fidelity(gate(SequenceKind::simple), target);
  const double inf_sk1 = gate_infidelity(gate(SequenceKind::sk1), target);
  const double inf_bb1 = gate_infidelity(gate(SequenceKind::bb1), target);
  const double ms = elapsed_ms(start);
  o.detail << "F_simple=" << f_simple << " 1-F_sk1=" << inf_sk1 << " 1-F_bb1=" << inf_bb1
           << " (" << ms << " ms)";
  o.require(std::abs(f_simple - 0.9956) <= 5e-4, "F_simple = 0.9956 +- 5e-4");
  o.require(std::abs(inf_sk1 - 1.48e-4) <= 0.15 * 1.48e-4, "SK1 infidelity 1.48e-4 +- 15%");
  o.require(std::abs(inf_bb1 - 2.19e-7) <= 0.20 * 2.19e-7, "BB1 infidelity 2.19e-7 +- 20%");
  o.require(ms < 100.0, "runtime in milliseconds");
}

void scaling_exponents(Outcome& o) {
  const auto start = Clock::now();
  const double expected[] = {2.0, 4.0, 6.0};
  int i = 0;
  for (const auto k : all_sequence_kinds) {
    const double slope = scaling_order(k, 1e-3, 3e-2, 16).slope;
    o.detail << to_string(k) << "=" << slope << " ";
    o.require(std::abs(slope - expected[i]) <= 0.1, std::string(to_string(k)) + " slope");
    ++i;
  }
  const double ms = elapsed_ms(start);
  o.detail << "(" << ms << " ms)";
  o.require(ms < 1000.0, "runtime < 1 s");
}

void field_rabi_anchor(Outcome& o) {
  const TransitionRabis r = transition_rabi(PolarizationComponents{0.037, 0.0, 0.0});
  const double mhz = rad_to_mhz(r.clock);
  const double t_pi_us = pi / mhz_to_rad(0.49) * 1e6;
  o.detail << "0.037 mT -> " << mhz << " MHz; t_pi(0.49 MHz)=" << t_pi_us << " us";
  o.require(std::abs(mhz - 0.518) < 5e-4, "0.518 MHz");
  o.require(std::abs(mhz - 0.52) / 0.52 <= 0.01, "within 1% of 0.52 MHz");
  o.require(std::abs(t_pi_us - 1.02) < 5e-3, "t_pi = 1.02 us");
}

void polarization_suppression(Outcome& o) {
  const ModePair modes = default_modes();
  const RabiProfile profile = default_quadratic_profile();
  double worst = 0.0;
  for (double z = 0.0; z <= 2000.0; z += 50.0) {
    const TransitionRabis r = transition_rabi(z, DriveSettings::balanced(0.1, pi), modes, profile);
    worst = std::max({worst, r.sigma_plus / r.clock, r.sigma_minus / r.clock});
  }
  const Table sweep = run(ScenarioId::fig4b);
  const auto phi = sweep.column("phi_r_rad");
  const FitResult clock = fit_abs_sinusoid(phi, sweep.column("rabi_clock_mhz"));
  const FitResult sigma = fit_abs_sinusoid(phi, sweep.column("rabi_sigma_plus_mhz"));
  const TransitionRabis single = transition_rabi(957, DriveSettings::single(0.1), modes, profile);
  const double ratio = single.sigma_plus / single.clock;
  o.detail << "max sigma/clock=" << worst << " clock fit residual=" << clock.residual_norm
           << " phi0=" << clock.value("phase_offset") << " sigma fit residual="
           << sigma.residual_norm << " phi0=" << sigma.value("phase_offset")
           << " single ratio=" << ratio;
  o.require(worst < 1e-12, "sigma/clock < 1e-12");
  o.require(clock.residual_norm < 1e-10, "|sin| fit residual");
  o.require(std::abs(std::remainder(clock.value("phase_offset"), 2 * pi)) < 1e-8, "clock zero at 0");
  o.require(sigma.residual_norm < 1e-10, "|cos| fit residual");
  o.require(std::abs(sigma.value("phase_offset") - pi) < 1e-8, "sigma zero at pi");
  o.require(std::abs(ratio - 0.47) <= 0.02, "single-waveguide ratio 0.47 +- 0.02");
}

void axial_profile(Outcome& o) {
  const Table t = run(ScenarioId::fig5);
  const auto z = t.column("z_um");
  const auto y = t.column("rabi_mhz");
  const auto best = std::max_element(y.begin(), y.end()) - y.begin();
  const RabiProfile profile = default_quadratic_profile();
  const double eps300 = amplitude_error(300, profile);
  const FitResult f = fit_quadratic(z, y);
  o.detail << "peak z=" << z[best] << " um, " << y[best] << " MHz; eps(300)=" << eps300
           << "; fit z0=" << f.value("z0") << " peak=" << f.value("peak")
           << " curvature=" << f.value("curvature") << " residual=" << f.residual_norm;
  o.require(z[best] == 957.0, "peak at 957 um");
  o.require(std::abs(y[best] - 0.52) < 1e-6, "peak 0.52 MHz");
  o.require(std::abs(eps300 + 0.060) <= 0.002, "eps(300) = -0.060 +- 0.002");
  o.require(std::abs(f.value("z0") - 957.0) <= 1e-10 * 957.0, "fit z0");
  o.require(std::abs(f.value("peak") - 0.52) <= 1e-10 * 0.52, "fit peak");
  o.require(std::abs(f.value("curvature") - profile.curvature_per_um2) <=
                1e-10 * profile.curvature_per_um2,
            "fit curvature");
  o.require(f.residual_norm < 1e-10, "fit residual");
}

void sequential_gates(Outcome& o) {
  const Table simple = run(ScenarioId::fig7, {"fig7.z_um=[300,300,1]"});
  double worst_simple = 0.0;
  for (const auto& r : simple.rows) {
    worst_simple = std::max(worst_simple, std::abs(r[2] - std::pow(std::sin(r[1] * 0.94 * pi / 2), 2)));
  }
  o.detail << "simple max|P - sin^2|=" << worst_simple;
  o.require(worst_simple < 1e-12, "simple follows sin^2(n 0.94 pi / 2)");

  const double floor[] = {0.0, 1e-2, 1e-4};
  for (const auto k : {SequenceKind::sk1, SequenceKind::bb1}) {
    const Table t = run(ScenarioId::fig7, {"sequence.kind=\"" + std::string(to_string(k)) + "\""});
    double worst = 1.0, worst_z = 0.0;
    for (const auto& r : t.rows) {
      if (r[1] == 55.0 && r[2] < worst) {
        worst = r[2];
        worst_z = r[0];
      }
    }
    const double bound = 1.0 - floor[static_cast<int>(k)];
    o.detail << "; " << to_string(k) << " n=55 min P=" << worst << " at z=" << worst_z
             << " (need >= " << bound << ")";
    o.require(worst >= bound, std::string(to_string(k)) + " n=55 floor");
  }
}

void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    TransitionRabis r;
    r.clock = mhz_to_rad(1.0 + u(rng));
    r.phase_clock = pi * u(rng);
    const double det = mhz_to_rad(3.0 * u(rng));
    const double t = 4e-6 * (1.0 + u(rng));
    HyperfineSystem sys;
    sys.delta_zeeman = mhz_to_rad(10.0 + 5.0 * u(rng));
    const auto u4 = propagator(rwa_hamiltonian(r, det, sys, t));
    const auto u2 = propagator(clock_hamiltonian(r.clock, r.phase_clock, det, t));
    worst = std::max(worst, (qubit_block(u4) - u2.matrix()).cwiseAbs().maxCoeff());
  }
  o.detail << "max entrywise diff over 100 draws=" << worst;
  o.require(worst < 1e-12, "entrywise within 1e-12");
}

void determinism(Outcome& o) {
  int identical = 0, total = 0;
  for (const auto id : all_scenarios()) {
    for (const bool noisy : {false, true}) {
      const auto sets = noisy ? std::initializer_list<std::string>{"noise.shots=100"}
                              : std::initializer_list<std::string>{};
      const std::string a = to_csv(run(id, sets, 1, 17));
      const std::string b = to_csv(run(id, sets, 1, 17));
      const std::string c = to_csv(run(id, sets, 6, 17));
      ++total;
      if (a == b && a == c) ++identical;
    }
  }
  o.detail << identical << "/" << total << " scenario runs byte-identical";
  o.require(identical == total, "byte-identical reruns");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"fidelity anchors at eps = 0.06", fidelity_anchors},
      {"scaling exponents 2/4/6", scaling_exponents},
      {"field to Rabi anchor", field_rabi_anchor},
      {"polarization suppression", polarization_suppression},
      {"axial profile", axial_profile},
      {"sequential-gate experiment", sequential_gates},
      {"4-level / 2-level oracle equivalence", oracle_equivalence},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    o.detail.precision(10);
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
