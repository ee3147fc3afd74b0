#include "mwion/ion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mwion {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("rwa_hamiltonian: non-finite ") + what);
  }
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

}  // namespace

const std::vector<std::string>& hyperfine_labels() {
  static const std::vector<std::string> labels{"F=0,m=0", "F=1,m=-1", "F=1,m=0", "F=1,m=+1"};
  return labels;
}

StateVector<double> hyperfine_ground_state() {
  return StateVector<double>::basis(4, level::down, hyperfine_labels());
}

HyperfineSystem HyperfineSystem::from_static_field(double static_field_mt) {
  if (!(static_field_mt >= 0.0)) {
    throw std::invalid_argument("static field must be >= 0 mT");
  }
  HyperfineSystem s;
  s.static_field_mt = static_field_mt;
  s.delta_zeeman = mhz_to_rad(constants::bohr_mhz_per_mt * static_field_mt);
  return s;
}

void DetectionModel::validate() const {
  require_probability(p_dark_given_bright, "p_dark_given_bright");
  require_probability(p_bright_given_dark, "p_bright_given_dark");
}

HamiltonianSegment<double> rwa_hamiltonian(const TransitionRabis& rabis, double detuning,
                                           const HyperfineSystem& system, double duration,
                                           double pulse_phase) {
  require_finite(rabis.clock, "clock Rabi frequency");
  require_finite(rabis.sigma_plus, "sigma+ Rabi frequency");
  require_finite(rabis.sigma_minus, "sigma- Rabi frequency");
  require_finite(rabis.phase_clock + rabis.phase_sigma_plus + rabis.phase_sigma_minus, "phase");
  require_finite(detuning, "detuning");
  require_finite(system.delta_zeeman, "Zeeman splitting");
  require_finite(pulse_phase, "pulse phase");

  const double dz = system.delta_zeeman;
  SmallMatrix<double> h = SmallMatrix<double>::Zero(4, 4);
  h(level::minus, level::minus) = -(detuning + dz);
  h(level::up, level::up) = -detuning;
  h(level::plus, level::plus) = -(detuning - dz);

  auto couple = [&](Eigen::Index m, double rabi, double phase) {
    const std::complex<double> c = std::polar(rabi / 2.0, phase + pulse_phase);
    h(m, level::down) = c;
    h(level::down, m) = std::conj(c);
  };
  couple(level::up, rabis.clock, rabis.phase_clock);
  couple(level::plus, rabis.sigma_plus, rabis.phase_sigma_plus);
  couple(level::minus, rabis.sigma_minus, rabis.phase_sigma_minus);
  return HamiltonianSegment<double>(std::move(h), duration);
}

HamiltonianSegment<double> rwa_hamiltonian(const FourLevelDrive& drive, double duration) {
  return rwa_hamiltonian(drive.rabis, drive.detuning, drive.system, duration, drive.pulse_phase);
}

HamiltonianSegment<double> clock_hamiltonian(double rabi, double phase, double detuning,
                                             double duration) {
  SmallMatrix<double> h = SmallMatrix<double>::Zero(2, 2);
  const std::complex<double> c = std::polar(rabi / 2.0, phase);
  h(1, 0) = c;
  h(0, 1) = std::conj(c);
  h(1, 1) = -detuning;
  return HamiltonianSegment<double>(std::move(h), duration);
}

double f1_population(const StateVector<double>& psi) {
  if (psi.dim() != 4) throw std::invalid_argument("f1_population: expects a 4-level state");
  const double p = psi.population(level::minus) + psi.population(level::up) +
                   psi.population(level::plus);
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> drive_scan(std::span<const double> durations, const FourLevelDrive& drive) {
  std::vector<double> out;
  out.reserve(durations.size());
  const StateVector<double> psi0 = hyperfine_ground_state();
  for (const double t : durations) {
    const std::vector<HamiltonianSegment<double>> seg{rwa_hamiltonian(drive, t)};
    out.push_back(f1_population(evolve_piecewise(seg, psi0)));
  }
  return out;
}

std::vector<double> spectrum_scan(std::span<const double> detunings, const FourLevelDrive& drive,
                                  std::optional<double> pulse_time) {
  const double strongest = drive.rabis.strongest();
  double t = 0.0;
  if (pulse_time) {
    t = *pulse_time;
  } else if (strongest > 0.0) {
    t = std::numbers::pi / strongest;
  }
  std::vector<double> out;
  out.reserve(detunings.size());
  const StateVector<double> psi0 = hyperfine_ground_state();
  FourLevelDrive d = drive;
  for (const double delta : detunings) {
    d.detuning = delta;
    const std::vector<HamiltonianSegment<double>> seg{rwa_hamiltonian(d, t)};
    out.push_back(f1_population(evolve_piecewise(seg, psi0)));
  }
  return out;
}

double apply_detection(double p_true, const DetectionModel& model) {
  require_probability(p_true, "p_true");
  model.validate();
  return p_true * (1.0 - model.p_dark_given_bright) + (1.0 - p_true) * model.p_bright_given_dark;
}

double invert_detection(double p_observed, const DetectionModel& model) {
  model.validate();
  const double contrast = 1.0 - model.p_dark_given_bright - model.p_bright_given_dark;
  if (!(contrast > 0.0)) {
    throw std::invalid_argument("invert_detection: map is not invertible (error sum >= 1)");
  }
  return (p_observed - model.p_bright_given_dark) / contrast;
}

SmallMatrix<double> qubit_block(const Unitary<double>& u4) {
  if (u4.dim() != 4) throw std::invalid_argument("qubit_block: expects a 4x4 operator");
  SmallMatrix<double> b(2, 2);
  const Eigen::Index idx[2] = {level::down, level::up};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) b(r, c) = u4(idx[r], idx[c]);
  }
  return b;
}

double qubit_block_fidelity(const Unitary<double>& u4, const Unitary<double>& target) {
  if (target.dim() != 2) throw std::invalid_argument("qubit_block_fidelity: target must be 2x2");
  const SmallMatrix<double> b = qubit_block(u4);
  return std::min(std::abs((b.adjoint() * target.matrix()).trace()) / 2.0, 1.0);
}

}  // namespace mwion
