#pragma once

// Amplitude-error-compensating composite pulses (SK1, BB1) on the clock
// qubit, their closed-form fidelity laws, and scaling-order checks.

#include "mwion/core.hpp"
#include "mwion/ion.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mwion {

enum class SequenceKind { simple, sk1, bb1 };

std::string_view to_string(SequenceKind kind);
std::optional<SequenceKind> parse_sequence_kind(std::string_view name);
inline constexpr SequenceKind all_sequence_kinds[] = {SequenceKind::simple, SequenceKind::sk1,
                                                      SequenceKind::bb1};

template <typename Scalar = double>
struct Pulse {
  Scalar theta;  // area, rad
  Scalar phi;    // drive phase, rad
};

template <typename Scalar = double>
struct PulseSequence {
  SequenceKind kind;
  std::vector<Pulse<Scalar>> pulses;  // time order, earliest first
  Scalar target_theta;
  Scalar target_phi;

  Scalar total_area() const {
    Scalar a(0);
    for (const auto& p : pulses) a += p.theta;
    return a;
  }
};

/// Fractional Rabi-frequency error; must exceed -1.
template <typename Scalar = double>
class AmplitudeError {
 public:
  explicit AmplitudeError(Scalar epsilon = Scalar(0)) : epsilon_(epsilon) {
    if (!(epsilon > Scalar(-1)) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("AmplitudeError: epsilon must be finite and > -1");
    }
  }
  Scalar epsilon() const { return epsilon_; }
  Scalar scale() const { return Scalar(1) + epsilon_; }

 private:
  Scalar epsilon_;
};

/// R(theta, phi) = exp[-i theta/2 (cos phi sigma_x + sin phi sigma_y)].
template <typename Scalar = double>
Unitary<Scalar> rotation(Scalar theta, Scalar phi) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  SmallMatrix<Scalar> u(2, 2);
  u(0, 0) = C(c);
  u(1, 1) = C(c);
  u(0, 1) = C(0, -1) * s * std::polar(Scalar(1), -phi);
  u(1, 0) = C(0, -1) * s * std::polar(Scalar(1), phi);
  return Unitary<Scalar>(std::move(u));
}

/// Correction phase arccos(-theta / 4pi) shared by SK1 and BB1.
template <typename Scalar = double>
Scalar correction_phase(Scalar theta) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return std::acos(-theta / (4 * pi));
}

/// SK1: target pulse, then 2pi at phi - phi1 and 2pi at phi + phi1.
/// BB1: pi, 2pi, pi corrections at phi + phi1, phi + 3 phi1, phi + phi1, then
/// the target pulse.
template <typename Scalar = double>
PulseSequence<Scalar> build_sequence(SequenceKind kind, Scalar theta, Scalar phi) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (!(theta >= Scalar(0)) || !std::isfinite(theta) || !std::isfinite(phi)) {
    throw std::invalid_argument("build_sequence: theta must be finite and >= 0");
  }
  if (theta > 4 * pi) {
    throw std::invalid_argument("build_sequence: theta > 4pi has no correction phase");
  }
  PulseSequence<Scalar> seq{kind, {}, theta, phi};
  const Scalar phi1 = correction_phase(theta);
  switch (kind) {
    case SequenceKind::simple:
      seq.pulses = {{theta, phi}};
      break;
    case SequenceKind::sk1:
      seq.pulses = {{theta, phi}, {2 * pi, phi - phi1}, {2 * pi, phi + phi1}};
      break;
    case SequenceKind::bb1:
      seq.pulses = {{pi, phi + phi1}, {2 * pi, phi + 3 * phi1}, {pi, phi + phi1}, {theta, phi}};
      break;
  }
  return seq;
}

/// Sequence unitary with every pulse area multiplied by `scale` (>= 0).
template <typename Scalar = double>
Unitary<Scalar> scaled_sequence_unitary(const PulseSequence<Scalar>& seq, Scalar scale) {
  if (!(scale >= Scalar(0))) throw std::invalid_argument("pulse-area scale must be >= 0");
  std::vector<Unitary<Scalar>> units;
  units.reserve(seq.pulses.size());
  for (const auto& p : seq.pulses) units.push_back(rotation(p.theta * scale, p.phi));
  return compose(std::span<const Unitary<Scalar>>(units));
}

/// Composition of R(theta_j (1 + eps), phi_j), earliest pulse first.
template <typename Scalar = double>
Unitary<Scalar> sequence_unitary(const PulseSequence<Scalar>& seq, AmplitudeError<Scalar> err) {
  return scaled_sequence_unitary(seq, err.scale());
}

template <typename Scalar = double>
Unitary<Scalar> target_unitary(const PulseSequence<Scalar>& seq) {
  return rotation(seq.target_theta, seq.target_phi);
}

template <typename Scalar = double>
Unitary<Scalar> logical_x() {
  return rotation(std::numbers::pi_v<Scalar>, Scalar(0));
}

/// Per-gate fidelity laws for n gates at fractional error eps, clamped to [0, 1]:
/// simple |cos(eps pi n / 2)|, SK1 1 - (15/128) pi^4 eps^4 n, BB1 1 - (5/1024) pi^6 eps^6 n.
double analytic_fidelity(SequenceKind kind, double epsilon, double n = 1.0);

/// Leading-order per-gate infidelity (unclamped), for log-log comparisons.
double analytic_infidelity(SequenceKind kind, double epsilon, double n = 1.0);

/// P(|up>) after n repetitions of the sequence from |down>.
template <typename Scalar = double>
Scalar repeated_gate_population(const PulseSequence<Scalar>& seq, long n, Scalar epsilon) {
  if (n < 0) throw std::invalid_argument("repeated_gate_population: n must be >= 0");
  const SmallMatrix<Scalar> gate =
      sequence_unitary(seq, AmplitudeError<Scalar>(epsilon)).matrix();
  SmallVector<Scalar> psi = SmallVector<Scalar>::Zero(2);
  psi(0) = Scalar(1);
  for (long k = 0; k < n; ++k) psi = (gate * psi).eval();
  return std::norm(psi(1));
}

/// Logical-X form: target R(pi, 0).
template <typename Scalar = double>
Scalar repeated_gate_population(SequenceKind kind, long n, Scalar epsilon) {
  return repeated_gate_population(
      build_sequence<Scalar>(kind, std::numbers::pi_v<Scalar>, Scalar(0)), n, epsilon);
}

/// 4-level variant: every pulse is a square pulse of the drive's couplings at
/// its own phase, lasting theta_j / nominal_clock_rabi. Off-resonant sigma
/// couplings and leakage are included.
double repeated_gate_population(const PulseSequence<double>& seq, long n,
                                const FourLevelDrive& drive, double nominal_clock_rabi);
double repeated_gate_population(SequenceKind kind, long n, const FourLevelDrive& drive,
                                double nominal_clock_rabi);

/// F=1 population after one sequence from |down> with all pulse areas scaled by s.
std::vector<double> excitation_profile(const PulseSequence<double>& seq,
                                       std::span<const double> scales);
/// Logical-X form.
std::vector<double> excitation_profile(SequenceKind kind, std::span<const double> scales);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;  // log10 infidelity at eps = 1
  std::vector<double> epsilons;
  std::vector<double> infidelities;
};

/// Log-log least-squares slope of per-gate infidelity vs eps over
/// log-spaced points in [eps_min, eps_max]. Throws std::runtime_error when
/// every infidelity lies below 1e-14.
ScalingFit scaling_order(SequenceKind kind, double eps_min = 1e-3, double eps_max = 3e-2,
                         int points = 16);

}  // namespace mwion
