#include "mwion/pulses.hpp"

#include <algorithm>
#include <cmath>

namespace mwion {

std::string_view to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::simple:
      return "simple";
    case SequenceKind::sk1:
      return "sk1";
    case SequenceKind::bb1:
      return "bb1";
  }
  return "?";
}

std::optional<SequenceKind> parse_sequence_kind(std::string_view name) {
  for (const auto k : all_sequence_kinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

double analytic_infidelity(SequenceKind kind, double epsilon, double n) {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case SequenceKind::simple:
      return 1.0 - std::abs(std::cos(epsilon * pi * n / 2.0));
    case SequenceKind::sk1:
      return 15.0 / 128.0 * std::pow(pi, 4) * std::pow(epsilon, 4) * n;
    case SequenceKind::bb1:
      return 5.0 / 1024.0 * std::pow(pi, 6) * std::pow(epsilon, 6) * n;
  }
  return 0.0;
}

double analytic_fidelity(SequenceKind kind, double epsilon, double n) {
  if (n < 0.0) throw std::invalid_argument("analytic_fidelity: n must be >= 0");
  return std::clamp(1.0 - analytic_infidelity(kind, epsilon, n), 0.0, 1.0);
}

double repeated_gate_population(const PulseSequence<double>& seq, long n,
                                const FourLevelDrive& drive, double nominal_clock_rabi) {
  if (n < 0) throw std::invalid_argument("repeated_gate_population: n must be >= 0");
  if (!(nominal_clock_rabi > 0.0)) {
    throw std::invalid_argument("repeated_gate_population: nominal Rabi frequency must be > 0");
  }
  std::vector<HamiltonianSegment<double>> segments;
  segments.reserve(seq.pulses.size());
  for (const auto& p : seq.pulses) {
    FourLevelDrive d = drive;
    d.pulse_phase += p.phi;
    segments.push_back(rwa_hamiltonian(d, p.theta / nominal_clock_rabi));
  }
  const SmallMatrix<double> gate =
      propagate(std::span<const HamiltonianSegment<double>>(segments), 4).matrix();
  SmallVector<double> psi = hyperfine_ground_state().amplitudes();
  for (long k = 0; k < n; ++k) psi = (gate * psi).eval();
  return f1_population(StateVector<double>(psi));
}

double repeated_gate_population(SequenceKind kind, long n, const FourLevelDrive& drive,
                                double nominal_clock_rabi) {
  return repeated_gate_population(build_sequence(kind, std::numbers::pi, 0.0), n, drive,
                                  nominal_clock_rabi);
}

std::vector<double> excitation_profile(SequenceKind kind, std::span<const double> scales) {
  return excitation_profile(build_sequence(kind, std::numbers::pi, 0.0), scales);
}

std::vector<double> excitation_profile(const PulseSequence<double>& seq,
                                       std::span<const double> scales) {
  std::vector<double> out;
  out.reserve(scales.size());
  for (const double s : scales) {
    const Unitary<double> u = scaled_sequence_unitary(seq, s);
    out.push_back(std::norm(u(1, 0)));
  }
  return out;
}

ScalingFit scaling_order(SequenceKind kind, double eps_min, double eps_max, int points) {
  if (!(eps_min > 0.0 && eps_max > eps_min) || points < 2) {
    throw std::invalid_argument("scaling_order: need 0 < eps_min < eps_max and >= 2 points");
  }
  ScalingFit fit;
  const auto seq = build_sequence(kind, std::numbers::pi, 0.0);
  const Unitary<double> target = target_unitary(seq);
  const double step = std::log(eps_max / eps_min) / (points - 1);
  for (int k = 0; k < points; ++k) {
    const double eps = eps_min * std::exp(step * k);
    fit.epsilons.push_back(eps);
    fit.infidelities.push_back(
        gate_infidelity(sequence_unitary(seq, AmplitudeError<double>(eps)), target));
  }
  const double worst = *std::max_element(fit.infidelities.begin(), fit.infidelities.end());
  if (!(worst >= 1e-14)) {
    throw std::runtime_error("scaling_order: infidelity below 1e-14 across the range; raise eps_min");
  }
  Eigen::MatrixXd a(points, 2);
  Eigen::VectorXd y(points);
  for (int k = 0; k < points; ++k) {
    if (!(fit.infidelities[k] > 0.0)) {
      throw std::runtime_error("scaling_order: zero infidelity at eps = " +
                               std::to_string(fit.epsilons[k]) + "; raise eps_min");
    }
    a(k, 0) = 1.0;
    a(k, 1) = std::log10(fit.epsilons[k]);
    y(k) = std::log10(fit.infidelities[k]);
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
  fit.intercept = coef(0);
  fit.slope = coef(1);
  return fit;
}

}  // namespace mwion
