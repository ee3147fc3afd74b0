#pragma once

// 171Yb+ ground-manifold dynamics in the frame rotating at the drive
// frequency. Basis order is fixed: |F=0,0>, |F=1,-1>, |F=1,0>, |F=1,+1>.

#include "mwion/core.hpp"
#include "mwion/field.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mwion {

namespace level {
inline constexpr Eigen::Index down = 0;   // |F=0, m=0>
inline constexpr Eigen::Index minus = 1;  // |F=1, m=-1>
inline constexpr Eigen::Index up = 2;     // |F=1, m=0>
inline constexpr Eigen::Index plus = 3;   // |F=1, m=+1>
}  // namespace level

const std::vector<std::string>& hyperfine_labels();
StateVector<double> hyperfine_ground_state();

struct HyperfineSystem {
  double omega_hf = mhz_to_rad(constants::qubit_frequency_ghz * 1e3);
  double delta_zeeman = mhz_to_rad(constants::bohr_mhz_per_mt * 0.74);
  double static_field_mt = 0.74;

  /// Linear Zeeman splitting with g_F = 1.
  static HyperfineSystem from_static_field(double static_field_mt);
};

struct DetectionModel {
  double p_dark_given_bright = 0.0;
  double p_bright_given_dark = 0.0;

  void validate() const;
};

/// Drive conditions for one square pulse in the 4-level manifold.
struct FourLevelDrive {
  TransitionRabis rabis;
  double detuning = 0.0;     // rad/s, drive minus clock resonance
  double pulse_phase = 0.0;  // rad, added to every coupling phase
  HyperfineSystem system{};
};

/// Diagonal [0, -(D + dZ), -D, -(D - dZ)]; <F=1,m|H|F=0,0> = Omega_m e^{i phi_m}/2.
HamiltonianSegment<double> rwa_hamiltonian(const TransitionRabis& rabis, double detuning,
                                           const HyperfineSystem& system, double duration,
                                           double pulse_phase = 0.0);

HamiltonianSegment<double> rwa_hamiltonian(const FourLevelDrive& drive, double duration);

/// 2x2 generator of the isolated clock transition in the {|down>, |up>} basis;
/// equals the {0, 2} block of the 4-level generator.
HamiltonianSegment<double> clock_hamiltonian(double rabi, double phase, double detuning,
                                             double duration);

/// Total population in the F=1 manifold.
double f1_population(const StateVector<double>& psi);

/// F=1 population after a square pulse of each duration (s), starting in |down>.
std::vector<double> drive_scan(std::span<const double> durations, const FourLevelDrive& drive);

/// F=1 population vs detuning (rad/s) for a fixed square pulse. Without an
/// explicit pulse time the pi time of the strongest line is used.
std::vector<double> spectrum_scan(std::span<const double> detunings, const FourLevelDrive& drive,
                                  std::optional<double> pulse_time = std::nullopt);

/// Affine misclassification of a bright-state probability.
double apply_detection(double p_true, const DetectionModel& model);
/// Inverse of apply_detection; requires p_dark_given_bright + p_bright_given_dark < 1.
double invert_detection(double p_observed, const DetectionModel& model);

/// {|down>, |up>} block of a 4-level operator.
SmallMatrix<double> qubit_block(const Unitary<double>& u4);

/// |Tr(P U4 P^dagger V)| / 2 against a 2x2 target; leakage lowers it.
double qubit_block_fidelity(const Unitary<double>& u4, const Unitary<double>& target);

}  // namespace mwion
