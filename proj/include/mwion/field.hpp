#pragma once

// Near-field microwave model for a pair of waveguides: phasor superposition of
// the two guided-mode fields, the axial standing-wave profile, decomposition
// into pi/sigma polarization against a quantization axis along y, and the map
// from field components to transition Rabi frequencies.

#include <array>
#include <complex>
#include <numbers>

namespace mwion {

namespace constants {
inline constexpr double two_pi = 2.0 * std::numbers::pi;
/// mu_B / h in MHz per mT.
inline constexpr double bohr_mhz_per_mt = 13.996;
/// Angular Rabi frequency (rad/s) per mT of resonant field on the clock line.
inline constexpr double rabi_per_mt = two_pi * bohr_mhz_per_mt * 1e6;
inline constexpr double qubit_frequency_ghz = 12.64;
}  // namespace constants

inline constexpr double mhz_to_rad(double mhz) { return constants::two_pi * mhz * 1e6; }
inline constexpr double rad_to_mhz(double omega) { return omega / (constants::two_pi * 1e6); }

/// Field per unit current of one waveguide's guided mode (mT/A).
struct WaveguideMode {
  double beta_x = 0.08;
  double beta_y = 0.17;
};

using ModePair = std::array<WaveguideMode, 2>;

/// Symmetric pair: equal beta_x, beta_y sign-flipped between the guides.
inline ModePair default_modes() { return {WaveguideMode{0.08, 0.17}, WaveguideMode{0.08, -0.17}}; }

/// Peak currents, source phases, and the shared drive frequency. Phases are
/// stored reduced to [0, 2pi).
class DriveSettings {
 public:
  DriveSettings(double current_1, double current_2, double phi_1, double phi_2,
                double omega_mw = mhz_to_rad(constants::qubit_frequency_ghz * 1e3));

  static DriveSettings balanced(double current, double relative_phase);
  static DriveSettings single(double current);

  double current_1() const { return current_1_; }
  double current_2() const { return current_2_; }
  double phi_1() const { return phi_1_; }
  double phi_2() const { return phi_2_; }
  double omega_mw() const { return omega_mw_; }
  /// phi_2 - phi_1 reduced to [0, 2pi).
  double relative_phase() const;

 private:
  double current_1_;
  double current_2_;
  double phi_1_;
  double phi_2_;
  double omega_mw_;
};

/// Curvature c such that 1 - c d^2 = 1 - deviation at offset d.
double calibrated_curvature(double offset_um = 657.0, double deviation = 0.06);
/// Guided wavelength such that |cos(2 pi d / lambda_g)| = 1 - deviation at offset d.
double calibrated_wavelength(double offset_um = 657.0, double deviation = 0.06);

enum class ProfileShape { quadratic, cosine };

/// Axial Rabi-frequency model Omega(z) = omega_max * s(z).
struct RabiProfile {
  double z0_um = 957.0;
  double omega_max = mhz_to_rad(0.52);
  ProfileShape shape = ProfileShape::quadratic;
  double curvature_per_um2 = calibrated_curvature();
  double lambda_g_um = calibrated_wavelength();
  double traveling_fraction = 0.0;
  double z_min_um = 0.0;
  double z_max_um = 2000.0;

  /// Throws std::invalid_argument on unphysical parameters.
  void validate() const;
};

RabiProfile default_quadratic_profile();
RabiProfile default_cosine_profile();

/// Local current scale s(z), s(z0) = 1. Throws std::out_of_range outside the
/// trap extent, std::domain_error where the quadratic model goes non-positive.
double axial_scale(double z_um, const RabiProfile& profile);

/// Omega(z) = omega_max * s(z), rad/s.
double profile_rabi(double z_um, const RabiProfile& profile);

/// [Omega(z) - Omega(z0)] / Omega(z0).
double amplitude_error(double z_um, const RabiProfile& profile);

struct FieldPhasor {
  std::complex<double> bx;  // mT
  std::complex<double> by;  // mT
};

/// B_a(z) = sum_k beta_{a,k} I_k s(z) e^{i phi_k}; physical field Re[B e^{i w t}].
FieldPhasor superpose_field(double z_um, const DriveSettings& drive, const ModePair& modes,
                            const RabiProfile& profile);

struct PolarizationComponents {
  std::complex<double> b_pi;
  std::complex<double> b_sigma_plus;
  std::complex<double> b_sigma_minus;

  double power() const;
};

/// Quantization axis along y: b_pi = B_y, b_sigma_pm = (B_x -/+ i B_z)/sqrt(2), B_z = 0.
PolarizationComponents polarization_components(std::complex<double> bx, std::complex<double> by);

struct RabiConstants {
  double rabi_per_mt = constants::rabi_per_mt;
  /// Sigma-line strength relative to the clock line, referenced to the full
  /// transverse amplitude |B_x| (the sqrt(2) of the spherical basis is folded in).
  double g_sigma = 1.0;
};

/// Resonant Rabi frequencies (rad/s) and coupling phases of the three lines
/// leaving |F=0, m=0>.
struct TransitionRabis {
  double clock = 0.0;
  double sigma_plus = 0.0;
  double sigma_minus = 0.0;
  double phase_clock = 0.0;
  double phase_sigma_plus = 0.0;
  double phase_sigma_minus = 0.0;

  double strongest() const;
  /// Same polarization, clock line rescaled to `clock_rabi`.
  TransitionRabis rescaled_to_clock(double clock_rabi) const;
};

TransitionRabis transition_rabi(const PolarizationComponents& pol, const RabiConstants& k = {});

TransitionRabis transition_rabi(double z_um, const DriveSettings& drive, const ModePair& modes,
                                const RabiProfile& profile, const RabiConstants& k = {});

/// Linear-regime source attenuation map, Omega = Omega_ref 10^(-A/20).
double attenuation_to_rabi(double attenuation_db, double reference_rabi);

}  // namespace mwion
