#include "mwion/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mwion {

namespace {

double wrap_phase(double phi) {
  if (!std::isfinite(phi)) throw std::invalid_argument("DriveSettings: non-finite phase");
  double r = std::fmod(phi, constants::two_pi);
  if (r < 0.0) r += constants::two_pi;
  // fmod of a value just below 2pi can round up to exactly 2pi
  return r >= constants::two_pi ? 0.0 : r;
}

std::string num(double v) { return std::to_string(v); }

}  // namespace

DriveSettings::DriveSettings(double current_1, double current_2, double phi_1, double phi_2,
                             double omega_mw)
    : current_1_(current_1),
      current_2_(current_2),
      phi_1_(wrap_phase(phi_1)),
      phi_2_(wrap_phase(phi_2)),
      omega_mw_(omega_mw) {
  if (!(current_1 >= 0.0) || !(current_2 >= 0.0) || !std::isfinite(current_1) ||
      !std::isfinite(current_2)) {
    throw std::invalid_argument("DriveSettings: currents must be finite and >= 0");
  }
  if (!(omega_mw > 0.0) || !std::isfinite(omega_mw)) {
    throw std::invalid_argument("DriveSettings: drive frequency must be positive");
  }
}

DriveSettings DriveSettings::balanced(double current, double relative_phase) {
  return DriveSettings(current, current, 0.0, relative_phase);
}

DriveSettings DriveSettings::single(double current) { return DriveSettings(current, 0.0, 0.0, 0.0); }

double DriveSettings::relative_phase() const { return wrap_phase(phi_2_ - phi_1_); }

void RabiProfile::validate() const {
  if (!std::isfinite(z0_um)) throw std::invalid_argument("RabiProfile: z0 must be finite");
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw std::invalid_argument("RabiProfile: omega_max must be positive, got " + num(omega_max));
  }
  if (!(z_min_um < z_max_um)) throw std::invalid_argument("RabiProfile: empty trap extent");
  if (!(traveling_fraction >= 0.0 && traveling_fraction < 1.0)) {
    throw std::invalid_argument("RabiProfile: traveling_fraction must lie in [0, 1)");
  }
  if (shape == ProfileShape::quadratic && !(curvature_per_um2 >= 0.0)) {
    throw std::invalid_argument("RabiProfile: curvature must be >= 0");
  }
  if (shape == ProfileShape::cosine && !(lambda_g_um > 0.0)) {
    throw std::invalid_argument("RabiProfile: guided wavelength must be positive");
  }
}

double calibrated_curvature(double offset_um, double deviation) {
  return deviation / (offset_um * offset_um);
}

double calibrated_wavelength(double offset_um, double deviation) {
  return constants::two_pi * offset_um / std::acos(1.0 - deviation);
}

RabiProfile default_quadratic_profile() { return RabiProfile{}; }

RabiProfile default_cosine_profile() {
  RabiProfile p = default_quadratic_profile();
  p.shape = ProfileShape::cosine;
  return p;
}

double axial_scale(double z_um, const RabiProfile& profile) {
  if (!(z_um >= profile.z_min_um && z_um <= profile.z_max_um)) {
    throw std::out_of_range("z = " + num(z_um) + " um outside trap extent [" +
                            num(profile.z_min_um) + ", " + num(profile.z_max_um) + "] um");
  }
  const double d = z_um - profile.z0_um;
  if (profile.shape == ProfileShape::quadratic) {
    const double s = 1.0 - profile.curvature_per_um2 * d * d;
    if (!(s > 0.0)) {
      throw std::domain_error("quadratic profile non-positive at z = " + num(z_um) +
                              " um; outside model validity");
    }
    return s;
  }
  const double f = profile.traveling_fraction;
  return (1.0 - f) * std::abs(std::cos(constants::two_pi * d / profile.lambda_g_um)) + f;
}

double profile_rabi(double z_um, const RabiProfile& profile) {
  return profile.omega_max * axial_scale(z_um, profile);
}

double amplitude_error(double z_um, const RabiProfile& profile) {
  return axial_scale(z_um, profile) - 1.0;
}

FieldPhasor superpose_field(double z_um, const DriveSettings& drive, const ModePair& modes,
                            const RabiProfile& profile) {
  const double s = axial_scale(z_um, profile);
  const std::complex<double> i1 = std::polar(drive.current_1() * s, drive.phi_1());
  const std::complex<double> i2 = std::polar(drive.current_2() * s, drive.phi_2());
  return {modes[0].beta_x * i1 + modes[1].beta_x * i2, modes[0].beta_y * i1 + modes[1].beta_y * i2};
}

double PolarizationComponents::power() const {
  return std::norm(b_pi) + std::norm(b_sigma_plus) + std::norm(b_sigma_minus);
}

PolarizationComponents polarization_components(std::complex<double> bx, std::complex<double> by) {
  const std::complex<double> bz{0.0, 0.0};
  const std::complex<double> i{0.0, 1.0};
  return {by, (bx - i * bz) / std::numbers::sqrt2, (bx + i * bz) / std::numbers::sqrt2};
}

double TransitionRabis::strongest() const { return std::max({clock, sigma_plus, sigma_minus}); }

TransitionRabis TransitionRabis::rescaled_to_clock(double clock_rabi) const {
  if (!(clock > 0.0)) {
    throw std::invalid_argument("rescaled_to_clock: clock line has zero coupling");
  }
  const double r = clock_rabi / clock;
  TransitionRabis out = *this;
  out.clock = clock_rabi;
  out.sigma_plus *= r;
  out.sigma_minus *= r;
  return out;
}

TransitionRabis transition_rabi(const PolarizationComponents& pol, const RabiConstants& k) {
  const double sigma_scale = k.rabi_per_mt * k.g_sigma * std::numbers::sqrt2;
  TransitionRabis r;
  r.clock = k.rabi_per_mt * std::abs(pol.b_pi);
  r.sigma_plus = sigma_scale * std::abs(pol.b_sigma_plus);
  r.sigma_minus = sigma_scale * std::abs(pol.b_sigma_minus);
  r.phase_clock = std::arg(pol.b_pi);
  r.phase_sigma_plus = std::arg(pol.b_sigma_plus);
  r.phase_sigma_minus = std::arg(pol.b_sigma_minus);
  return r;
}

TransitionRabis transition_rabi(double z_um, const DriveSettings& drive, const ModePair& modes,
                                const RabiProfile& profile, const RabiConstants& k) {
  const FieldPhasor b = superpose_field(z_um, drive, modes, profile);
  return transition_rabi(polarization_components(b.bx, b.by), k);
}

double attenuation_to_rabi(double attenuation_db, double reference_rabi) {
  if (!(attenuation_db >= 0.0)) {
    throw std::invalid_argument("attenuation must be >= 0 dB");
  }
  return reference_rabi * std::pow(10.0, -attenuation_db / 20.0);
}

}  // namespace mwion
