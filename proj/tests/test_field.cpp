#include "doctest.h"

#include "mwion/field.hpp"
#include "mwion/fit.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace mwion;
using std::numbers::pi;

namespace {

const ModePair modes = default_modes();
const RabiProfile profile = default_quadratic_profile();

}  // namespace

TEST_CASE("drive settings") {
  const DriveSettings d(0.1, 0.2, -pi / 2, 5 * pi);
  CHECK(d.phi_1() == doctest::Approx(1.5 * pi));
  CHECK(d.phi_2() == doctest::Approx(pi));
  CHECK(d.relative_phase() == doctest::Approx(1.5 * pi));
  CHECK(d.omega_mw() == doctest::Approx(2 * pi * 12.64e9));
  CHECK(DriveSettings(0.1, 0.1, -1e-18, 0.0).phi_1() < constants::two_pi);
  CHECK_THROWS_AS(DriveSettings(-0.1, 0.1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(DriveSettings(0.1, 0.1, 0, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DriveSettings(0.1, 0.1, NAN, 0), std::invalid_argument);
}

TEST_CASE("balanced drive at the antinode cancels one field component") {
  const FieldPhasor opposed = superpose_field(957, DriveSettings::balanced(0.1, pi), modes, profile);
  // e^{i pi} is -1 + 1.2e-16 i in floating point
  CHECK(std::abs(opposed.bx) < 1e-15 * std::abs(opposed.by));
  CHECK(std::abs(opposed.by) == doctest::Approx(2 * 0.17 * 0.1).epsilon(1e-14));

  const FieldPhasor in_phase = superpose_field(957, DriveSettings::balanced(0.1, 0.0), modes, profile);
  CHECK(in_phase.by == std::complex<double>(0.0, 0.0));
  CHECK(std::abs(in_phase.bx) == doctest::Approx(2 * 0.08 * 0.1).epsilon(1e-14));
}

TEST_CASE("0.1 A per waveguide lies within 10% of the stated peak field") {
  const FieldPhasor b = superpose_field(957, DriveSettings::balanced(0.1, pi), modes, profile);
  CHECK(std::abs(b.by) == doctest::Approx(0.034).epsilon(1e-12));
  CHECK(std::abs(std::abs(b.by) - 0.037) / 0.037 < 0.10);
}

TEST_CASE("field outside the trap is rejected") {
  CHECK_THROWS_AS(superpose_field(-1, DriveSettings::single(0.1), modes, profile), std::out_of_range);
  CHECK_THROWS_AS(superpose_field(2001, DriveSettings::single(0.1), modes, profile), std::out_of_range);
}

TEST_CASE("polarization decomposition preserves power") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    const std::complex<double> bx{g(rng), g(rng)};
    const std::complex<double> by{g(rng), g(rng)};
    const auto p = polarization_components(bx, by);
    CHECK(p.power() == doctest::Approx(std::norm(bx) + std::norm(by)).epsilon(1e-12));
    CHECK(p.b_pi == by);
  }
}

TEST_CASE("field to Rabi frequency anchor") {
  PolarizationComponents pol{0.037, 0.0, 0.0};
  const TransitionRabis r = transition_rabi(pol);
  CHECK(rad_to_mhz(r.clock) == doctest::Approx(13.996 * 0.037).epsilon(1e-14));
  CHECK(std::abs(rad_to_mhz(r.clock) - 0.518) < 0.001);
  CHECK(std::abs(rad_to_mhz(r.clock) - 0.52) / 0.52 < 0.01);
}

TEST_CASE("single waveguide sigma to clock ratio is set by the mode coefficients") {
  const TransitionRabis r = transition_rabi(957, DriveSettings::single(0.1), modes, profile);
  CHECK(r.sigma_plus / r.clock == doctest::Approx(0.08 / 0.17).epsilon(1e-14));
  CHECK(r.sigma_minus == doctest::Approx(r.sigma_plus));
  CHECK(std::abs(r.sigma_plus / r.clock - 0.47) <= 0.02);
}

TEST_CASE("g_sigma scales only the sigma lines") {
  RabiConstants k;
  k.g_sigma = 0.5;
  const TransitionRabis a = transition_rabi(957, DriveSettings::single(0.1), modes, profile);
  const TransitionRabis b = transition_rabi(957, DriveSettings::single(0.1), modes, profile, k);
  CHECK(b.clock == a.clock);
  CHECK(b.sigma_plus == doctest::Approx(0.5 * a.sigma_plus));
}

TEST_CASE("balanced sweep: clock follows |sin(phi_r/2)|, sigma follows |cos(phi_r/2)|") {
  std::vector<double> phis, clock, sigma;
  for (int k = 0; k < 72; ++k) {
    const double phi = 2 * pi * k / 72;
    const TransitionRabis r = transition_rabi(957, DriveSettings::balanced(0.1, phi), modes, profile);
    phis.push_back(phi);
    clock.push_back(rad_to_mhz(r.clock));
    sigma.push_back(rad_to_mhz(r.sigma_plus));
    // closed forms: |B_y| = 2 beta_y I |sin|, |B_x| = 2 beta_x I |cos|
    CHECK(rad_to_mhz(r.clock) ==
          doctest::Approx(13.996 * 2 * 0.17 * 0.1 * std::abs(std::sin(phi / 2))).epsilon(1e-12));
    CHECK(rad_to_mhz(r.sigma_plus) ==
          doctest::Approx(13.996 * 2 * 0.08 * 0.1 * std::abs(std::cos(phi / 2))).epsilon(1e-12));
  }
  const FitResult fc = fit_abs_sinusoid(phis, clock);
  CHECK(fc.residual_norm < 1e-10);
  CHECK(std::abs(std::remainder(fc.value("phase_offset"), 2 * pi)) < 1e-8);
  const FitResult fs = fit_abs_sinusoid(phis, sigma);
  CHECK(fs.residual_norm < 1e-10);
  CHECK(fs.value("phase_offset") == doctest::Approx(pi).epsilon(1e-9));
}

TEST_CASE("sigma suppression at phi_r = pi") {
  for (const double z : {157.0, 300.0, 957.0, 1500.0}) {
    const TransitionRabis r = transition_rabi(z, DriveSettings::balanced(0.1, pi), modes, profile);
    CHECK(r.sigma_plus / r.clock < 1e-12);
    CHECK(r.sigma_minus / r.clock < 1e-12);
  }
}

TEST_CASE("axial profile calibration") {
  CHECK(axial_scale(957, profile) == 1.0);
  CHECK(profile.curvature_per_um2 == doctest::Approx(0.06 / (657.0 * 657.0)));
  CHECK(amplitude_error(300, profile) == doctest::Approx(-0.06).epsilon(1e-12));
  CHECK(amplitude_error(1614, profile) == doctest::Approx(-0.06).epsilon(1e-12));
  CHECK(rad_to_mhz(profile_rabi(957, profile)) == doctest::Approx(0.52).epsilon(1e-14));

  const RabiProfile cosine = default_cosine_profile();
  // cos(2 pi 657 / lambda) = 0.94, solved by bisection
  double lo = 5000, hi = 20000;
  for (int k = 0; k < 200; ++k) {
    const double mid = (lo + hi) / 2;
    (std::cos(2 * pi * 657 / mid) > 0.94 ? hi : lo) = mid;
  }
  CHECK(cosine.lambda_g_um == doctest::Approx(lo).epsilon(1e-9));
  CHECK(std::abs(cosine.lambda_g_um - 11850.0) < 50.0);
  CHECK(std::abs(axial_scale(300, cosine) - 0.94) < 1e-3);
}

TEST_CASE("profile shapes agree near the antinode and never exceed the peak") {
  const RabiProfile cosine = default_cosine_profile();
  for (double d = -700; d <= 700; d += 10) {
    const double z = 957 + d;
    if (z < 0) continue;
    const double q = axial_scale(z, profile);
    const double c = axial_scale(z, cosine);
    CHECK(std::abs(q - c) / q < 5e-3);
  }
  for (double z = 0; z <= 2000; z += 25) {
    CHECK(amplitude_error(z, profile) <= 0.0);
    CHECK(amplitude_error(z, cosine) <= 0.0);
  }
}

TEST_CASE("quadratic profile outside its validity range is rejected") {
  RabiProfile steep = profile;
  steep.curvature_per_um2 = 1e-5;
  CHECK_THROWS_AS(axial_scale(1900, steep), std::domain_error);
}

TEST_CASE("traveling-wave floor lifts the cosine nodes") {
  RabiProfile p = default_cosine_profile();
  p.traveling_fraction = 0.2;
  p.z_max_um = 1e5;
  const double node = 957 + p.lambda_g_um / 4;
  CHECK(axial_scale(node, p) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(axial_scale(957, p) == doctest::Approx(1.0));
}

TEST_CASE("profile validation") {
  RabiProfile p = profile;
  p.omega_max = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = profile;
  p.traveling_fraction = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_NOTHROW(profile.validate());
}

TEST_CASE("attenuation map") {
  CHECK(attenuation_to_rabi(0, 3.0) == 3.0);
  CHECK(attenuation_to_rabi(6.02, 1.0) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(attenuation_to_rabi(20, 1.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(attenuation_to_rabi(-1, 1.0), std::invalid_argument);
}

TEST_CASE("rescaling to a clock Rabi frequency keeps the polarization ratios") {
  const TransitionRabis r = transition_rabi(957, DriveSettings::single(0.1), modes, profile);
  const TransitionRabis s = r.rescaled_to_clock(mhz_to_rad(0.49));
  CHECK(s.clock == mhz_to_rad(0.49));
  CHECK(s.sigma_plus / s.clock == doctest::Approx(r.sigma_plus / r.clock));
  CHECK(s.phase_sigma_plus == r.phase_sigma_plus);
  CHECK_THROWS_AS(TransitionRabis{}.rescaled_to_clock(1.0), std::invalid_argument);
}
