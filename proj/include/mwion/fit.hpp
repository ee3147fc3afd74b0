#pragma once

// Least-squares fits used on scenario data: an axial parabola in vertex form
// and the magnitude of a half-angle sinusoid versus relative phase.

#include <span>
#include <string>
#include <vector>

namespace mwion {

struct FitParameter {
  std::string name;
  std::string unit;
  double value = 0.0;
  double variance = 0.0;  // covariance diagonal
};

struct FitResult {
  std::string model;
  std::vector<FitParameter> parameters;
  double residual_norm = 0.0;  // RMS residual, data units

  /// Throws std::out_of_range for an unknown name.
  const FitParameter& at(const std::string& name) const;
  double value(const std::string& name) const { return at(name).value; }
};

/// y = peak * (1 - curvature * (z - z0)^2). Parameters z0, peak and
/// curvature; the curvature is relative, like the profile's curvature_per_um2.
/// Throws std::invalid_argument on fewer than 3 distinct z or flat data.
FitResult fit_quadratic(std::span<const double> z, std::span<const double> y);

/// y = A |sin((phi - phi0) / 2)|, phi0 reported in [0, 2pi).
/// Throws std::invalid_argument on fewer than 4 samples, a phase span <= pi,
/// or zero amplitude.
FitResult fit_abs_sinusoid(std::span<const double> phi, std::span<const double> y);

}  // namespace mwion
