#include "mwion/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace mwion {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_same_size(std::span<const double> x, std::span<const double> y, const char* who) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(who) + ": x and y differ in length");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument(std::string(who) + ": non-finite sample at row " +
                                  std::to_string(i));
    }
  }
}

double rms(const Eigen::VectorXd& r) { return r.size() ? std::sqrt(r.squaredNorm() / r.size()) : 0.0; }

double residual_variance(const Eigen::VectorXd& r, Eigen::Index params) {
  const Eigen::Index dof = r.size() - params;
  return dof > 0 ? r.squaredNorm() / static_cast<double>(dof) : 0.0;
}

}  // namespace

const FitParameter& FitResult::at(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("FitResult: no parameter named " + name);
}

FitResult fit_quadratic(std::span<const double> z, std::span<const double> y) {
  require_same_size(z, y, "fit_quadratic");
  if (std::set<double>(z.begin(), z.end()).size() < 3) {
    throw std::invalid_argument("fit_quadratic: need at least 3 distinct z values");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(z.size());
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), n);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

  // centred, unit-scaled abscissa keeps the Vandermonde system well conditioned
  const double zc = zv.mean();
  const double h = (zv.array() - zc).abs().maxCoeff();
  const Eigen::ArrayXd u = (zv.array() - zc) / h;
  Eigen::MatrixXd a(n, 3);
  a.col(0).setOnes();
  a.col(1) = u.matrix();
  a.col(2) = u.square().matrix();
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(yv);
  const double c0 = coef(0), c1 = coef(1), c2 = coef(2);

  const double scale = std::max(yv.cwiseAbs().maxCoeff(), 1e-300);
  if (!(std::abs(c2) > 1e-10 * scale)) {
    throw std::invalid_argument("fit_quadratic: data has no curvature; vertex undefined");
  }
  const double u0 = -c1 / (2.0 * c2);
  const double peak = c0 - c1 * c1 / (4.0 * c2);
  if (peak == 0.0) throw std::invalid_argument("fit_quadratic: vertex value is zero");
  const double z0 = zc + h * u0;
  const double curvature = -c2 / (peak * h * h);

  const Eigen::VectorXd r = yv - a * coef;
  const double s2 = residual_variance(r, 3);
  const Eigen::Matrix3d cov = s2 * (a.transpose() * a).inverse();

  // delta-method propagation from (c0, c1, c2) to (z0, peak, curvature)
  Eigen::Matrix3d jac;
  jac.row(0) << 0.0, -h / (2.0 * c2), h * c1 / (2.0 * c2 * c2);
  jac.row(1) << 1.0, -c1 / (2.0 * c2), c1 * c1 / (4.0 * c2 * c2);
  const double k = 1.0 / (h * h * peak);
  jac.row(2) = (c2 * k / peak) * jac.row(1);
  jac(2, 2) += -k;
  const Eigen::Matrix3d pcov = jac * cov * jac.transpose();

  FitResult out;
  out.model = "quadratic";
  out.parameters = {{"z0", "x", z0, pcov(0, 0)},
                    {"peak", "y", peak, pcov(1, 1)},
                    {"curvature", "1/x^2", curvature, pcov(2, 2)}};
  out.residual_norm = rms(r);
  return out;
}

FitResult fit_abs_sinusoid(std::span<const double> phi, std::span<const double> y) {
  require_same_size(phi, y, "fit_abs_sinusoid");
  if (phi.size() < 4) throw std::invalid_argument("fit_abs_sinusoid: need at least 4 samples");
  const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
  if (!(*hi - *lo > std::numbers::pi)) {
    throw std::invalid_argument("fit_abs_sinusoid: phase samples must span more than pi");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(phi.size());
  const Eigen::Map<const Eigen::ArrayXd> ph(phi.data(), n);
  const Eigen::Map<const Eigen::ArrayXd> yv(y.data(), n);
  if (!(yv.abs().maxCoeff() > 0.0)) {
    throw std::invalid_argument("fit_abs_sinusoid: zero-amplitude data");
  }

  auto basis = [&](double phi0) { return ((ph - phi0) / 2.0).sin().abs().eval(); };
  auto best_amplitude = [&](const Eigen::ArrayXd& g) {
    const double gg = g.square().sum();
    return gg > 0.0 ? (g * yv).sum() / gg : 0.0;
  };
  auto ssr = [&](double amp, double phi0) { return (yv - amp * basis(phi0)).square().sum(); };

  // coarse scan for the basin, then Gauss-Newton on (A, phi0)
  constexpr int grid = 3600;
  double phi0 = 0.0;
  double amp = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double p = two_pi * i / grid;
    const double a = best_amplitude(basis(p));
    const double s = ssr(a, p);
    if (s < best) {
      best = s;
      phi0 = p;
      amp = a;
    }
  }

  auto jacobian = [&](double a, double p) {
    const Eigen::ArrayXd x = (ph - p) / 2.0;
    const Eigen::ArrayXd sgn = x.sin().sign();
    Eigen::MatrixXd j(n, 2);
    j.col(0) = x.sin().abs().matrix();
    j.col(1) = (-a * sgn * x.cos() / 2.0).matrix();
    return j;
  };

  for (int it = 0; it < 100; ++it) {
    const Eigen::MatrixXd j = jacobian(amp, phi0);
    const Eigen::VectorXd r = (yv - amp * basis(phi0)).matrix();
    const Eigen::Vector2d step = j.colPivHouseholderQr().solve(r);
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h < 40; ++h) {
      const double na = amp + lambda * step(0);
      const double np = phi0 + lambda * step(1);
      const double s = ssr(na, np);
      if (s <= best) {
        improved = s < best;
        best = s;
        amp = na;
        phi0 = np;
        break;
      }
      lambda /= 2.0;
    }
    if (!improved || step.norm() < 1e-16 * (1.0 + std::abs(amp))) break;
  }

  if (!(amp > 0.0)) {
    throw std::invalid_argument("fit_abs_sinusoid: fitted amplitude is not positive");
  }
  phi0 = std::fmod(phi0, two_pi);
  if (phi0 < 0.0) phi0 += two_pi;
  if (two_pi - phi0 < 1e-12) phi0 = 0.0;

  const Eigen::VectorXd r = (yv - amp * basis(phi0)).matrix();
  const Eigen::MatrixXd j = jacobian(amp, phi0);
  const Eigen::Matrix2d jtj = j.transpose() * j;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  if (std::abs(jtj.determinant()) > 0.0) cov = residual_variance(r, 2) * jtj.inverse();

  FitResult out;
  out.model = "abs-sinusoid";
  out.parameters = {{"amplitude", "y", amp, cov(0, 0)}, {"phase_offset", "rad", phi0, cov(1, 1)}};
  out.residual_norm = rms(r);
  return out;
}

}  // namespace mwion
