#pragma once

// Small-dimension complex linear algebra for qubit (2) and hyperfine
// manifold (4) dynamics. Everything here is templated on the real scalar
// and works on fixed-capacity Eigen storage, so no heap traffic happens in
// the inner loops of pulse composition.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mwion {

template <typename Scalar>
using SmallMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

template <typename Scalar>
using SmallVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1, 0, 4, 1>;

namespace tolerance {
inline constexpr double unitarity = 1e-10;
inline constexpr double hermiticity = 1e-12;
inline constexpr double norm = 1e-12;

/// The double-precision bound, widened for narrower scalars.
template <typename Scalar>
Scalar widened(double bound) {
  return std::max(Scalar(bound), Scalar(64) * std::numeric_limits<Scalar>::epsilon());
}
}  // namespace tolerance

inline bool supported_dimension(Eigen::Index dim) { return dim == 2 || dim == 4; }

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Scalar = double>
SmallMatrix<Scalar> pauli_x() {
  SmallMatrix<Scalar> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = double>
SmallMatrix<Scalar> pauli_y() {
  using C = std::complex<Scalar>;
  SmallMatrix<Scalar> m(2, 2);
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Scalar = double>
SmallMatrix<Scalar> pauli_z() {
  SmallMatrix<Scalar> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Unitary operator on a 2- or 4-dimensional space.
///
/// Never phase-normalized: R(2pi) is stored as -I so that products inside
/// composite sequences keep their sign. Compare with phase-invariant metrics.
template <typename Scalar = double>
class Unitary {
 public:
  using Matrix = SmallMatrix<Scalar>;

  /// Throws std::invalid_argument unless the matrix is square, of dimension
  /// 2 or 4, and satisfies max|U^dagger U - I| < 1e-10.
  explicit Unitary(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || !supported_dimension(m_.rows())) {
      throw std::invalid_argument("Unitary: dimension must be 2x2 or 4x4, got " +
                                  std::to_string(m_.rows()) + "x" +
                                  std::to_string(m_.cols()));
    }
    const Scalar defect = unitarity_defect();
    if (!(defect < tolerance::widened<Scalar>(tolerance::unitarity))) {
      throw std::invalid_argument("Unitary: max|U^dagger U - I| = " + std::to_string(defect) +
                                  " exceeds 1e-10");
    }
  }

  static Unitary identity(Eigen::Index dim) { return Unitary(Matrix::Identity(dim, dim)); }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  std::complex<Scalar> operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  Unitary adjoint() const { return Unitary(m_.adjoint(), Trusted{}); }

  Scalar unitarity_defect() const {
    return max_abs((m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())).eval());
  }

  /// Operator product `later * earlier`. Dimensions must agree.
  friend Unitary operator*(const Unitary& later, const Unitary& earlier) {
    if (later.dim() != earlier.dim()) {
      throw std::invalid_argument("Unitary product: dimension mismatch " +
                                  std::to_string(later.dim()) + " vs " +
                                  std::to_string(earlier.dim()));
    }
    return Unitary((later.m_ * earlier.m_).eval(), Trusted{});
  }

 private:
  struct Trusted {};
  Unitary(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// Normalized pure state with a fixed 2- or 4-level basis.
template <typename Scalar = double>
class StateVector {
 public:
  using Vector = SmallVector<Scalar>;

  StateVector(Vector amplitudes, std::vector<std::string> labels)
      : amps_(std::move(amplitudes)), labels_(std::move(labels)) {
    if (!supported_dimension(amps_.size())) {
      throw std::invalid_argument("StateVector: dimension must be 2 or 4, got " +
                                  std::to_string(amps_.size()));
    }
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != amps_.size()) {
      throw std::invalid_argument("StateVector: label count does not match dimension");
    }
    const Scalar drift = std::abs(amps_.norm() - Scalar(1));
    if (!(drift < tolerance::widened<Scalar>(tolerance::norm))) {
      throw std::invalid_argument("StateVector: | ||psi|| - 1 | = " + std::to_string(drift) +
                                  " exceeds 1e-12");
    }
  }

  explicit StateVector(Vector amplitudes) : StateVector(std::move(amplitudes), {}) {}

  static StateVector basis(Eigen::Index dim, Eigen::Index index,
                           std::vector<std::string> labels = {}) {
    if (index < 0 || index >= dim) {
      throw std::invalid_argument("StateVector::basis: index out of range");
    }
    Vector v = Vector::Zero(dim);
    v(index) = Scalar(1);
    return StateVector(std::move(v), std::move(labels));
  }

  const Vector& amplitudes() const { return amps_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Eigen::Index dim() const { return amps_.size(); }

  Scalar population(Eigen::Index i) const { return std::norm(amps_(i)); }

  Eigen::Array<Scalar, Eigen::Dynamic, 1, 0, 4, 1> populations() const {
    return amps_.cwiseAbs2().array();
  }

 private:
  Vector amps_;
  std::vector<std::string> labels_;
};

/// Hermitian generator (rad/s) held constant for `duration` seconds.
template <typename Scalar = double>
class HamiltonianSegment {
 public:
  using Matrix = SmallMatrix<Scalar>;

  /// The Hermiticity test is relative to the largest entry, so generators in
  /// rad/s (entries ~1e7) are held to the same 1e-12 as unit-scale ones.
  HamiltonianSegment(Matrix h, Scalar duration) : h_(std::move(h)), duration_(duration) {
    if (h_.rows() != h_.cols() || !supported_dimension(h_.rows())) {
      throw std::invalid_argument("HamiltonianSegment: dimension must be 2x2 or 4x4");
    }
    if (!h_.allFinite() || !std::isfinite(duration_)) {
      throw std::invalid_argument("HamiltonianSegment: non-finite entries");
    }
    if (duration_ < Scalar(0)) {
      throw std::invalid_argument("HamiltonianSegment: negative duration " +
                                  std::to_string(duration_));
    }
    const Scalar scale = std::max(Scalar(1), max_abs(h_));
    const Scalar asym = max_abs((h_ - h_.adjoint()).eval());
    if (!(asym <= tolerance::widened<Scalar>(tolerance::hermiticity) * scale)) {
      throw std::invalid_argument("HamiltonianSegment: generator is not Hermitian (max|H - H^dagger| = " +
                                  std::to_string(asym) + ")");
    }
  }

  const Matrix& matrix() const { return h_; }
  Scalar duration() const { return duration_; }
  Eigen::Index dim() const { return h_.rows(); }

 private:
  Matrix h_;
  Scalar duration_;
};

/// exp(-i H t) for one segment. The 2x2 case uses the closed form
/// e^{-ibt}[cos(|a|t) I - i sin(|a|t) a.sigma/|a|] for H = b I + a.sigma;
/// the 4x4 case diagonalizes the Hermitian generator.
template <typename Scalar>
Unitary<Scalar> propagator(const HamiltonianSegment<Scalar>& seg) {
  using C = std::complex<Scalar>;
  using Matrix = SmallMatrix<Scalar>;
  const Matrix& h = seg.matrix();
  const Scalar t = seg.duration();
  if (seg.dim() == 2) {
    const Scalar b = (h(0, 0).real() + h(1, 1).real()) / 2;
    const Scalar ax = h(1, 0).real();
    const Scalar ay = h(1, 0).imag();
    const Scalar az = (h(0, 0).real() - h(1, 1).real()) / 2;
    const Scalar a = std::sqrt(ax * ax + ay * ay + az * az);
    const Scalar angle = a * t;
    // sin(|a|t)/|a|, continuous through |a| = 0
    const Scalar sinc_t = angle == Scalar(0) ? t : std::sin(angle) / a;
    const Scalar c = std::cos(angle);
    const C mi(0, -1);
    Matrix u(2, 2);
    u(0, 0) = C(c) + mi * sinc_t * az;
    u(1, 1) = C(c) - mi * sinc_t * az;
    u(0, 1) = mi * sinc_t * C(ax, -ay);
    u(1, 0) = mi * sinc_t * C(ax, ay);
    u *= std::polar(Scalar(1), -b * t);
    return Unitary<Scalar>(std::move(u));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("propagator: eigendecomposition failed");
  }
  SmallVector<Scalar> phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = std::polar(Scalar(1), -eig.eigenvalues()(k) * t);
  }
  const Matrix& v = eig.eigenvectors();
  Matrix u = v * phases.asDiagonal() * v.adjoint();
  return Unitary<Scalar>(std::move(u));
}

/// Time-ordered product U_n ... U_2 U_1 of `units` (earliest first). An
/// empty list yields the identity of dimension `empty_dim`.
template <typename Scalar>
Unitary<Scalar> compose(std::span<const Unitary<Scalar>> units, Eigen::Index empty_dim = 2) {
  if (units.empty()) return Unitary<Scalar>::identity(empty_dim);
  const Eigen::Index dim = units.front().dim();
  SmallMatrix<Scalar> acc = units.front().matrix();
  for (std::size_t k = 1; k < units.size(); ++k) {
    if (units[k].dim() != dim) {
      throw std::invalid_argument("compose: unit " + std::to_string(k) + " has dimension " +
                                  std::to_string(units[k].dim()) + ", expected " +
                                  std::to_string(dim));
    }
    acc = (units[k].matrix() * acc).eval();
  }
  return Unitary<Scalar>(std::move(acc));
}

template <typename Scalar>
Unitary<Scalar> compose(const std::vector<Unitary<Scalar>>& units, Eigen::Index empty_dim = 2) {
  return compose(std::span<const Unitary<Scalar>>(units), empty_dim);
}

/// Total propagator of a piecewise-constant evolution.
template <typename Scalar>
Unitary<Scalar> propagate(std::span<const HamiltonianSegment<Scalar>> segments,
                          Eigen::Index empty_dim = 2) {
  std::vector<Unitary<Scalar>> units;
  units.reserve(segments.size());
  for (const auto& s : segments) units.push_back(propagator(s));
  return compose(std::span<const Unitary<Scalar>>(units), empty_dim);
}

/// psi = prod_k exp(-i H_k t_k) psi0 with an exact exponential per segment.
template <typename Scalar>
StateVector<Scalar> evolve_piecewise(std::span<const HamiltonianSegment<Scalar>> segments,
                                     const StateVector<Scalar>& psi0) {
  SmallVector<Scalar> psi = psi0.amplitudes();
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (segments[k].dim() != psi0.dim()) {
      throw std::invalid_argument("evolve_piecewise: segment " + std::to_string(k) +
                                  " has dimension " + std::to_string(segments[k].dim()) +
                                  ", state has " + std::to_string(psi0.dim()));
    }
    psi = (propagator(segments[k]).matrix() * psi).eval();
  }
  return StateVector<Scalar>(std::move(psi), psi0.labels());
}

template <typename Scalar>
StateVector<Scalar> evolve_piecewise(const std::vector<HamiltonianSegment<Scalar>>& segments,
                                     const StateVector<Scalar>& psi0) {
  return evolve_piecewise(std::span<const HamiltonianSegment<Scalar>>(segments), psi0);
}

namespace detail {
template <typename Scalar>
void require_qubit(const Unitary<Scalar>& u, const char* who) {
  if (u.dim() != 2) {
    throw std::invalid_argument(std::string(who) +
                                ": defined on 2x2 qubit unitaries; project 4x4 evolutions first");
  }
}
}  // namespace detail

/// |Tr(U^dagger V)| / 2 on the qubit space. Global phase of either argument
/// drops out.
template <typename Scalar>
Scalar gate_fidelity(const Unitary<Scalar>& u, const Unitary<Scalar>& v) {
  detail::require_qubit(u, "gate_fidelity");
  detail::require_qubit(v, "gate_fidelity");
  const Scalar f = std::abs((u.matrix().adjoint() * v.matrix()).trace()) / Scalar(2);
  return std::min(f, Scalar(1));
}

/// 1 - gate_fidelity, evaluated without cancellation.
///
/// W = U^dagger V = e^{i alpha}(a0 I - i a.sigma) gives 1 - |a0| = |a|^2/(1 + |a0|),
/// and |a|^2 is read from the traceless part of W, so infidelities far below
/// machine epsilon keep full relative precision.
template <typename Scalar>
Scalar gate_infidelity(const Unitary<Scalar>& u, const Unitary<Scalar>& v) {
  detail::require_qubit(u, "gate_infidelity");
  detail::require_qubit(v, "gate_infidelity");
  const SmallMatrix<Scalar> w = u.matrix().adjoint() * v.matrix();
  const Scalar a0 = std::min(std::abs(w.trace()) / Scalar(2), Scalar(1));
  const std::complex<Scalar> half_diff = (w(0, 0) - w(1, 1)) / Scalar(2);
  const Scalar a_sq = std::norm(half_diff) + (std::norm(w(0, 1)) + std::norm(w(1, 0))) / Scalar(2);
  return a_sq / (Scalar(1) + a0);
}

}  // namespace mwion
