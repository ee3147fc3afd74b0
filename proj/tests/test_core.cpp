#include "doctest.h"
#include "oracles.hpp"

#include "mwion/core.hpp"

#include <numbers>
#include <random>

using namespace mwion;
using Matrix = SmallMatrix<double>;

namespace {

Matrix to_small(const Eigen::MatrixXcd& m) { return Matrix(m); }

double diff(const Matrix& a, const Eigen::MatrixXcd& b) { return (Eigen::MatrixXcd(a) - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("2x2 closed form matches a Taylor-series exponential") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(0.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const Eigen::MatrixXcd h = oracle::random_hermitian(2, rng, 1.5);
    const double dt = t(rng);
    const Unitary<double> u = propagator(HamiltonianSegment<double>(to_small(h), dt));
    CHECK(diff(u.matrix(), oracle::expm_taylor(h, dt)) < 1e-12);
  }
}

TEST_CASE("4x4 eigendecomposition matches a Taylor-series exponential") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(0.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const Eigen::MatrixXcd h = oracle::random_hermitian(4, rng, 1.5);
    const double dt = t(rng);
    const Unitary<double> u = propagator(HamiltonianSegment<double>(to_small(h), dt));
    CHECK(diff(u.matrix(), oracle::expm_taylor(h, dt)) < 1e-12);
  }
}

TEST_CASE("zero generator and zero duration give the identity") {
  const Matrix zero = Matrix::Zero(2, 2);
  CHECK(diff(propagator(HamiltonianSegment<double>(zero, 3.0)).matrix(),
             Eigen::MatrixXcd::Identity(2, 2)) == 0.0);
  const Matrix h = pauli_x<double>() * 2.0;
  CHECK(diff(propagator(HamiltonianSegment<double>(h, 0.0)).matrix(),
             Eigen::MatrixXcd::Identity(2, 2)) == 0.0);
}

TEST_CASE("resonant Rabi flopping follows sin^2(Omega t / 2)") {
  const double omega = 2.0 * std::numbers::pi * 0.49e6;
  const Matrix h = pauli_x<double>() * (omega / 2);
  for (double t = 0.0; t < 5e-6; t += 0.13e-6) {
    const std::vector<HamiltonianSegment<double>> segs{{h, t}};
    const auto psi = evolve_piecewise(segs, StateVector<double>::basis(2, 0));
    const double s = std::sin(omega * t / 2);
    CHECK(psi.population(1) == doctest::Approx(s * s).epsilon(1e-13));
  }
}

TEST_CASE("propagators are unitary and segments concatenate") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> t(0.0, 10.0);
  for (const Eigen::Index dim : {2, 4}) {
    for (int k = 0; k < 100; ++k) {
      const Matrix h = to_small(oracle::random_hermitian(dim, rng, 3.0));
      const double t1 = t(rng);
      const double t2 = t(rng);
      const auto u1 = propagator(HamiltonianSegment<double>(h, t1));
      const auto u2 = propagator(HamiltonianSegment<double>(h, t2));
      const auto u12 = propagator(HamiltonianSegment<double>(h, t1 + t2));
      CHECK(u12.unitarity_defect() < 1e-12);
      CHECK(diff((u2 * u1).matrix(), Eigen::MatrixXcd(u12.matrix())) < 1e-11);
    }
  }
}

TEST_CASE("compose applies the earliest unit first") {
  const auto a = propagator(HamiltonianSegment<double>(pauli_x<double>(), 0.3));
  const auto b = propagator(HamiltonianSegment<double>(pauli_z<double>(), 0.7));
  const std::vector<Unitary<double>> units{a, b};
  const Matrix expected = b.matrix() * a.matrix();
  CHECK(diff(compose(units).matrix(), Eigen::MatrixXcd(expected)) < 1e-15);
  CHECK(diff(compose(std::vector<Unitary<double>>{}, 4).matrix(),
             Eigen::MatrixXcd::Identity(4, 4)) == 0.0);
}

TEST_CASE("compose names the mismatched unit") {
  const std::vector<Unitary<double>> units{Unitary<double>::identity(2),
                                           Unitary<double>::identity(2),
                                           Unitary<double>::identity(4)};
  CHECK_THROWS_WITH_AS(compose(units), doctest::Contains("unit 2"), std::invalid_argument);
}

TEST_CASE("evolve_piecewise rejects a dimension mismatch") {
  const std::vector<HamiltonianSegment<double>> segs{{Matrix::Zero(4, 4), 1.0}};
  CHECK_THROWS_AS(evolve_piecewise(segs, StateVector<double>::basis(2, 0)), std::invalid_argument);
}

TEST_CASE("constructor checks") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 1.0 + 1e-8;
  CHECK_THROWS_AS(Unitary<double>{bad}, std::invalid_argument);
  CHECK_NOTHROW(Unitary<double>{Matrix::Identity(4, 4)});

  SmallVector<double> v = SmallVector<double>::Zero(2);
  v(0) = 1.0 + 1e-9;
  CHECK_THROWS_AS(StateVector<double>{v}, std::invalid_argument);
  v(0) = 1.0;
  CHECK_THROWS_AS(StateVector<double>(v, {"a"}), std::invalid_argument);

  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(HamiltonianSegment<double>(nh, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianSegment<double>(Matrix::Zero(2, 2), -1.0), std::invalid_argument);
  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(HamiltonianSegment<double>(nan, 1.0), std::invalid_argument);
}

TEST_CASE("Hermiticity tolerance scales with the generator") {
  Matrix h = pauli_x<double>() * 1e7;
  h(0, 1) += std::complex<double>(0, 1e-7);  // 1e-14 relative
  CHECK_NOTHROW(HamiltonianSegment<double>(h, 1e-6));
}

TEST_CASE("gate fidelity is phase invariant and the stable form agrees") {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 50; ++k) {
    const Matrix h = to_small(oracle::random_hermitian(2, rng, 1.0));
    const auto u = propagator(HamiltonianSegment<double>(h, 1.0));
    const auto v = propagator(HamiltonianSegment<double>(h, 1.05));
    Matrix phased = u.matrix() * std::polar(1.0, 0.77);
    CHECK(gate_fidelity(Unitary<double>(phased), v) == doctest::Approx(gate_fidelity(u, v)));
    CHECK(gate_infidelity(u, v) == doctest::Approx(1.0 - gate_fidelity(u, v)).epsilon(1e-6));
    CHECK(gate_fidelity(u, u) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(gate_fidelity(Unitary<double>::identity(4), Unitary<double>::identity(4)),
                  std::invalid_argument);
}

TEST_CASE("stable infidelity resolves values below machine epsilon") {
  const Matrix h = pauli_x<double>() * 0.5;
  const auto u = propagator(HamiltonianSegment<double>(h, std::numbers::pi));
  const auto v = propagator(HamiltonianSegment<double>(h, std::numbers::pi * (1 + 1e-9)));
  // 1 - cos(pi 1e-9 / 2)
  const double expected = 0.5 * std::pow(std::numbers::pi * 1e-9 / 2, 2);
  CHECK(gate_infidelity(u, v) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("single precision instantiation") {
  const SmallMatrix<float> h = pauli_y<float>() * 0.5f;
  const auto u = propagator(HamiltonianSegment<float>(h, 1.0f));
  CHECK(u.unitarity_defect() < 1e-6f);
}
