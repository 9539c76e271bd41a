#pragma once

#include <cmath>
#include <random>

#include "fermicorr/bloch.hpp"

namespace fermicorr::testing {

inline Vector4c basis(int i) {
  Vector4c v = Vector4c::Zero();
  v(i) = 1.0;
  return v;
}

/// (|ee> + |gg>) / sqrt(2)
inline TwoQubitDensityMatrix bell_phi_plus() { return TwoQubitDensityMatrix::pure(basis(0) + basis(3)); }

/// |eg><eg|, the initial state.
inline TwoQubitDensityMatrix eg_state() { return TwoQubitDensityMatrix::pure(basis(1)); }

/// (|ee><ee| + |gg><gg|) / 2
inline TwoQubitDensityMatrix classical_mixture() {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  return TwoQubitDensityMatrix::checked(m);
}

inline TwoQubitDensityMatrix werner(double p) {
  return TwoQubitDensityMatrix::checked(p * bell_phi_plus().matrix() + (1.0 - p) * Matrix4c::Identity() / 4.0);
}

inline Matrix2c random_qubit_density(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d r(g(rng), g(rng), g(rng));
  r *= std::uniform_real_distribution<double>(0.0, 1.0)(rng) / r.norm();
  return 0.5 * (pauli(0) + r(0) * pauli(1) + r(1) * pauli(2) + r(2) * pauli(3));
}

inline TwoQubitDensityMatrix random_product(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix2c a = random_qubit_density(rng);
  const Matrix2c b = random_qubit_density(rng);
  return TwoQubitDensityMatrix::checked(kron(a, b));
}

/// Haar-ish single-qubit unitary exp(-i theta n.sigma / 2).
inline Matrix2c random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d n(g(rng), g(rng), g(rng));
  n /= n.norm();
  const double theta = std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(rng);
  const cplx i(0.0, 1.0);
  return std::cos(theta / 2) * pauli(0) - i * std::sin(theta / 2) * (n(0) * pauli(1) + n(1) * pauli(2) + n(2) * pauli(3));
}

inline TwoQubitDensityMatrix local_rotate(const TwoQubitDensityMatrix& rho, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix4c u = kron(random_unitary(rng), random_unitary(rng));
  return TwoQubitDensityMatrix::unchecked(u * rho.matrix() * u.adjoint());
}

inline constexpr StateKind kAllKinds[] = {StateKind::pure, StateKind::mixed, StateKind::xshape};

}  // namespace fermicorr::testing
