#pragma once

// Two-qubit states in the ordered basis |ee>, |eg>, |ge>, |gg>, their Bloch
// decomposition and partial transposition. |e> is the +1 eigenstate of sigma_z.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "fermicorr/errors.hpp"

namespace fermicorr {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

inline constexpr std::array<const char*, 4> kBasisLabels = {"ee", "eg", "ge", "gg"};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = -1e-10;

enum class Party { A, B };

/// Pauli matrix sigma_i, i = 0 (identity), 1 (x), 2 (y), 3 (z).
inline Matrix2c pauli(int i) {
  Matrix2c m;
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw ValidationError("pauli index must be in 0..3");
  }
  return m;
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// Description of the first violated density-matrix invariant, if any.
/// Positivity is only tested when `check_positivity` is set.
inline std::optional<std::string> find_violation(const Matrix4c& m, bool check_positivity = true) {
  if (!m.allFinite()) return "entries must be finite";
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) return "Hermitian: max |M_ij - conj(M_ji)| = " + std::to_string(herm);
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) return "unit trace: Tr = " + std::to_string(tr);
  if (check_positivity) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < kPositivityTol) return "positive semidefinite: min eigenvalue = " + std::to_string(lo);
  }
  return std::nullopt;
}

/// A 4x4 two-qubit density matrix. Construction through `checked` enforces the
/// Hermitian, unit-trace and positivity invariants; `unchecked` wraps any matrix.
class TwoQubitDensityMatrix {
 public:
  TwoQubitDensityMatrix() : m_(Matrix4c::Identity() / 4.0) {}

  static TwoQubitDensityMatrix checked(const Matrix4c& m) {
    if (auto v = find_violation(m)) throw ValidationError("density matrix invariant violated: " + *v);
    return TwoQubitDensityMatrix(m);
  }

  static TwoQubitDensityMatrix unchecked(const Matrix4c& m) { return TwoQubitDensityMatrix(m); }

  /// Projector onto a (not necessarily normalized) state vector.
  static TwoQubitDensityMatrix pure(const Vector4c& psi) {
    const Vector4c u = psi / psi.norm();
    return TwoQubitDensityMatrix(u * u.adjoint());
  }

  const Matrix4c& matrix() const noexcept { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  bool is_valid() const { return !find_violation(m_).has_value(); }
  void validate() const {
    if (auto v = find_violation(m_)) throw ValidationError("density matrix invariant violated: " + *v);
  }

  double purity() const { return (m_ * m_).trace().real(); }

 private:
  explicit TwoQubitDensityMatrix(const Matrix4c& m) : m_(m) {}
  Matrix4c m_;
};

struct BlochDecomposition {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();  // qubit A
  Eigen::Vector3d y = Eigen::Vector3d::Zero();  // qubit B
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();  // t_ij = Tr[rho (sigma_i x sigma_j)]
};

inline BlochDecomposition decompose(const TwoQubitDensityMatrix& rho) {
  if (auto v = find_violation(rho.matrix(), false))
    throw ValidationError("decompose: density matrix invariant violated: " + *v);
  const Matrix4c& m = rho.matrix();
  auto expect = [&](int i, int j) { return (m * kron(pauli(i), pauli(j))).trace().real(); };
  BlochDecomposition b;
  for (int i = 0; i < 3; ++i) {
    b.x(i) = expect(i + 1, 0);
    b.y(i) = expect(0, i + 1);
    for (int j = 0; j < 3; ++j) b.t(i, j) = expect(i + 1, j + 1);
  }
  return b;
}

/// rho = 1/4 (I + x.sigma x I + I x y.sigma + sum t_ij sigma_i x sigma_j).
/// Hermitian with unit trace by construction; positivity is not checked.
inline TwoQubitDensityMatrix reconstruct(const BlochDecomposition& b) {
  Matrix4c m = kron(pauli(0), pauli(0));
  for (int i = 0; i < 3; ++i) {
    m += b.x(i) * kron(pauli(i + 1), pauli(0));
    m += b.y(i) * kron(pauli(0), pauli(i + 1));
    for (int j = 0; j < 3; ++j) m += b.t(i, j) * kron(pauli(i + 1), pauli(j + 1));
  }
  return TwoQubitDensityMatrix::unchecked(m / 4.0);
}

/// Transpose on the chosen party's index. Basis index = 2 * a + b.
inline Matrix4c partial_transpose(const Matrix4c& m, Party party) {
  Matrix4c out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) {
          const int row = 2 * a + b;
          const int col = 2 * ap + bp;
          out(row, col) = party == Party::A ? m(2 * ap + b, 2 * a + bp) : m(2 * a + bp, 2 * ap + b);
        }
  return out;
}

inline Matrix4c partial_transpose(const TwoQubitDensityMatrix& rho, Party party) {
  return partial_transpose(rho.matrix(), party);
}

enum class StateKind { pure, mixed, xshape };

/// Deterministic random state for test harnesses. Same seed and kind give a
/// bit-identical matrix.
inline TwoQubitDensityMatrix random_state(std::uint64_t seed, StateKind kind) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  switch (kind) {
    case StateKind::pure: {
      Vector4c psi;
      for (int i = 0; i < 4; ++i) psi(i) = cplx(gauss(rng), gauss(rng));
      return TwoQubitDensityMatrix::pure(psi);
    }
    case StateKind::mixed: {
      Matrix4c g;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
      Matrix4c m = g * g.adjoint();
      m /= m.trace().real();
      // exact Hermitian symmetry after rounding
      m = (0.5 * (m + m.adjoint())).eval();
      return TwoQubitDensityMatrix::unchecked(m);
    }
    case StateKind::xshape: {
      std::array<double, 4> p{};
      double total = 0.0;
      for (double& v : p) {
        v = -std::log(1.0 - unif(rng));
        total += v;
      }
      for (double& v : p) v /= total;
      auto coherence = [&](double a, double b) {
        const double mag = unif(rng) * std::sqrt(a * b);
        const double phase = 2.0 * M_PI * unif(rng);
        return std::polar(mag, phase);
      };
      Matrix4c m = Matrix4c::Zero();
      for (int i = 0; i < 4; ++i) m(i, i) = p[i];
      m(0, 3) = coherence(p[0], p[3]);
      m(3, 0) = std::conj(m(0, 3));
      m(1, 2) = coherence(p[1], p[2]);
      m(2, 1) = std::conj(m(1, 2));
      return TwoQubitDensityMatrix::unchecked(m);
    }
  }
  throw ValidationError("unknown state kind");
}

}  // namespace fermicorr
