#pragma once

// Brute-force validators for the closed-form measures. Everything here works
// from the density matrix directly (Pauli traces, explicit measurements) and
// searches over measurement directions instead of using eigen-decompositions.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermicorr/bloch.hpp"
#include "fermicorr/errors.hpp"

namespace fermicorr::oracles {

struct DirectionGrid {
  int polar_steps = 24;    // theta = pi i / polar_steps, i = 0..polar_steps (both poles included)
  int azimuth_steps = 48;  // phi = 2 pi j / azimuth_steps
  int refine_rounds = 3;   // local zoom rounds around the best cell

  void validate() const {
    if (polar_steps < 24) throw ValidationError("DirectionGrid: polar_steps must be >= 24");
    if (azimuth_steps < 48) throw ValidationError("DirectionGrid: azimuth_steps must be >= 48");
    if (refine_rounds < 2) throw ValidationError("DirectionGrid: refine_rounds must be >= 2");
  }
};

inline Eigen::Vector3d direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

namespace detail {

template <std::size_t D>
using Angles = std::array<double, D>;

// Best point of a search together with its objective value.
template <std::size_t D>
struct Best {
  Angles<D> at{};
  double value = -INFINITY;
};

// Coarse grid over D/2 direction pairs (theta_k, phi_k). Ties keep the lowest cell index.
template <std::size_t D, class F>
Best<D> coarse_max(F&& f, const DirectionGrid& g) {
  static_assert(D % 2 == 0);
  const int per_dir = (g.polar_steps + 1) * g.azimuth_steps;
  long total = 1;
  for (std::size_t k = 0; k < D / 2; ++k) total *= per_dir;
  Best<D> best;
  for (long cell = 0; cell < total; ++cell) {
    Angles<D> a{};
    long rest = cell;
    for (std::size_t k = 0; k < D / 2; ++k) {
      const int idx = static_cast<int>(rest % per_dir);
      rest /= per_dir;
      a[2 * k] = M_PI * (idx / g.azimuth_steps) / g.polar_steps;
      a[2 * k + 1] = 2.0 * M_PI * (idx % g.azimuth_steps) / g.azimuth_steps;
    }
    const double v = f(a);
    if (v > best.value) best = {a, v};
  }
  return best;
}

// Zoom rounds: a (2m+1)^D lattice spanning one coarse cell on each side of the
// current best, then shrink the span by m. A winner on the lattice boundary
// re-centres the lattice at the same span instead (at most kMaxWalk times), so
// flat ridges wider than one cell are still followed. The centre is always a
// candidate, so no round can lower the best value.
inline constexpr int kMaxWalk = 64;

template <std::size_t D, class F>
Best<D> refine_max(F&& f, Best<D> best, Angles<D> span, int rounds, int m, std::vector<double>* trace = nullptr) {
  long per_round = 1;
  for (std::size_t k = 0; k < D; ++k) per_round *= (2 * m + 1);
  int walks = 0;
  for (int r = 0; r < rounds;) {
    const Best<D> centre = best;
    bool on_edge = false;
    for (long cell = 0; cell < per_round; ++cell) {
      Angles<D> a = centre.at;
      long rest = cell;
      bool edge = false;
      for (std::size_t k = 0; k < D; ++k) {
        const int o = static_cast<int>(rest % (2 * m + 1)) - m;
        rest /= (2 * m + 1);
        a[k] += span[k] * o / m;
        edge = edge || o == m || o == -m;
      }
      const double v = f(a);
      if (v > best.value) {
        best = {a, v};
        on_edge = edge;
      }
    }
    if (on_edge && walks < kMaxWalk) {
      ++walks;
      continue;
    }
    for (double& s : span) s /= m;
    if (trace) trace->push_back(best.value);
    ++r;
  }
  return best;
}

template <std::size_t D, class F>
Best<D> search_max(F&& f, const DirectionGrid& g, int zoom, std::vector<double>* trace = nullptr) {
  g.validate();
  Best<D> best = coarse_max<D>(f, g);
  if (trace) trace->push_back(best.value);
  Angles<D> span{};
  for (std::size_t k = 0; k < D; k += 2) {
    span[k] = M_PI / g.polar_steps;
    span[k + 1] = 2.0 * M_PI / g.azimuth_steps;
  }
  return refine_max<D>(f, best, span, g.refine_rounds, zoom, trace);
}

inline Matrix2c spin(const Eigen::Vector3d& n) {
  return n(0) * pauli(1) + n(1) * pauli(2) + n(2) * pauli(3);
}

inline double expect(const Matrix4c& rho, const Matrix2c& a, const Matrix2c& b) {
  return (rho * kron(a, b)).trace().real();
}

// Correlation tensor and local Bloch vectors straight from Pauli traces.
struct PauliMoments {
  Eigen::Vector3d a, b;
  Eigen::Matrix3d corr;
};

inline PauliMoments moments(const Matrix4c& rho) {
  PauliMoments m;
  const Matrix2c id = pauli(0);
  for (int i = 0; i < 3; ++i) {
    m.a(i) = expect(rho, pauli(i + 1), id);
    m.b(i) = expect(rho, id, pauli(i + 1));
    for (int j = 0; j < 3; ++j) m.corr(i, j) = expect(rho, pauli(i + 1), pauli(j + 1));
  }
  return m;
}

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
template <int N>
Eigen::Matrix<double, N, 1> jacobi_eigenvalues(Eigen::Matrix<double, N, N> a) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-32) break;
    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < N; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::Matrix<double, N, 1> ev = a.diagonal();
  std::sort(ev.data(), ev.data() + N);
  return ev;
}

}  // namespace detail

/// Eigenvalues of a 4x4 Hermitian matrix through its 8x8 real embedding
/// [[Re, -Im], [Im, Re]], whose spectrum is the Hermitian one with each value doubled.
inline Eigen::Vector4d hermitian_eigenvalues(const Matrix4c& h) {
  Eigen::Matrix<double, 8, 8> e;
  e.topLeftCorner<4, 4>() = h.real();
  e.topRightCorner<4, 4>() = -h.imag();
  e.bottomLeftCorner<4, 4>() = h.imag();
  e.bottomRightCorner<4, 4>() = h.real();
  const auto doubled = detail::jacobi_eigenvalues<8>(e);
  return {doubled(0), doubled(2), doubled(4), doubled(6)};
}

/// 2 * sum |negative eigenvalues of rho^{T_A}|.
inline double negativity_eig(const TwoQubitDensityMatrix& rho) {
  const Eigen::Vector4d ev = hermitian_eigenvalues(partial_transpose(rho, Party::A));
  double neg = 0.0;
  for (int i = 0; i < 4; ++i)
    if (ev(i) < 0.0) neg += -ev(i);
  return 2.0 * neg;
}

/// 2 * ||rho - Pi_n(rho)||_2^2 for the projective measurement along n on qubit A.
inline double measurement_disturbance(const Matrix4c& rho, const Eigen::Vector3d& n) {
  const Matrix2c id = pauli(0);
  const Matrix2c s = detail::spin(n);
  const Matrix4c plus = kron(0.5 * (id + s), id);
  const Matrix4c minus = kron(0.5 * (id - s), id);
  const Matrix4c diff = rho - plus * rho * plus - minus * rho * minus;
  return 2.0 * (diff.adjoint() * diff).trace().real();
}

/// Geometric discord as the least disturbance over projective measurements on A.
inline double discord_bruteforce(const TwoQubitDensityMatrix& rho, const DirectionGrid& grid = {},
                                 std::vector<double>* trace = nullptr) {
  const Matrix4c& m = rho.matrix();
  auto neg_disturbance = [&](const detail::Angles<2>& a) {
    return -measurement_disturbance(m, direction(a[0], a[1]));
  };
  std::vector<double> raw;
  const auto best = detail::search_max<2>(neg_disturbance, grid, 8, trace ? &raw : nullptr);
  if (trace)
    for (double v : raw) trace->push_back(-v);
  return -best.value;
}

struct MaxCorrelation {
  double value = 0.0;
  Eigen::Vector3d n = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d nprime = Eigen::Vector3d::UnitZ();
};

/// max over unit n, n' of <(s.n) x (s.n')> - <s.n><s.n'>. For each n on the
/// search grid the best n' is along the covariance vector, so only n is searched.
inline MaxCorrelation maxcorr_bruteforce(const TwoQubitDensityMatrix& rho, const DirectionGrid& grid = {},
                                         std::vector<double>* trace = nullptr) {
  const Matrix4c& m = rho.matrix();
  const Matrix2c id = pauli(0);
  Eigen::Vector3d local_b;
  for (int j = 0; j < 3; ++j) local_b(j) = detail::expect(m, id, pauli(j + 1));

  auto covariance = [&](const Eigen::Vector3d& n) {
    const Matrix2c s = detail::spin(n);
    const double local_a = detail::expect(m, s, id);
    Eigen::Vector3d v;
    for (int j = 0; j < 3; ++j) v(j) = detail::expect(m, s, pauli(j + 1)) - local_a * local_b(j);
    return v;
  };
  auto objective = [&](const detail::Angles<2>& a) { return covariance(direction(a[0], a[1])).norm(); };
  const auto best = detail::search_max<2>(objective, grid, 8, trace);

  MaxCorrelation out;
  out.value = best.value;
  out.n = direction(best.at[0], best.at[1]);
  const Eigen::Vector3d v = covariance(out.n);
  if (v.norm() > 0.0) out.nprime = v / v.norm();
  return out;
}

/// max over settings a, a', b, b' of <a.T(b + b')> + <a'.T(b - b')>. The optimal
/// a, a' are along T(b +- b'), so the search runs over b and b'.
inline double chsh_gridopt(const TwoQubitDensityMatrix& rho, const DirectionGrid& grid = {},
                           std::vector<double>* trace = nullptr) {
  grid.validate();
  const Eigen::Matrix3d t = detail::moments(rho.matrix()).corr;
  auto objective = [&](const detail::Angles<4>& a) {
    const Eigen::Vector3d b = direction(a[0], a[1]);
    const Eigen::Vector3d bp = direction(a[2], a[3]);
    return (t * (b + bp)).norm() + (t * (b - bp)).norm();
  };

  // Coarse pass with T b tabulated once per grid direction.
  std::vector<detail::Angles<2>> cells;
  std::vector<Eigen::Vector3d> images;
  for (int i = 0; i <= grid.polar_steps; ++i)
    for (int j = 0; j < grid.azimuth_steps; ++j) {
      const double theta = M_PI * i / grid.polar_steps;
      const double phi = 2.0 * M_PI * j / grid.azimuth_steps;
      cells.push_back({theta, phi});
      images.push_back(t * direction(theta, phi));
    }
  detail::Best<4> best;
  for (std::size_t p = 0; p < cells.size(); ++p)
    for (std::size_t q = 0; q < cells.size(); ++q) {
      const double v = (images[p] + images[q]).norm() + (images[p] - images[q]).norm();
      if (v > best.value) best = {{cells[p][0], cells[p][1], cells[q][0], cells[q][1]}, v};
    }
  if (trace) trace->push_back(best.value);
  const detail::Angles<4> span{M_PI / grid.polar_steps, 2.0 * M_PI / grid.azimuth_steps, M_PI / grid.polar_steps,
                               2.0 * M_PI / grid.azimuth_steps};
  return detail::refine_max<4>(objective, best, span, grid.refine_rounds, 6, trace).value;
}

}  // namespace fermicorr::oracles
