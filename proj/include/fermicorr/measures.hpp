#pragma once

// Correlation quantifiers for two qubits: generic Bloch-form expressions valid
// for any state, and the second-order closed forms for the Fermi-problem X-state.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fermicorr/amplitudes.hpp"
#include "fermicorr/bloch.hpp"

namespace fermicorr {

inline constexpr double kClassicalBellBound = 2.0;
inline const double kTsirelsonBound = 2.0 * std::sqrt(2.0);
inline constexpr double kHierarchyTol = 1e-9;

/// Normalized geometric discord D = 2 Tr S - 2 lambda_max(S), S = (x x^T + T T^T)/4,
/// for a projective measurement on `measured` (A by default).
inline double geometric_discord(const TwoQubitDensityMatrix& rho, Party measured = Party::A) {
  const BlochDecomposition b = decompose(rho);
  const Eigen::Vector3d& v = measured == Party::A ? b.x : b.y;
  const Eigen::Matrix3d t = measured == Party::A ? b.t : Eigen::Matrix3d(b.t.transpose());
  const Eigen::Matrix3d s = 0.25 * (v * v.transpose() + t * t.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s, Eigen::EigenvaluesOnly);
  return std::max(0.0, 2.0 * s.trace() - 2.0 * es.eigenvalues().maxCoeff());
}

/// sqrt(D) of the X-state to second order: sqrt(Re(l)^2 + |X|^2).
inline double sqrt_discord_xstate(const PerturbativeAmplitudes& a) {
  return std::hypot(a.l.real(), std::abs(a.x_exch));
}

/// ||rho^{T_A}||_1 - 1, i.e. twice the magnitude of the negative PT spectrum.
inline double negativity(const TwoQubitDensityMatrix& rho) {
  const Matrix4c pt = partial_transpose(rho, Party::A);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int i = 0; i < 4; ++i) neg += std::min(0.0, es.eigenvalues()(i));
  return -2.0 * neg;
}

/// max{0, sqrt((u2 - v2)^2 + 4|X|^2) - u2 - v2}, evaluated in the rationalized form
/// 4(|X|^2 - u2 v2) / (sqrt(...) + u2 + v2) so its sign matches entanglement_onset bit for bit.
inline double negativity_xstate(const PerturbativeAmplitudes& a) {
  const double x2 = std::norm(a.x_exch);
  const double excess = x2 - a.u2 * a.v2;
  if (!(excess > 0.0)) return 0.0;
  const double diff = a.u2 - a.v2;
  const double root = std::sqrt(diff * diff + 4.0 * x2);
  return 4.0 * excess / (root + a.u2 + a.v2);
}

/// |X|^2 / (|U_A|^2 |V_B|^2) > 1. With u2 v2 = 0 this is true iff X != 0.
inline bool entanglement_onset(const PerturbativeAmplitudes& a) {
  return std::norm(a.x_exch) - a.u2 * a.v2 > 0.0;
}

/// Largest singular value of W = T - x y^T.
inline double connected_correlation(const TwoQubitDensityMatrix& rho) {
  const BlochDecomposition b = decompose(rho);
  const Eigen::Matrix3d w = b.t - b.x * b.y.transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(w);
  return svd.singularValues()(0);
}

struct ConnectedCorrelation {
  double value = 0.0;
  Eigen::Vector3d n_a = Eigen::Vector3d::UnitZ();  // optimal spin direction on A
  Eigen::Vector3d n_b = Eigen::Vector3d::UnitZ();  // optimal spin direction on B
};

/// C together with the leading singular vectors of W, the directions that attain it.
inline ConnectedCorrelation connected_correlation_directions(const TwoQubitDensityMatrix& rho) {
  const BlochDecomposition b = decompose(rho);
  const Eigen::Matrix3d w = b.t - b.x * b.y.transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

/// max{u2 + v2 + 2 Re A, 2(|X| + |l|)}.
inline double connected_correlation_xstate(const PerturbativeAmplitudes& a) {
  return std::max(a.u2 + a.v2 + 2.0 * a.re_A, 2.0 * (std::abs(a.x_exch) + std::abs(a.l)));
}

/// -sqrt(2) (rho11 + rho44 - rho22 - rho33 + 2 Re rho23 + 2 Re rho14), entries divided by c.
inline double bell_chsh(const XStateCoefficients& k) {
  const XStateCoefficients n = k.normalized();
  return -std::sqrt(2.0) *
         (n.rho11 + n.rho44 - n.rho22 - n.rho33 + 2.0 * n.rho23.real() + 2.0 * n.rho14.real());
}

/// Optimal CHSH value of an X-state, 2 sqrt(u1 + max(u2, u3)), entries divided by c.
inline double bell_opt(const XStateCoefficients& k) {
  const XStateCoefficients n = k.normalized();
  const double a14 = std::abs(n.rho14);
  const double a23 = std::abs(n.rho23);
  const double u1 = 4.0 * (a14 + a23) * (a14 + a23);
  const double z = n.rho11 + n.rho44 - n.rho22 - n.rho33;
  const double u2 = z * z;
  const double u3 = 4.0 * (a14 - a23) * (a14 - a23);
  return 2.0 * std::sqrt(u1 + std::max(u2, u3));
}

struct CorrelationReport {
  double sqrt_discord = 0.0;
  double negativity = 0.0;
  double connected_corr = 0.0;
  double bell_chsh = 0.0;
  double bell_opt = 0.0;
  bool hierarchy_ok = true;
};

/// C >= sqrt(D) >= N within kHierarchyTol.
inline bool hierarchy_holds(double connected, double sqrt_d, double neg) {
  return connected >= sqrt_d - kHierarchyTol && sqrt_d >= neg - kHierarchyTol;
}

/// Report for one sweep point from the X-state closed forms. `rho` is the
/// normalized state assembled from `coeffs`; it is checked for consistency only.
inline CorrelationReport report(const TwoQubitDensityMatrix& rho, const XStateCoefficients& coeffs,
                                const PerturbativeAmplitudes& amps) {
  if ((rho.matrix() - coeffs.normalized().matrix()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("report: rho does not match the supplied coefficients");
  CorrelationReport r;
  r.sqrt_discord = sqrt_discord_xstate(amps);
  r.negativity = negativity_xstate(amps);
  r.connected_corr = connected_correlation_xstate(amps);
  r.bell_chsh = bell_chsh(coeffs);
  r.bell_opt = bell_opt(coeffs);
  r.hierarchy_ok = hierarchy_holds(r.connected_corr, r.sqrt_discord, r.negativity);
  return r;
}

}  // namespace fermicorr
