#pragma once

// Second-order amplitudes of the two-qubit Fermi problem on a 1D line and the
// reduced X-state they produce. Units: hbar = v = Omega = 1, so times are
// tau = xi * r_bar and the coupling K multiplies every field correlator as K/4.

#include <cmath>
#include <algorithm>
#include <complex>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "fermicorr/bloch.hpp"
#include "fermicorr/errors.hpp"
#include "fermicorr/quadrature.hpp"

namespace fermicorr {

struct ModelParams {
  double r_bar = M_PI / 4.0;  // Omega r / v
  double coupling = 0.1;      // K = 4 d^2 N / (hbar^2 v)
  double cutoff = 50.0;       // omega_c / Omega
  int quad_points = 256;      // time-integral resolution: quad_points / 8 Gauss-Legendre nodes per graded panel
  bool include_two_photon = true;

  void validate() const {
    if (!(r_bar > 0.0) || !std::isfinite(r_bar)) throw ValidationError("ModelParams: r_bar must be > 0");
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw ValidationError("ModelParams: coupling K must be >= 0");
    if (!(cutoff >= 10.0) || !std::isfinite(cutoff)) throw ValidationError("ModelParams: cutoff must be >= 10");
    if (quad_points < 32) throw ValidationError("ModelParams: quad_points must be >= 32");
  }
};

struct PerturbativeAmplitudes {
  double xi = 0.0;
  double re_A = 0.0;       // radiative correction, <= 0
  cplx x_exch{0.0, 0.0};   // exchange amplitude X
  double u2 = 0.0;         // |U_A|^2, resonant single-photon emission by A
  double v2 = 0.0;         // |V_B|^2, counter-rotating emission by B
  cplx l{0.0, 0.0};        // <0| S_A^+ S_B^+ |0>
  double g2 = 0.0;         // |G|^2, zero when the two-photon term is disabled
  bool two_photon_enabled = true;
};

/// Unnormalized X-state entries; c is their trace.
struct XStateCoefficients {
  double rho11 = 0.0;
  double rho22 = 1.0;
  double rho33 = 0.0;
  double rho44 = 0.0;
  cplx rho14{0.0, 0.0};
  cplx rho23{0.0, 0.0};
  double c = 1.0;

  XStateCoefficients normalized() const {
    return {rho11 / c, rho22 / c, rho33 / c, rho44 / c, rho14 / c, rho23 / c, 1.0};
  }

  Matrix4c matrix() const {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = rho11;
    m(1, 1) = rho22;
    m(2, 2) = rho33;
    m(3, 3) = rho44;
    m(0, 3) = rho14;
    m(3, 0) = std::conj(rho14);
    m(1, 2) = rho23;
    m(2, 1) = std::conj(rho23);
    return m;
  }
};

namespace detail {

// 1 / (eps + i y)^2 without the overhead of complex division.
inline cplx inv_square(double eps, double y) {
  const double d = eps * eps + y * y;
  const double d2 = d * d;
  return {(eps * eps - y * y) / d2, -2.0 * eps * y / d2};
}

inline double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

inline double tau_of(const ModelParams& p, double xi) { return xi * p.r_bar; }

inline void check_xi(double xi) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw ValidationError("xi must be finite and >= 0");
}

}  // namespace detail

/// Exponentially regularized vacuum Wightman function of the line, field
/// normalization folded out:
///   w(dx, dt) = (eps + i(dt - dx))^-2 + (eps + i(dt + dx))^-2,  eps = 1/cutoff,
/// the closed form of  int_0^inf dk k e^{-k eps} (e^{ik dx} + e^{-ik dx}) e^{-ik dt}.
inline cplx two_point(double dx, double dt, double cutoff) {
  const double eps = 1.0 / cutoff;
  return detail::inv_square(eps, dt - dx) + detail::inv_square(eps, dt + dx);
}

/// Time-ordered two-point function. Exact because w is even in dx and
/// w(dx, -dt) = conj(w(dx, dt)).
inline cplx two_point_ordered(double dx, double dt, double cutoff) { return two_point(dx, std::abs(dt), cutoff); }

namespace detail {

// Composite Gauss-Legendre rule on [0, tau] with panel edges graded
// geometrically (ratio 4) away from each peak, starting at eps. Every panel
// carries quad_points / 8 nodes, so quad_points doubling refines uniformly.
inline quad::Rule peak_graded_rule(const ModelParams& p, double tau, std::initializer_list<double> peaks) {
  const double eps = 1.0 / p.cutoff;
  std::vector<double> edges = {0.0, tau};
  for (double c : peaks) {
    if (c < 0.0 || c > tau) continue;
    edges.push_back(c);
    for (double h = eps; h < tau; h *= 4.0) {
      if (c + h < tau) edges.push_back(c + h);
      if (c - h > 0.0) edges.push_back(c - h);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(), [](double a, double b) { return b - a < 1e-14; }), edges.end());
  const auto base = quad::gauss_legendre(static_cast<std::size_t>(std::max(4, p.quad_points / 8)));
  quad::Rule rule;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double half = 0.5 * (edges[e + 1] - edges[e]);
    const double mid = 0.5 * (edges[e + 1] + edges[e]);
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

template <class F>
cplx integrate(const quad::Rule& rule, F&& f) {
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace detail

// The double time integrals below all have kernels depending on t1 - t2 only
// (l also on t1 + t2, through a phase), so with a = |t1 - t2| they collapse to
//   int int_0^tau f(t1 - t2) = int_0^tau (tau - a) [f(a) + f(-a)] da
// and, for l,  int int e^{i(t1 + t2)} g(t1 - t2) = e^{i tau} int_0^tau sin(tau - a) [g(a) + g(-a)] da.

/// X = (K/4) int int_0^tau dt1 dt2 e^{i(t1 - t2)} w_T(r_bar; t1 - t2).
inline cplx amp_exchange(const ModelParams& p, double xi) {
  detail::check_xi(xi);
  const double tau = detail::tau_of(p, xi);
  if (tau == 0.0) return {0.0, 0.0};
  const auto rule = detail::peak_graded_rule(p, tau, {p.r_bar});
  const cplx sum = detail::integrate(
      rule, [&](double a) { return 2.0 * (tau - a) * std::cos(a) * two_point(p.r_bar, a, p.cutoff); });
  return 0.25 * p.coupling * sum;
}

/// Re A with A = 1/2 <0|T(S_A^+ S_A^- + S_B^- S_B^+)|0>. Both terms use the
/// coincident (dx = 0) time-ordered kernel, with phases e^{+i dt} and e^{-i dt},
/// which contribute equally after the reduction.
inline double amp_radiative(const ModelParams& p, double xi) {
  detail::check_xi(xi);
  const double tau = detail::tau_of(p, xi);
  if (tau == 0.0) return 0.0;
  const auto rule = detail::peak_graded_rule(p, tau, {0.0});
  const cplx sum =
      detail::integrate(rule, [&](double a) { return 2.0 * (tau - a) * std::cos(a) * two_point(0.0, a, p.cutoff); });
  return (-0.25 * p.coupling * sum).real();
}

struct SinglePhoton {
  double u2 = 0.0;
  double v2 = 0.0;
  cplx l{0.0, 0.0};
};

/// |U_A|^2 and |V_B|^2 as mode integrals,
///   u2 = 2K int_0^inf dk k e^{-k/kc} sin^2((1 - k) tau/2) / (1 - k)^2
///   v2 = 2K int_0^inf dk k e^{-k/kc} sin^2((1 + k) tau/2) / (1 + k)^2
/// truncated at 40 kc, and l = -(K/4) int int dt1 dt2 e^{i(t1 + t2)} w(r_bar, t1 - t2)
/// (not time ordered).
inline SinglePhoton amp_single_photon(const ModelParams& p, double xi) {
  detail::check_xi(xi);
  const double tau = detail::tau_of(p, xi);
  SinglePhoton out;
  if (tau == 0.0) return out;

  const double kc = p.cutoff;
  const double kmax = 40.0 * kc;
  const double chunk = std::min(M_PI / tau, kc / 8.0);
  const double h = 0.5 * tau;
  auto emission = [&](double sign) {
    auto f = [&](double k) {
      const double s = detail::sinc((1.0 + sign * k) * h);
      return k * std::exp(-k / kc) * h * h * s * s;
    };
    return 2.0 * p.coupling * quad::integrate_chunked(f, 0.0, kmax, chunk);
  };
  out.u2 = emission(-1.0);
  out.v2 = emission(+1.0);

  const auto rule = detail::peak_graded_rule(p, tau, {p.r_bar});
  const cplx sum = std::polar(1.0, tau) * detail::integrate(rule, [&](double a) {
                     return std::sin(tau - a) * (two_point(p.r_bar, a, p.cutoff) + two_point(p.r_bar, -a, p.cutoff));
                   });
  out.l = -0.25 * p.coupling * sum;
  return out;
}

/// u2 and v2 from the normal-ordered double time integrals
///   u2 = (K/4) int int e^{+i(t1 - t2)} w(0, t1 - t2),  v2 = (K/4) int int e^{-i(t1 - t2)} w(0, t1 - t2).
/// An independent route to the mode integrals of amp_single_photon.
inline SinglePhoton single_photon_time_route(const ModelParams& p, double xi) {
  detail::check_xi(xi);
  const double tau = detail::tau_of(p, xi);
  SinglePhoton out;
  if (tau == 0.0) return out;
  const auto rule = detail::peak_graded_rule(p, tau, {0.0});
  auto route = [&](double sign) {
    return detail::integrate(rule, [&](double a) {
      return (tau - a) * (std::polar(1.0, sign * a) * two_point(0.0, a, p.cutoff) +
                          std::polar(1.0, -sign * a) * two_point(0.0, -a, p.cutoff));
    });
  };
  out.u2 = 0.25 * p.coupling * route(+1.0).real();
  out.v2 = 0.25 * p.coupling * route(-1.0).real();
  return out;
}

struct TwoPhoton {
  double g2 = 0.0;
  bool disabled = false;
};

/// |G|^2 = int int dk1 dk2 |G(k1, k2)|^2. Only the creation part of the field
/// enters <2|T(S_B^+ S_A^-)|0>, so Wick's theorem reduces the double mode
/// integral to |U_A|^2 |V_B|^2 + |sum_k U_A(k)^* V_B(k)|^2 = u2 v2 + |l|^2.
inline TwoPhoton amp_two_photon(const ModelParams& p, const SinglePhoton& single) {
  if (!p.include_two_photon) return {0.0, true};
  return {single.u2 * single.v2 + std::norm(single.l), false};
}

inline TwoPhoton amp_two_photon(const ModelParams& p, double xi) {
  detail::check_xi(xi);
  if (!p.include_two_photon) return {0.0, true};
  return amp_two_photon(p, amp_single_photon(p, xi));
}

inline PerturbativeAmplitudes compute_amplitudes(const ModelParams& p, double xi) {
  p.validate();
  detail::check_xi(xi);
  PerturbativeAmplitudes a;
  a.xi = xi;
  a.two_photon_enabled = p.include_two_photon;
  if (xi == 0.0) return a;
  a.x_exch = amp_exchange(p, xi);
  a.re_A = amp_radiative(p, xi);
  const SinglePhoton single = amp_single_photon(p, xi);
  a.u2 = single.u2;
  a.v2 = single.v2;
  a.l = single.l;
  a.g2 = amp_two_photon(p, single).g2;
  return a;
}

/// Same amplitudes at a different coupling. Every amplitude is linear in K
/// except g2, which is rebuilt from the rescaled single-photon terms.
inline PerturbativeAmplitudes rescale_coupling(const PerturbativeAmplitudes& a, double from, double to) {
  if (!(from > 0.0)) throw ValidationError("rescale_coupling: source coupling must be > 0");
  const double s = to / from;
  PerturbativeAmplitudes b = a;
  b.re_A *= s;
  b.x_exch *= s;
  b.u2 *= s;
  b.v2 *= s;
  b.l *= s;
  b.g2 = a.two_photon_enabled ? b.u2 * b.v2 + std::norm(b.l) : 0.0;
  return b;
}

struct AssembledState {
  XStateCoefficients coeffs;
  TwoQubitDensityMatrix rho;  // coeffs / c in the X pattern; positivity not enforced
};

/// rho11 = |V_B|^2, rho22 = 1 + 2 Re A, rho33 = |X|^2 + |G|^2, rho44 = |U_A|^2,
/// rho14 = conj(l), rho23 = conj(X), c = sum of the diagonal.
inline AssembledState assemble(const ModelParams& p, const PerturbativeAmplitudes& a) {
  XStateCoefficients k;
  k.rho11 = a.v2;
  k.rho22 = 1.0 + 2.0 * a.re_A;
  k.rho33 = std::norm(a.x_exch) + a.g2;
  k.rho44 = a.u2;
  k.rho14 = std::conj(a.l);
  k.rho23 = std::conj(a.x_exch);
  if (!(k.rho22 > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "out of second-order regime: rho22 = 1 + 2 Re A = " << k.rho22 << " <= 0 at xi = " << a.xi
        << ", K = " << p.coupling;
    throw OutOfRegimeError(msg.str(), a.xi, p.coupling);
  }
  k.c = k.rho11 + k.rho22 + k.rho33 + k.rho44;
  return {k, TwoQubitDensityMatrix::unchecked(k.matrix() / k.c)};
}

}  // namespace fermicorr
