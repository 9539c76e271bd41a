#pragma once

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fermicorr/errors.hpp"

namespace fermicorr::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// (P_n(x), P_{n-1}(x)) by the three-term recurrence, n >= 1.
inline std::pair<double, double> legendre_pair(std::size_t n, double x) {
  double prev = 1.0;
  double cur = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double next = ((2.0 * kk - 1.0) * x * cur - (kk - 1.0) * prev) / kk;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
/// Newton iteration on P_n from the Tricomi initial guess.
inline Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw ValidationError("Gauss-Legendre rule needs at least one node");
  Rule rule{std::vector<double>(n), std::vector<double>(n)};
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pm] = detail::legendre_pair(n, x);
      const double dx = pn / (nn * (x * pn - pm) / (x * x - 1.0));
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = detail::legendre_pair(n, x);
    const double dp = nn * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Gauss-Legendre rule mapped onto [a, b].
inline Rule gauss_legendre(std::size_t n, double a, double b) {
  Rule r = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

namespace detail {

template <class F>
double kronrod_adaptive(F& f, double a, double b, double abs_tol, int depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0;
  const double val = GK::integrate(f, a, b, 0, 0.0, &err);
  if (err <= abs_tol || depth == 0) return val;
  const double mid = 0.5 * (a + b);
  return kronrod_adaptive(f, a, mid, 0.5 * abs_tol, depth - 1) + kronrod_adaptive(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (61 point) over [a, b] split into chunks of at most
/// `chunk` length, for integrands that oscillate with a known period. The
/// tolerance is global: rel_tol times the L1 norm estimated by a first pass,
/// shared evenly between chunks, so near-zero chunks never force deep splits.
template <class F>
double integrate_chunked(F&& f, double a, double b, double chunk, double rel_tol = 1e-12) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (!(chunk > 0.0)) throw ValidationError("integrate_chunked: chunk must be > 0");
  std::vector<std::pair<double, double>> pieces;
  for (double lo = a; lo < b;) {
    const double hi = std::min(b, lo + chunk);
    pieces.emplace_back(lo, hi);
    lo = hi;
  }
  double l1 = 0.0;
  for (const auto& [lo, hi] : pieces) {
    double err = 0.0;
    double norm = 0.0;
    GK::integrate(f, lo, hi, 0, 0.0, &err, &norm);
    l1 += norm;
  }
  const double share = rel_tol * l1 / static_cast<double>(std::max<std::size_t>(1, pieces.size()));
  double total = 0.0;
  for (const auto& [lo, hi] : pieces) total += detail::kronrod_adaptive(f, lo, hi, share, 15);
  return total;
}

}  // namespace fermicorr::quad
