#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fermicorr/amplitudes.hpp"
#include "fermicorr/measures.hpp"
#include "fermicorr/sweep.hpp"

using namespace fermicorr;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

ModelParams params(double k, double cutoff = 50.0) {
  ModelParams p;
  p.coupling = k;
  p.cutoff = cutoff;
  return p;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Complex integral over [a, b] in fixed-width GK61 pieces.
cplx piecewise(const std::function<cplx(double)>& f, double a, double b, double width) {
  cplx sum{0.0, 0.0};
  for (double lo = a; lo < b; lo += width) {
    const double hi = std::min(b, lo + width);
    sum += cplx(GK::integrate([&](double x) { return f(x).real(); }, lo, hi, 10, 1e-13),
                GK::integrate([&](double x) { return f(x).imag(); }, lo, hi, 10, 1e-13));
  }
  return sum;
}

// Brute-force double sum over a square Gauss-Legendre grid on [0, tau]^2.
cplx tensor_sum(double tau, std::size_t n, const std::function<cplx(double, double)>& f) {
  const auto rule = quad::gauss_legendre(n, 0.0, tau);
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    cplx row{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) row += rule.weights[j] * f(rule.nodes[i], rule.nodes[j]);
    sum += rule.weights[i] * row;
  }
  return sum;
}

constexpr std::size_t kTensorNodes = 1024;

// int_0^tau e^{i w t} dt
cplx time_window(double w, double tau) { return tau * std::polar(1.0, 0.5 * w * tau) * detail::sinc(0.5 * w * tau); }

// Mode-resolved emission amplitudes for a photon of wavenumber k (both signs):
// alpha from A's resonant decay at x = 0, beta from B's counter-rotating
// excitation at x = r.
struct Modes {
  ModelParams p;
  double tau;
  cplx alpha(double k) const {
    const double a = std::sqrt(0.25 * p.coupling * std::abs(k) * std::exp(-std::abs(k) / p.cutoff));
    return a * time_window(std::abs(k) - 1.0, tau);
  }
  cplx beta(double k) const {
    const double a = std::sqrt(0.25 * p.coupling * std::abs(k) * std::exp(-std::abs(k) / p.cutoff));
    return a * std::polar(1.0, -k * p.r_bar) * time_window(std::abs(k) + 1.0, tau);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// two_point

TEST(TwoPoint, CoincidenceLimit) { EXPECT_EQ(two_point(0.0, 0.0, 100.0), cplx(20000.0, 0.0)); }

TEST(TwoPoint, HermitianInTime) {
  for (double dx : {0.0, 0.3, 1.7})
    for (double dt : {-2.0, -0.4, 0.0, 0.25, 1.3}) {
      const cplx a = two_point(dx, dt, 50.0);
      const cplx b = std::conj(two_point(dx, -dt, 50.0));
      EXPECT_NEAR(a.real(), b.real(), 1e-12 * std::abs(a));
      EXPECT_NEAR(a.imag(), b.imag(), 1e-12 * std::abs(a));
    }
}

TEST(TwoPoint, MatchesModeIntegral) {
  const double dx = 0.5, dt = 0.3, kc = 50.0;
  const cplx direct = piecewise(
      [&](double k) { return k * std::exp(-k / kc) * 2.0 * std::cos(k * dx) * std::polar(1.0, -k * dt); }, 0.0,
      40.0 * kc, 2.0);
  EXPECT_LT(rel(two_point(dx, dt, kc), direct), 1e-6);
}

TEST(TwoPoint, OrderedKernelIsEvenInTime) {
  EXPECT_EQ(two_point_ordered(0.7, -0.2, 50.0), two_point(0.7, 0.2, 50.0));
}

// Faithful to the stated causality bound; with exponential regularization the
// commutator has power-law tails, so this is expected to fail.
TEST(Causality, CommutatorIntegratedOutsideLightConeIsNegligible) {
  const ModelParams p;
  const double eps = 1.0 / p.cutoff, r = p.r_bar;
  auto comm = [&](double d) { return (two_point(r, d, p.cutoff) - two_point(r, -d, p.cutoff)).imag(); };
  double peak = 0.0;
  for (int i = -4000; i <= 4000; ++i) peak = std::max(peak, std::abs(comm(r + i * eps / 1000.0)));
  // The commutator is odd, so the largest window integral sits on one side of zero.
  const double window = std::abs(GK::integrate(comm, 0.0, r - 5.0 * eps, 15, 1e-12));
  EXPECT_LT(window, 1e-4 * peak) << "window integral " << window << " vs peak " << peak;
}

TEST(Causality, CommutatorPointwiseOutsideLightConeIsNegligible) {
  const ModelParams p;
  const double eps = 1.0 / p.cutoff, r = p.r_bar;
  auto comm = [&](double d) { return std::abs((two_point(r, d, p.cutoff) - two_point(r, -d, p.cutoff)).imag()); };
  double peak = 0.0;
  for (int i = -4000; i <= 4000; ++i) peak = std::max(peak, comm(r + i * eps / 1000.0));
  double outside = 0.0;
  for (int i = 0; i <= 1000; ++i) outside = std::max(outside, comm((r - 5.0 * eps) * i / 1000.0));
  EXPECT_LT(outside, 1e-4 * peak) << "outside " << outside << " vs peak " << peak;
}

// The commutator part carries causal signalling and peaks on the light cone.
TEST(Causality, CommutatorPeaksOnLightCone) {
  const ModelParams p;
  const double eps = 1.0 / p.cutoff, r = p.r_bar;
  auto comm = [&](double d) { return std::abs((two_point(r, d, p.cutoff) - two_point(r, -d, p.cutoff)).imag()); };
  double best_d = 0.0, best = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double d = 2.0 * r * i / 20000.0;
    if (comm(d) > best) best = comm(d), best_d = d;
  }
  EXPECT_NEAR(best_d, r, 2.0 * eps);
}

// ---------------------------------------------------------------------------
// amplitudes against brute-force tensor-product double sums

TEST(Exchange, ZeroAtInitialTime) { EXPECT_EQ(amp_exchange(params(0.1), 0.0), cplx(0.0, 0.0)); }

TEST(Exchange, MatchesTensorProductSum) {
  const auto p = params(0.1);
  for (double xi : {0.5, 1.0, 2.0}) {
    const double tau = xi * p.r_bar;
    const cplx ref = 0.25 * p.coupling * tensor_sum(tau, kTensorNodes, [&](double t1, double t2) {
                       return std::polar(1.0, t1 - t2) * two_point_ordered(p.r_bar, t1 - t2, p.cutoff);
                     });
    EXPECT_LT(rel(amp_exchange(p, xi), ref), 1e-7) << "xi=" << xi;
  }
}

TEST(Exchange, NodeDoublingAtLateTime) {
  auto p = params(0.1);
  const cplx a = amp_exchange(p, 2.0);
  p.quad_points *= 2;
  EXPECT_LT(rel(a, amp_exchange(p, 2.0)), 1e-5);
}

TEST(Radiative, ZeroAtInitialTime) { EXPECT_EQ(amp_radiative(params(0.1), 0.0), 0.0); }

TEST(Radiative, MatchesTensorProductSum) {
  const auto p = params(0.1);
  for (double xi : {0.5, 1.0, 2.0}) {
    const double tau = xi * p.r_bar;
    const cplx sum = tensor_sum(tau, kTensorNodes, [&](double t1, double t2) {
      const double d = t1 - t2;
      return 0.5 * (std::polar(1.0, d) + std::polar(1.0, -d)) * two_point_ordered(0.0, d, p.cutoff);
    });
    const double ref = (-0.25 * p.coupling * sum).real();
    EXPECT_LT(std::abs(amp_radiative(p, xi) - ref), 1e-7 * std::abs(ref)) << "xi=" << xi;
  }
}

TEST(Radiative, NegativeOnWholeGrid) {
  const auto p = params(0.1);
  for (int i = 1; i <= 40; ++i) EXPECT_LT(amp_radiative(p, 0.05 * i), 0.0);
}

TEST(Radiative, NormConservationAtMidTime) {
  const auto a = compute_amplitudes(params(0.1), 1.5);
  EXPECT_LE(std::abs(a.u2 + a.v2 + 2.0 * a.re_A), 0.5 * 0.1 * 0.1);
}

TEST(SinglePhoton, ZeroAtInitialTime) {
  const auto s = amp_single_photon(params(0.1), 0.0);
  EXPECT_EQ(s.u2, 0.0);
  EXPECT_EQ(s.v2, 0.0);
  EXPECT_EQ(s.l, cplx(0.0, 0.0));
}

TEST(SinglePhoton, ModeRouteMatchesTimeRoute) {
  const auto p = params(0.1);
  for (double xi : {0.3, 1.0, 2.0}) {
    const auto mode = amp_single_photon(p, xi);
    const auto time = single_photon_time_route(p, xi);
    EXPECT_LT(std::abs(mode.u2 - time.u2), 1e-5 * mode.u2) << "xi=" << xi;
    EXPECT_LT(std::abs(mode.v2 - time.v2), 1e-5 * mode.v2) << "xi=" << xi;
  }
}

TEST(SinglePhoton, TimeRouteMatchesTensorProductSum) {
  const auto p = params(0.1);
  const double tau = 1.0 * p.r_bar;
  const auto time = single_photon_time_route(p, 1.0);
  for (double sign : {1.0, -1.0}) {
    const cplx sum = tensor_sum(tau, kTensorNodes, [&](double t1, double t2) {
      return std::polar(1.0, sign * (t1 - t2)) * two_point(0.0, t1 - t2, p.cutoff);
    });
    const double ref = 0.25 * p.coupling * sum.real();
    EXPECT_LT(std::abs((sign > 0 ? time.u2 : time.v2) - ref), 1e-7 * ref);
  }
}

TEST(SinglePhoton, PairCoherenceMatchesTensorProductSum) {
  const auto p = params(0.1);
  for (double xi : {0.5, 1.0, 2.0}) {
    const double tau = xi * p.r_bar;
    const cplx ref = -0.25 * p.coupling * tensor_sum(tau, kTensorNodes, [&](double t1, double t2) {
                       return std::polar(1.0, t1 + t2) * two_point(p.r_bar, t1 - t2, p.cutoff);
                     });
    EXPECT_LT(rel(amp_single_photon(p, xi).l, ref), 1e-7) << "xi=" << xi;
  }
}

TEST(SinglePhoton, ModeAmplitudesReproduceAllThree) {
  const auto p = params(0.1);
  for (double xi : {0.5, 1.5}) {
    const Modes m{p, xi * p.r_bar};
    const double kmax = 40.0 * p.cutoff;
    const double u2 = piecewise([&](double k) { return cplx(std::norm(m.alpha(k))); }, -kmax, kmax, 1.0).real();
    const double v2 = piecewise([&](double k) { return cplx(std::norm(m.beta(k))); }, -kmax, kmax, 1.0).real();
    const cplx overlap = piecewise([&](double k) { return m.alpha(k) * std::conj(m.beta(k)); }, -kmax, kmax, 1.0);
    const auto s = amp_single_photon(p, xi);
    EXPECT_LT(std::abs(s.u2 - u2), 1e-8 * u2);
    EXPECT_LT(std::abs(s.v2 - v2), 1e-8 * v2);
    // sum_k alpha beta^* = -conj(l)
    EXPECT_LT(rel(s.l, -std::conj(overlap)), 1e-7) << "xi=" << xi;
  }
}

TEST(SinglePhoton, ResonantEmissionDominates) {
  for (double k : {0.05, 0.1, 0.2}) {
    const auto p = params(k);
    for (int i = 1; i <= 40; ++i) {
      const auto s = amp_single_photon(p, 0.05 * i);
      EXPECT_GE(s.u2, s.v2) << "K=" << k << " xi=" << 0.05 * i;
    }
  }
}

// ---------------------------------------------------------------------------
// two-photon term against a direct two-mode grid

TEST(TwoPhoton, ZeroAtInitialTimeAndWhenDisabled) {
  EXPECT_EQ(amp_two_photon(params(0.1), 0.0).g2, 0.0);
  auto p = params(0.1);
  p.include_two_photon = false;
  const auto t = amp_two_photon(p, 1.0);
  EXPECT_EQ(t.g2, 0.0);
  EXPECT_TRUE(t.disabled);
  EXPECT_EQ(compute_amplitudes(p, 1.0).g2, 0.0);
}

TEST(TwoPhoton, MatchesDirectTwoModeIntegral) {
  // cutoff 10 keeps the k-range small enough for a full 2D grid.
  const auto p = params(0.1, 10.0);
  for (double xi : {1.0, 2.0}) {
    const Modes m{p, xi * p.r_bar};
    const double kmax = 40.0 * p.cutoff;
    const auto base = quad::gauss_legendre(12);
    std::vector<double> k, w;
    for (double lo = -kmax; lo < kmax; lo += 2.0)
      for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        k.push_back(lo + 1.0 + base.nodes[i]);
        w.push_back(base.weights[i]);
      }
    std::vector<cplx> a(k.size()), b(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      a[i] = m.alpha(k[i]);
      b[i] = m.beta(k[i]);
    }
    // |G(k1, k2)|^2 summed over the symmetric two-photon states
    double g2 = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) row += w[j] * std::norm(a[i] * b[j] + a[j] * b[i]);
      g2 += w[i] * row;
    }
    g2 *= 0.5;
    const double got = amp_two_photon(p, xi).g2;
    EXPECT_LT(std::abs(got - g2), 1e-7 * g2) << "xi=" << xi << " got " << got << " grid " << g2;
  }
}

TEST(TwoPhoton, BoundedByProductOfSinglePhotonTerms) {
  const auto p = params(0.1);
  for (int i = 1; i <= 40; ++i) {
    const auto a = compute_amplitudes(p, 0.05 * i);
    EXPECT_GE(a.g2, 0.0);
    EXPECT_LE(a.g2, 10.0 * a.u2 * a.v2);
  }
}

TEST(TwoPhoton, ExchangeShareInsideLightCone) {
  const auto p = params(0.1);
  for (int i = 1; i <= 20; ++i) {
    const auto a = compute_amplitudes(p, 1.0 + 0.05 * i);
    EXPECT_LT(a.g2 / (std::norm(a.x_exch) + a.g2), 1.0);
  }
}

// ---------------------------------------------------------------------------
// whole-pipeline properties

TEST(Amplitudes, AllZeroAtInitialTime) {
  const auto a = compute_amplitudes(params(0.1), 0.0);
  EXPECT_EQ(a.re_A, 0.0);
  EXPECT_EQ(a.x_exch, cplx(0.0, 0.0));
  EXPECT_EQ(a.u2, 0.0);
  EXPECT_EQ(a.v2, 0.0);
  EXPECT_EQ(a.l, cplx(0.0, 0.0));
  EXPECT_EQ(a.g2, 0.0);
}

TEST(Amplitudes, ParameterValidation) {
  auto bad = [](auto mutate) {
    ModelParams p;
    mutate(p);
    return p;
  };
  EXPECT_THROW(compute_amplitudes(bad([](ModelParams& p) { p.r_bar = 0.0; }), 1.0), ValidationError);
  EXPECT_THROW(compute_amplitudes(bad([](ModelParams& p) { p.coupling = -0.1; }), 1.0), ValidationError);
  EXPECT_THROW(compute_amplitudes(bad([](ModelParams& p) { p.cutoff = 5.0; }), 1.0), ValidationError);
  EXPECT_THROW(compute_amplitudes(bad([](ModelParams& p) { p.quad_points = 16; }), 1.0), ValidationError);
  EXPECT_THROW(compute_amplitudes(ModelParams{}, -0.1), ValidationError);
}

TEST(Amplitudes, NormConservationOverGrid) {
  for (double k : {0.02, 0.1, 0.2}) {
    for (int qp : {128, 256}) {
      auto p = params(k);
      p.quad_points = qp;
      for (int i = 0; i <= 40; ++i) {
        const auto a = compute_amplitudes(p, 0.05 * i);
        EXPECT_LE(std::abs(a.u2 + a.v2 + 2.0 * a.re_A), 0.5 * k * k);
      }
    }
  }
}

TEST(Amplitudes, ConvergedUnderNodeDoubling) {
  const auto p = params(0.1);
  auto fine = p;
  fine.quad_points = 512;
  for (int i = 1; i <= 10; ++i) {
    const auto a = compute_amplitudes(p, 0.2 * i);
    const auto b = compute_amplitudes(fine, 0.2 * i);
    EXPECT_LT(std::abs(a.re_A - b.re_A), 1e-4 * std::abs(b.re_A));
    EXPECT_LT(rel(a.x_exch, b.x_exch), 1e-4);
    EXPECT_LT(rel(a.l, b.l), 1e-4);
    EXPECT_LT(std::abs(a.g2 - b.g2), 1e-4 * b.g2);
  }
}

TEST(Amplitudes, PerturbativeScaling) {
  const auto p = params(0.05);
  const auto q = params(0.1);
  for (double xi : {0.5, 1.0, 1.5}) {
    const auto a = compute_amplitudes(p, xi);
    const auto b = compute_amplitudes(q, xi);
    EXPECT_NEAR(b.u2 / a.u2, 2.0, 0.1);
    EXPECT_NEAR(b.v2 / a.v2, 2.0, 0.1);
    EXPECT_NEAR(b.re_A / a.re_A, 2.0, 0.1);
    EXPECT_NEAR(std::norm(b.x_exch) / std::norm(a.x_exch), 4.0, 0.2);
    EXPECT_NEAR(b.g2 / a.g2, 4.0, 0.2);
  }
}

TEST(Amplitudes, RescaleMatchesDirectEvaluation) {
  const auto unit = compute_amplitudes(params(1.0), 1.3);
  const auto direct = compute_amplitudes(params(0.07), 1.3);
  const auto scaled = rescale_coupling(unit, 1.0, 0.07);
  EXPECT_LT(std::abs(scaled.re_A - direct.re_A), 1e-14);
  EXPECT_LT(std::abs(scaled.x_exch - direct.x_exch), 1e-14);
  EXPECT_LT(std::abs(scaled.l - direct.l), 1e-14);
  EXPECT_LT(std::abs(scaled.g2 - direct.g2), 1e-14);
  EXPECT_THROW(rescale_coupling(unit, 0.0, 1.0), ValidationError);
}

TEST(Amplitudes, ContinuousInTime) {
  const auto p = params(0.1);
  std::vector<PerturbativeAmplitudes> g;
  for (int i = 0; i <= 400; ++i) g.push_back(compute_amplitudes(p, 0.005 * i));
  const std::vector<std::pair<const char*, std::function<double(const PerturbativeAmplitudes&)>>> fields = {
      {"re_A", [](const auto& a) { return a.re_A; }},      {"re_X", [](const auto& a) { return a.x_exch.real(); }},
      {"im_X", [](const auto& a) { return a.x_exch.imag(); }}, {"u2", [](const auto& a) { return a.u2; }},
      {"v2", [](const auto& a) { return a.v2; }},           {"re_L", [](const auto& a) { return a.l.real(); }},
      {"im_L", [](const auto& a) { return a.l.imag(); }},   {"g2", [](const auto& a) { return a.g2; }}};
  for (const auto& [name, f] : fields) {
    std::vector<double> jump;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) jump.push_back(std::abs(f(g[i + 1]) - f(g[i])));
    for (std::size_t i = 0; i < jump.size(); ++i) {
      const double left = i > 0 ? jump[i - 1] : 0.0;
      const double right = i + 1 < jump.size() ? jump[i + 1] : 0.0;
      EXPECT_LE(jump[i], 5.0 * std::max(left, right) + 1e-12) << name << " at xi=" << g[i].xi;
    }
  }
}

// ---------------------------------------------------------------------------
// assemble

TEST(Assemble, InitialStateFromZeroAmplitudes) {
  const auto s = assemble(params(0.1), PerturbativeAmplitudes{});
  EXPECT_EQ(s.coeffs.c, 1.0);
  Matrix4c eg = Matrix4c::Zero();
  eg(1, 1) = 1.0;
  EXPECT_EQ(s.rho.matrix(), eg);
}

TEST(Assemble, HandWorkedCoefficients) {
  PerturbativeAmplitudes a;
  a.u2 = 0.01;
  a.v2 = 0.004;
  a.re_A = -0.007;
  a.x_exch = {0.0, 0.01};
  const auto s = assemble(params(0.1), a);
  EXPECT_NEAR(s.coeffs.c, 1.0001, 1e-15);
  // 0.986 / 1.0001
  EXPECT_NEAR(s.rho(1, 1).real(), 0.98590140985901410, 1e-14);
  EXPECT_EQ(s.coeffs.rho23, cplx(0.0, -0.01));
  EXPECT_NEAR(s.coeffs.rho33, 1e-4, 1e-18);
}

TEST(Assemble, TraceIsSumOfPopulations) {
  const auto a = compute_amplitudes(params(0.1), 1.5);
  const auto s = assemble(params(0.1), a);
  const auto& k = s.coeffs;
  EXPECT_EQ(k.c, k.rho11 + k.rho22 + k.rho33 + k.rho44);
  EXPECT_NEAR(s.rho.matrix().trace().real(), 1.0, 1e-15);
}

TEST(Assemble, OutOfRegimeNamesThePoint) {
  const auto p = params(0.18);
  try {
    assemble(p, compute_amplitudes(p, 1.0));
    FAIL() << "expected OutOfRegimeError";
  } catch (const OutOfRegimeError& e) {
    EXPECT_EQ(e.xi(), 1.0);
    EXPECT_EQ(e.coupling(), 0.18);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("xi = 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("K = 0.17999999999999999"), std::string::npos) << msg;
  }
}

TEST(Assemble, DefaultGridStatesAreValid) {
  for (double k : kDefaultCouplings) {
    const auto p = params(k);
    for (int i = 0; i <= 400; i += 4) {
      const auto s = assemble(p, compute_amplitudes(p, 0.005 * i));
      EXPECT_TRUE(s.rho.is_valid()) << "K=" << k << " xi=" << 0.005 * i << ": "
                                    << find_violation(s.rho.matrix()).value_or("");
      const auto n = s.coeffs.normalized();
      EXPECT_LE(std::norm(n.rho14), n.rho11 * n.rho44 * (1 + 1e-6));
      EXPECT_LE(std::norm(n.rho23), n.rho22 * n.rho33 * (1 + 1e-6));
    }
  }
}
