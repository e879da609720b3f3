#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "curvint/dynamics.hpp"
#include "curvint/errors.hpp"
#include "curvint/invariants.hpp"
#include "curvint/verify.hpp"

using namespace curvint;
using std::numbers::pi;

namespace {

// kappa = 0, g = 1, k_a = 1, k_b = 0, m = 1 at (1, pi/2, 0, 1): J2 = 3.
const SystemSpec kStdSpec = SystemSpec::pw(Curvature(0.0), 1.0, 1.0, 0.0, Rational(1, 1));
const PhaseState kStdState{1.0, pi / 2, 0.0, 1.0};

void expect_complex_near(ComplexValue a, ComplexValue b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

}  // namespace

TEST(Noether, FlatHandValues) {
  const auto fg = SystemSpec::free_geodesic(Curvature(0.0));
  EXPECT_NEAR(noether_p1({1.0, 0.0, 0.0, 1.0}, fg), 0.0, 1e-15);
  EXPECT_NEAR(noether_p2({1.0, 0.0, 0.0, 1.0}, fg), 1.0, 1e-15);
  EXPECT_NEAR(noether_p1({2.5, 0.0, 1.0, 0.0}, fg), 1.0, 1e-15);
  EXPECT_NEAR(noether_p2({2.5, 0.0, 1.0, 0.0}, fg), 0.0, 1e-15);
}

TEST(Noether, FlatAreCartesianMomenta) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto fg = SystemSpec::free_geodesic(Curvature(0.0));
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng), y = u(rng), vx = u(rng), vy = u(rng);
    const double r = std::hypot(x, y), phi = std::atan2(y, x);
    const PhaseState s{r, phi, (x * vx + y * vy) / r, x * vy - y * vx};
    EXPECT_NEAR(noether_p1(s, fg), vx, 1e-12);
    EXPECT_NEAR(noether_p2(s, fg), vy, 1e-12);
    EXPECT_NEAR(angular_j(s), x * vy - y * vx, 1e-15);
  }
}

TEST(Noether, ConservedAlongFlatGeodesics) {
  const auto fg = SystemSpec::free_geodesic(Curvature(0.0));
  const auto traj = integrate({1.5, 0.2, 0.3, -0.8}, fg, 50.0);
  for (auto* f : {&noether_p1, &noether_p2}) {
    const NamedInvariant inv{"P", [&](const PhaseState& s) { return (*f)(s, fg); }};
    EXPECT_LT(drift(traj, inv, 1e-9).max_abs_deviation, 1e-9);
  }
}

TEST(AngularMomentum, ConservedForCentralSpecs) {
  for (double k : {-1.0, 0.0, 1.0}) {
    for (const auto& spec : {SystemSpec::free_geodesic(Curvature(k)), SystemSpec::kepler(Curvature(k), 1.0)}) {
      const auto traj = integrate({1.0, 0.0, 0.2, 0.9}, spec, 100.0);
      const DriftReport d = drift(traj, {"J", [](const PhaseState& s) { return angular_j(s); }}, 1e-10);
      EXPECT_TRUE(d.pass) << "kappa " << k << " drift " << d.relative_drift;
    }
  }
}

TEST(QuadraticIntegrals, J1IsTwiceHamiltonian) {
  Rng rng(9);
  for (double k : {-1.0, 0.0, 1.0}) {
    const auto spec = SystemSpec::pw(Curvature(k), 1.0, 0.8, 0.3, Rational(3, 2));
    for (int i = 0; i < 100; ++i) {
      const PhaseState s = sample_interior_state(spec, rng);
      EXPECT_NEAR(j1(s, spec), 2.0 * hamiltonian(s, spec), 1e-13 * std::max(1.0, std::abs(j1(s, spec))));
    }
  }
}

TEST(QuadraticIntegrals, J2HandValue) { EXPECT_DOUBLE_EQ(j2(kStdState, kStdSpec), 3.0); }

TEST(RungeLenz, CircularOrbitHasNoEccentricity) {
  const auto kep = SystemSpec::kepler(Curvature(0.0), 1.0);
  const auto rl = runge_lenz({1.0, 0.0, 0.0, 1.0}, kep);
  EXPECT_NEAR(rl.i3, 0.0, 1e-15);
  EXPECT_NEAR(rl.i4, 0.0, 1e-15);
  EXPECT_THROW(runge_lenz(kStdState, kStdSpec), std::invalid_argument);
}

TEST(RungeLenz, FlatMatchesCartesianVector) {
  // A = v x L - g r_hat, components (vy L - g x/r, -vx L - g y/r)
  const auto kep = SystemSpec::kepler(Curvature(0.0), 1.3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = u(rng), vx = u(rng), vy = u(rng);
    const double r = std::hypot(x, y), phi = std::atan2(y, x), L = x * vy - y * vx;
    const auto rl = runge_lenz({r, phi, (x * vx + y * vy) / r, L}, kep);
    EXPECT_NEAR(rl.i3, vy * L - 1.3 * x / r, 1e-11);
    EXPECT_NEAR(rl.i4, vx * L + 1.3 * y / r, 1e-11);
  }
}

TEST(RungeLenz, FreeLimitIsProductOfMomenta) {
  const auto kep = SystemSpec::kepler(Curvature(1.0), 0.0);
  const PhaseState s{0.8, 0.4, 0.3, 0.6};
  const auto rl = runge_lenz(s, kep);
  EXPECT_NEAR(rl.i3, noether_p2(s, kep) * 0.6, 1e-15);
  EXPECT_NEAR(rl.i4, noether_p1(s, kep) * 0.6, 1e-15);
}

TEST(VcIntegrals, Reductions) {
  const PhaseState s{0.9, 1.1, 0.4, 0.7};
  for (double k : {-1.0, 0.0, 1.0}) {
    const auto vc0 = SystemSpec::vc(Curvature(k), 1.0, 0.0, 0.0);
    const auto vi = vc_integrals(s, vc0);
    const auto rl = runge_lenz(s, SystemSpec::kepler(Curvature(k), 1.0));
    EXPECT_NEAR(vi.i2, 0.49, 1e-15);
    EXPECT_NEAR(vi.i3, rl.i3, 1e-14);
    const auto vc = SystemSpec::vc(Curvature(k), 1.0, 0.8, 0.3);
    EXPECT_DOUBLE_EQ(vc_integrals(s, vc).i2, j2(s, SystemSpec::pw(Curvature(k), 1.0, 0.8, 0.3, Rational(1, 1))));
  }
  EXPECT_THROW(vc_integrals(s, kStdSpec), std::invalid_argument);
}

TEST(ComplexFactors, StandardStateHandValues) {
  expect_complex_near(m_r(kStdState, kStdSpec), {0.0, -2.0}, 1e-15);
  expect_complex_near(n_phi(kStdState, kStdSpec), {0.0, std::sqrt(3.0)}, 1e-15);
  EXPECT_NEAR(lambda_k(kStdState, kStdSpec), std::sqrt(3.0), 1e-15);
  expect_complex_near(k_constant(kStdState, kStdSpec, 1, 1), {-2.0 * std::sqrt(3.0), 0.0}, 1e-14);
  EXPECT_NEAR(std::norm(k_constant(kStdState, kStdSpec)), 12.0, 1e-13);
}

TEST(ComplexFactors, ModuliAtStandardState) {
  const double H = hamiltonian(kStdState, kStdSpec), J2 = 3.0;
  EXPECT_NEAR(std::norm(m_r(kStdState, kStdSpec)), (2 * H) * J2 + 1.0, 1e-14);
  EXPECT_NEAR(std::norm(n_phi(kStdState, kStdSpec)), J2 * J2 - 2 * 1.0 * J2, 1e-14);
}

TEST(ComplexFactors, VanishingCases) {
  // p_r = 0 and tan_k(r) = J2 / g: both parts of M_r vanish
  const auto spec = SystemSpec::pw(Curvature(1.0), 3.0, 1.0, 0.0, Rational(1, 1));
  const PhaseState s{std::atan(1.0), pi / 2, 0.0, 1.0};
  expect_complex_near(m_r(s, spec), {0.0, 0.0}, 1e-14);
  // p_phi = 0 and m phi = pi/2
  const auto pw = SystemSpec::pw(Curvature(0.0), 1.0, 0.8, 0.3, Rational(2, 1));
  expect_complex_near(n_phi({1.0, pi / 4, 0.2, 0.0}, pw), {0.3, 0.0}, 1e-14);
}

TEST(ComplexFactors, LambdaOnEquator) {
  const auto spec = SystemSpec::pw(Curvature(1.0), 1.0, 0.8, 0.3, Rational(1, 1));
  const PhaseState s{pi / 2, 1.0, 0.2, 0.5};
  EXPECT_NEAR(lambda_k(s, spec), std::sqrt(j2(s, spec)), 1e-15);
  const PhaseState s2{pi / 6, 1.0, 0.2, 0.5};
  EXPECT_NEAR(lambda_k(s2, spec), std::sqrt(j2(s2, spec)) * 4.0, 1e-13);
}

TEST(ComplexFactors, NegativeCasimir) {
  const auto spec = SystemSpec::pw(Curvature(0.0), 1.0, -2.0, 0.0, Rational(1, 1));
  const PhaseState s{1.0, pi / 2, 0.0, 0.5};
  ASSERT_LT(j2(s, spec), 0.0);
  EXPECT_THROW(m_r(s, spec), NegativeCasimirError);
  EXPECT_THROW(n_phi(s, spec), NegativeCasimirError);
  EXPECT_THROW(lambda_k(s, spec), NegativeCasimirError);
  EXPECT_THROW(k_constant(s, spec), NegativeCasimirError);
}

TEST(KConstant, ExponentChecks) {
  const auto spec = SystemSpec::pw(Curvature(0.0), 1.0, 0.8, 0.3, Rational(3, 2));
  const PhaseState s{1.0, 0.5, 0.1, 0.7};
  EXPECT_NO_THROW(k_constant(s, spec, 3, 2));
  EXPECT_THROW(k_constant(s, spec, 6, 4), std::invalid_argument);
  EXPECT_THROW(k_constant(s, spec, 2, 1), std::invalid_argument);
  const auto M = m_r(s, spec), N = std::conj(n_phi(s, spec));
  expect_complex_near(k_constant(s, spec), M * M * M * N * N, 1e-12 * std::abs(M * M * M * N * N));
}

TEST(KConstant, ModulusIsMultiplicative) {
  Rng rng(31);
  for (const Rational m : {Rational(1, 1), Rational(3, 1), Rational(1, 2), Rational(3, 2)}) {
    const auto spec = SystemSpec::pw(Curvature(1.0), 1.0, 0.8, 0.3, m);
    for (int i = 0; i < 50; ++i) {
      const PhaseState s = sample_interior_state(spec, rng);
      const double expect = std::pow(std::norm(m_r(s, spec)), m.num()) * std::pow(std::norm(n_phi(s, spec)), m.den());
      EXPECT_NEAR(std::norm(k_constant(s, spec)), expect, 1e-12 * expect);
    }
  }
}

TEST(Ipow, MatchesRepeatedProduct) {
  const ComplexValue z{0.3, -1.2};
  ComplexValue p{1.0, 0.0};
  for (unsigned n = 0; n < 9; ++n) {
    expect_complex_near(ipow(z, n), p, 1e-13);
    p *= z;
  }
}

TEST(KConstant, KeplerReductionConserved) {
  // k_a = k_b = 0, m = 1: K built from the Kepler data is still conserved
  const auto spec = SystemSpec::pw(Curvature(1.0), 1.0, 0.0, 0.0, Rational(1, 1));
  const auto traj = integrate({1.0, 1.0, 0.2, 0.8}, spec, 100.0);
  ASSERT_EQ(traj.termination(), Termination::Completed);
  for (const auto& inv : invariants_for(spec)) {
    EXPECT_LT(drift(traj, inv, 1e-7).relative_drift, 1e-7) << inv.name;
  }
}

TEST(InvariantColumns, PerKind) {
  const auto names = [](const SystemSpec& s) {
    std::string out;
    for (const auto& inv : invariants_for(s)) out += inv.name + ",";
    return out;
  };
  EXPECT_EQ(names(SystemSpec::free_geodesic(Curvature(0.0))), "H,J2,");
  EXPECT_EQ(names(SystemSpec::kepler(Curvature(0.0), 1.0)), "H,J2,I3,I4,");
  EXPECT_EQ(names(SystemSpec::vc(Curvature(0.0), 1.0, 0.8, 0.3)), "H,J2,I3,K_re,K_im,");
  EXPECT_EQ(names(kStdSpec), "H,J2,K_re,K_im,");
}

TEST(InvariantColumns, CsvHeader) {
  const auto traj = integrate(kStdState, kStdSpec, 1.0);
  std::ostringstream os;
  write_trajectory_csv(os, traj, kStdSpec);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,r,phi,p_r,p_phi,H,J2,K_re,K_im");
}
