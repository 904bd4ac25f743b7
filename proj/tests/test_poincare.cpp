#include "bgls/poincare.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "bgls/gamma.hpp"

using namespace bgls;

namespace {
const QuadratureConfig kQuad;
}

TEST(CriticalExponent, Values) {
  EXPECT_DOUBLE_EQ(critical_exponent(PoincareParams(0.0, 3)), 3.0);
  EXPECT_DOUBLE_EQ(critical_exponent(PoincareParams(0.5, 2)), 3.0);
  // d(1+alpha) = 1 is not admissible for the bounded case.
  const PoincareParams edge(-0.5, 2);
  EXPECT_DOUBLE_EQ(critical_exponent(edge), 1.0);
  EXPECT_FALSE(edge.bounded_admissible());
}

TEST(PoincareRatio, ConstantIsZero) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile f0 = center(make_constant(7.0, ball), ball, kQuad);
  EXPECT_DOUBLE_EQ(poincare_ratio(f0, ball, params, 1.5, kQuad), 0.0);
}

TEST(PoincareRatio, ScalingInvariance) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile f0 = center(make_u_delta(2.0), ball, kQuad);
  const double base = poincare_ratio(f0, ball, params, 1.7, kQuad);
  for (double c : {2.0, -3.0, 0.1}) {
    const double scaled = poincare_ratio(f0.scaled(c), ball, params, 1.7, kQuad);
    EXPECT_NEAR(scaled, base, 1e-10 * base);
  }
}

TEST(PoincareRatio, RefinedQuadratureOracle) {
  // Same ratio through an independent higher-resolution pipeline (halved
  // tolerances) agrees to 1e-5 relative.
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile f0 = center(make_u_delta(2.0), ball, kQuad);
  QuadratureConfig fine = kQuad;
  fine.rel_tol *= 0.5;
  fine.abs_tol *= 0.5;
  const RadialProfile f0_fine = center(make_u_delta(2.0), ball, fine);
  const double coarse = poincare_ratio(f0, ball, params, 1.9, kQuad);
  const double refined = poincare_ratio(f0_fine, ball, params, 1.9, fine);
  EXPECT_NEAR(coarse, refined, 1e-5 * refined);
}

TEST(PoincareRatio, PositiveForNonconstantProfiles) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile f0 = center(make_u_delta(1.5), ball, kQuad);
  for (double p : {1.2, 1.5, 1.9}) {
    EXPECT_GT(poincare_ratio(f0, ball, params, p, kQuad), 0.0);
  }
}

TEST(Theorem1, ConstantGivesZero) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const PsiFunction psi = make_power_psi(1.0, 2.0, 1.0, 1.0);
  GridSpec grid;
  grid.count = 64;
  const Theorem1Report report =
      theorem1_verify(make_constant(3.0, ball), ball, params, psi, grid, kQuad);
  EXPECT_DOUBLE_EQ(report.estimated_c, 0.0);
  EXPECT_TRUE(report.grid_stable);
}

TEST(Theorem1, UDeltaFiniteAndGridStable) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const PsiFunction psi = make_power_psi(1.0, 2.0, 1.0, 1.0);
  GridSpec grid;
  grid.count = 96;
  const Theorem1Report report =
      theorem1_verify(make_u_delta(2.0), ball, params, psi, grid, kQuad);
  EXPECT_TRUE(std::isfinite(report.estimated_c));
  EXPECT_GT(report.estimated_c, 0.0);
  EXPECT_TRUE(report.grid_stable);
}

TEST(Theorem1, PsiRescalingBitIdentical) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const PsiFunction psi = make_power_psi(1.0, 2.0, 1.0, 1.0);
  const PsiFunction psi2 =
      make_custom_psi(psi.interval(), [psi](double p) { return 2.0 * psi(p); });
  GridSpec grid;
  grid.count = 64;
  const RadialProfile u = make_u_delta(2.0);
  const Theorem1Report a = theorem1_verify(u, ball, params, psi, grid, kQuad);
  const Theorem1Report b = theorem1_verify(u, ball, params, psi2, grid, kQuad);
  // Bit identity of every field (memcmp would also compare struct padding).
  EXPECT_EQ(std::memcmp(&a.estimated_c, &b.estimated_c, sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(&a.argmax_p, &b.argmax_p, sizeof(double)), 0);
  EXPECT_EQ(a.grid_stable, b.grid_stable);
}

TEST(Theorem1, ChainIdentityWithPerPRatio) {
  // The per-p ratio of the verification equals V(f, p) exactly.
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const PsiFunction psi = make_power_psi(1.0, 2.0, 1.0, 1.0);
  GridSpec grid;
  grid.count = 32;
  const RadialProfile u = make_u_delta(2.0);
  const Theorem1Report report = theorem1_verify(u, ball, params, psi, grid, kQuad);
  const RadialProfile f0 = center(u, ball, kQuad);
  double best = 0.0;
  for (double p : build_exponent_grid(psi.interval(), grid)) {
    try {
      best = std::max(best, poincare_ratio(f0, ball, params, p, kQuad));
    } catch (const std::runtime_error&) {
      // non-converged rows are skipped on both sides
    }
  }
  EXPECT_NEAR(report.estimated_c, best, 1e-12 * best);
}

TEST(SharpnessScan, BoundedBelowSlopeAndPositivity) {
  const PoincareParams params(0.0, 2);
  const ScanResult scan = sharpness_scan(SharpnessCase::bounded_below, 2.0, params,
                                         kQuad, default_epsilons());
  EXPECT_EQ(scan.dropped, 0);
  EXPECT_NEAR(scan.fit.slope, 0.0, 0.15);
  double min_v = 1e300;
  for (const auto& row : scan.rows) {
    ASSERT_TRUE(row.converged);
    EXPECT_GT(row.ratio, 0.0);
    min_v = std::min(min_v, row.ratio);
  }
  EXPECT_GT(min_v, 0.01);
}

TEST(SharpnessScan, BoundedBelowComponentSlopes) {
  const PoincareParams params(0.0, 2);
  const ScanResult scan = sharpness_scan(SharpnessCase::bounded_below, 2.0, params,
                                         kQuad, default_epsilons());
  const LineFit num = fit_scan_series(scan, ScanSeries::numerator);
  const LineFit den = fit_scan_series(scan, ScanSeries::denominator);
  EXPECT_NEAR(num.slope, -2.5, 0.1);
  EXPECT_NEAR(den.slope, -1.5, 0.1);
}

TEST(SharpnessScan, UnboundedAboveSlope) {
  const PoincareParams params(0.0, 2);
  const ScanResult scan = sharpness_scan(SharpnessCase::unbounded_above, 2.0, params,
                                         kQuad, default_epsilons());
  EXPECT_EQ(scan.dropped, 0);
  EXPECT_NEAR(scan.fit.slope, 0.0, 0.15);
}

TEST(SharpnessScan, UnboundedInfinityBounded) {
  const PoincareParams params(0.0, 2);
  const ScanResult scan = sharpness_scan(SharpnessCase::unbounded_infinity, 2.0, params,
                                         kQuad, default_infinity_grid());
  double lo = 1e300, hi = 0.0;
  for (const auto& row : scan.rows) {
    ASSERT_TRUE(row.converged);
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  EXPECT_LE(hi / lo, 3.0);
}

TEST(SharpnessScan, ThreadCountDoesNotChangeResult) {
  const PoincareParams params(0.0, 2);
  const auto eps = default_epsilons();
  const ScanResult serial =
      sharpness_scan(SharpnessCase::bounded_below, 2.0, params, kQuad, eps, 1);
  const ScanResult parallel =
      sharpness_scan(SharpnessCase::bounded_below, 2.0, params, kQuad, eps, 4);
  ASSERT_EQ(serial.rows.size(), parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    EXPECT_EQ(serial.rows[i].ratio, parallel.rows[i].ratio);
    EXPECT_EQ(serial.rows[i].numerator_norm, parallel.rows[i].numerator_norm);
  }
}

TEST(SharpnessScan, RejectsBadParameters) {
  const PoincareParams params(0.0, 2);
  EXPECT_THROW(sharpness_scan(SharpnessCase::bounded_below, 1.0, params, kQuad,
                              default_epsilons()),
               std::invalid_argument);
  const PoincareParams inadmissible(-0.6, 2);
  EXPECT_THROW(sharpness_scan(SharpnessCase::bounded_below, 2.0, inadmissible, kQuad,
                              default_epsilons()),
               std::invalid_argument);
}

TEST(Example1Membership, BglsNormChainFinite) {
  // With f = u_Delta on the bounded domain, g(p) = | |grad f| |_p, and
  // psi in G(1, d; beta, gamma): scale f so g <= psi everywhere, then the
  // target-space norm of T f against (p-1)^{-beta} (d-p)^{-(gamma+1)} is the
  // finite constant K; it must be grid-stable.
  const int d = 2;
  const DomainSpec ball = DomainSpec::unit_ball(d);
  const PoincareParams params(0.0, d);
  const double beta = 1.0, gamma = 1.0;
  const PsiFunction psi = make_power_psi(1.0, d, beta, gamma);
  const PsiFunction target = make_power_psi(1.0, d, beta, gamma + 1.0);
  const RadialProfile u = make_u_delta(2.0);
  const RadialProfile u0 = center(u, ball, kQuad);

  const auto grad_lp = [&](double p) {
    const NormResult n = lp_norm_weighted(u, ball, p, params.alpha, kQuad, Field::gradient);
    if (!n.converged) throw std::runtime_error("grad norm diverged");
    return n.value;
  };
  const auto t_lp = [&](double p) {
    const NormResult n = lp_norm_weighted(u0, ball, p, 1.0 + params.alpha, kQuad);
    if (!n.converged) throw std::runtime_error("numerator norm diverged");
    return n.value;
  };

  GridSpec grid;
  grid.count = 64;
  const BglsNorm grad_bgls = bgls_norm(grad_lp, psi, grid);
  ASSERT_FALSE(grad_bgls.is_infinite);
  ASSERT_GT(grad_bgls.value, 0.0);
  const double scale = 1.0 / grad_bgls.value;  // now ||grad f~||_{G(psi)} = 1

  const BglsNorm k_norm =
      bgls_norm([&](double p) { return scale * t_lp(p); }, target, grid);
  EXPECT_FALSE(k_norm.is_infinite);
  EXPECT_TRUE(std::isfinite(k_norm.value));
  EXPECT_GT(k_norm.value, 0.0);

  GridSpec doubled = grid;
  doubled.count = grid.count * 2;
  const BglsNorm k2 = bgls_norm([&](double p) { return scale * t_lp(p); }, target, doubled);
  EXPECT_NEAR(k2.value, k_norm.value, 0.1 * k_norm.value);
}

TEST(ArgmaxInvariance, PsiRescaleKeepsArgmax) {
  const PsiFunction psi = make_power_psi(1.0, 2.0, 1.0, 1.0);
  const PsiFunction psi3 =
      make_custom_psi(psi.interval(), [psi](double p) { return 3.0 * psi(p); });
  const auto lp = [](double p) { return std::exp(1.0 / p); };
  const BglsNorm a = bgls_norm(lp, psi);
  const BglsNorm b = bgls_norm(lp, psi3);
  EXPECT_DOUBLE_EQ(a.argmax_p, b.argmax_p);
}
