#include "bgls/weighted.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "bgls/poincare.hpp"

using namespace bgls;

namespace {
const QuadratureConfig kQuad;
}

TEST(LogWeightExponent, Values) {
  EXPECT_DOUBLE_EQ(log_weight_exponent(1.0, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(log_weight_exponent(0.5, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(log_weight_exponent(2.0, 1.0), 2.0);
  EXPECT_THROW(log_weight_exponent(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(log_weight_exponent(1.0, -0.5), std::invalid_argument);
}

TEST(LogPlus, DefinitionProperty) {
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> z_dist(1e-6, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double z = z_dist(rng);
    const double lp = log_plus(z);
    EXPECT_GE(lp, 1.0);
    const double alog = std::fabs(std::log(z));
    if (alog >= 1.0) {
      EXPECT_DOUBLE_EQ(lp, alog);
    } else {
      EXPECT_DOUBLE_EQ(lp, 1.0);
    }
  }
  EXPECT_THROW(log_plus(0.0), std::domain_error);
}

TEST(PqExponent, SpotValues) {
  EXPECT_DOUBLE_EQ(pq_exponent(1.0, 2.0, 0.0), -0.5);
  EXPECT_DOUBLE_EQ(pq_exponent(1.0, 4.0, 1.0), -0.75);
  EXPECT_DOUBLE_EQ(pq_exponent(2.0, 5.0, 0.0), -0.7);
  EXPECT_THROW(pq_exponent(2.0, 2.0, 0.0), std::domain_error);
  EXPECT_THROW(pq_exponent(2.0, 1.0, 0.5), std::domain_error);
}

TEST(PqExponent, RangeProperty) {
  // Always in (-1, 0) when p(1+alpha) > 1 and q finite.
  std::mt19937 rng(808);
  std::uniform_real_distribution<double> p_dist(1.0, 6.0);
  std::uniform_real_distribution<double> alpha_dist(-0.4, 2.0);
  std::uniform_real_distribution<double> gap_dist(0.01, 30.0);
  for (int i = 0; i < 500; ++i) {
    const double p = p_dist(rng);
    const double alpha = alpha_dist(rng);
    if (p * (1.0 + alpha) <= 1.0) continue;
    const double q = p * (1.0 + alpha) + gap_dist(rng);
    const double e = pq_exponent(p, q, alpha);
    EXPECT_GT(e, -1.0);
    EXPECT_LT(e, 0.0);
  }
}

TEST(NuTransform, UnitPsiAtQTwo) {
  // Objective (2-p)^{1/p - 3/2} >= 1 on (1,2) with equality at p = 1.
  const PsiFunction one = make_power_psi(1.0, 3.0, 0.0, 0.0);
  EXPECT_NEAR(nu_transform(one, 0.0, 2.0), 1.0, 1e-6);
}

TEST(NuTransform, DenseGridOracle) {
  const PsiFunction one = make_power_psi(1.0, 3.0, 0.0, 0.0);
  const double q = 2.6, alpha = 0.1;
  const double nu = nu_transform(one, alpha, q);
  double brute = 1e300;
  const double p_hi = std::min(q / (1.0 + alpha), 3.0);
  for (int i = 0; i < 20001; ++i) {
    const double p = 1.0 + (p_hi - 1.0) * i / 20001.0;
    const double gap = q - p * (1.0 + alpha);
    if (!(gap > 0.0)) continue;
    brute = std::min(brute, std::pow(gap, pq_exponent(p, q, alpha)));
  }
  EXPECT_NEAR(nu, brute, 1e-5 * brute);
  EXPECT_LE(nu, brute + 1e-12);  // refinement can only improve on the grid
}

TEST(NuTransform, PositiveHomogeneity) {
  const PsiFunction one = make_power_psi(1.0, 3.0, 0.0, 0.0);
  const PsiFunction five =
      make_custom_psi(ExponentInterval(1.0, 3.0), [](double) { return 5.0; });
  const double base = nu_transform(one, 0.0, 2.0);
  EXPECT_NEAR(nu_transform(five, 0.0, 2.0), 5.0 * base, 1e-9 * base);
}

TEST(NuTransform, GridDoublingStable) {
  const PsiFunction psi = make_power_psi(1.0, 3.0, 1.0, 0.0);  // (p-1)^{-1}
  const double a = nu_transform(psi, 0.0, 2.0, 512);
  const double b = nu_transform(psi, 0.0, 2.0, 1024);
  EXPECT_GT(a, 0.0);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_NEAR(a, b, 1e-6 * a);
}

TEST(NuTransform, MonotoneInPsi) {
  const PsiFunction psi1 = make_power_psi(1.0, 3.0, 0.5, 0.0);
  const PsiFunction psi2 = make_custom_psi(
      ExponentInterval(1.0, 3.0),
      [psi1](double p) { return psi1(p) + 0.7; });  // pointwise larger
  for (double q : {1.6, 2.0, 2.4}) {
    EXPECT_LE(nu_transform(psi1, 0.0, q), nu_transform(psi2, 0.0, q) + 1e-12);
  }
}

TEST(NuTransform, EmptyRangeRejected) {
  const PsiFunction psi = make_power_psi(2.0, 3.0, 0.0, 0.0);
  // q/(1+alpha) = 1.5 < a = 2: nothing to scan.
  EXPECT_THROW(nu_transform(psi, 0.0, 1.5), std::domain_error);
}

TEST(WeightedAverageAndNorm, UnitWeightReduces) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const RadialProfile u = make_u_delta(2.0);
  const WeightSpec w{};  // delta^0 log-power 0
  const WeightedMoments m = weighted_average_and_norm(u, ball, w, 1.5, kQuad);
  ASSERT_TRUE(m.converged);
  EXPECT_NEAR(m.average, mean_value(u, ball, kQuad), 1e-9);
  const NormResult plain = lp_norm_weighted(u, ball, 1.5, 0.0, kQuad);
  EXPECT_NEAR(m.norm, plain.value, 1e-9 * plain.value);
}

TEST(WeightedAverageAndNorm, ConstantAverage) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const RadialProfile c = make_constant(4.25, ball);
  WeightSpec w;
  w.delta_power = 1.0;
  w.log_power = 0.5;
  const WeightedMoments m = weighted_average_and_norm(c, ball, w, 2.0, kQuad);
  ASSERT_TRUE(m.converged);
  EXPECT_NEAR(m.average, 4.25, 1e-9);
}

TEST(WeightedAverageAndNorm, RefinedQuadratureOracle) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const RadialProfile u = make_u_delta(2.0);
  WeightSpec w;
  w.delta_power = 1.0;
  const WeightedMoments coarse = weighted_average_and_norm(u, ball, w, 2.0, kQuad);
  QuadratureConfig fine = kQuad;
  fine.rel_tol = 0.5e-9;
  fine.abs_tol = 0.5e-12;
  const WeightedMoments refined = weighted_average_and_norm(u, ball, w, 2.0, fine);
  ASSERT_TRUE(coarse.converged && refined.converged);
  EXPECT_NEAR(coarse.average, refined.average, 1e-8 * std::fabs(refined.average));
}

TEST(WeightedAverageAndNorm, RejectsUnboundedDomain) {
  const DomainSpec exterior = DomainSpec::exterior_unit_ball(2);
  const RadialProfile v = make_v_delta(2.0);
  EXPECT_THROW(weighted_average_and_norm(v, exterior, WeightSpec{}, 2.0, kQuad),
               std::invalid_argument);
}

TEST(LogWeightRatio, CenteredConstantIsZero) {
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile f0 = center(make_constant(2.0, ball), ball, kQuad);
  EXPECT_DOUBLE_EQ(
      log_weight_ratio(f0, ball, params, 1.4, 1.0, 1.0, nullptr, kQuad), 0.0);
}

TEST(LogWeightRatio, EqualExponentsComparableToPlainRatio) {
  // With B1 = B2 and S == 1 the exponent factor is p/|d - p(1+alpha)| and the
  // construct reduces to V times a ratio of log-weighted to plain norms.
  // Since log^+ >= 1, each norm ratio is bounded by the weight's range on the
  // region carrying the mass; bound it by the value at the quadrature tail.
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile f0 = center(make_u_delta(2.0), ball, kQuad);
  const double p = 1.5;
  const double ratio = log_weight_ratio(f0, ball, params, p, 1.0, 1.0, nullptr, kQuad);
  const double v = poincare_ratio(f0, ball, params, p, kQuad);
  ASSERT_GT(v, 0.0);
  // Numerator mass of |f0 y^Delta|^p e^{-sy} is negligible past
  // y = (p Delta + p B + 40)/s; the log weight is at most that y there.
  const double s = params.d - p * (1.0 + params.alpha);
  const double y_tail = (p * 2.0 + p * 1.0 + 40.0) / s;
  EXPECT_GT(ratio, v / y_tail);
  EXPECT_LT(ratio, v * y_tail);
}

TEST(LogWeightRatio, ScanSlopeNearZero) {
  // B1 = 1, B2 = 0.5, S = log(1+z): the (1 - B2 + B1)_+ factor compensates
  // the extra log-power growth, so the ratio is flat in eps.
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile f0 = center(make_u_delta(2.0), ball, kQuad);
  const auto S = [](double z) { return std::log(1.0 + z); };
  std::vector<double> xs, ys;
  for (double eps : default_epsilons()) {
    const double p = params.p0 - eps;
    const double r = log_weight_ratio(f0, ball, params, p, 1.0, 0.5, S, kQuad);
    ASSERT_GT(r, 0.0);
    xs.push_back(std::log(eps));
    ys.push_back(std::log(r));
  }
  const LineFit fit = ols_fit(xs, ys);
  EXPECT_NEAR(fit.slope, 0.0, 0.2);
}

TEST(Eq19Chain, WeightedCenteredNormBoundedByNu) {
  // psi(p) := measured gradient norm g(p); then the w1-centered weighted
  // q-norm is <= K nu(q) with a finite grid-stable K.
  const DomainSpec ball = DomainSpec::unit_ball(2);
  const PoincareParams params(0.0, 2);
  const RadialProfile u = make_u_delta(2.0);

  auto cache = std::make_shared<std::map<double, double>>();
  const auto g = [&, cache](double p) {
    const auto it = cache->find(p);
    if (it != cache->end()) return it->second;
    const NormResult n = lp_norm_weighted(u, ball, p, params.alpha, kQuad, Field::gradient);
    if (!n.converged) throw std::runtime_error("gradient norm diverged");
    (*cache)[p] = n.value;
    return n.value;
  };
  const PsiFunction psi = make_custom_psi(ExponentInterval(1.0, params.p0), g);

  WeightSpec w1;
  w1.delta_power = 1.0;
  const double u_w1 = weighted_average_and_norm(u, ball, w1, 1.0, kQuad).average;
  const RadialProfile u_c = u.with_offset(u_w1);

  double k_max = 0.0;
  for (double q : {1.3, 1.5, 1.7, 1.9}) {
    const NormResult lhs = lp_norm_weighted(u_c, ball, q, 1.0 + params.alpha, kQuad);
    ASSERT_TRUE(lhs.converged);
    const double nu = nu_transform(psi, params.alpha, q, 128);
    ASSERT_GT(nu, 0.0);
    k_max = std::max(k_max, lhs.value / nu);
  }
  EXPECT_TRUE(std::isfinite(k_max));
  EXPECT_GT(k_max, 0.0);

  // Grid stability of the nu side at the largest q.
  const double nu_128 = nu_transform(psi, params.alpha, 1.9, 128);
  const double nu_256 = nu_transform(psi, params.alpha, 1.9, 256);
  EXPECT_NEAR(nu_128, nu_256, 0.05 * nu_128);
}

TEST(WeightSpecType, Validation) {
  WeightSpec bad;
  bad.log_power = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  WeightSpec bad_s;
  bad_s.slow_vary = [](double) { return -1.0; };
  EXPECT_THROW(bad_s.validate(), std::invalid_argument);
}
