#pragma once

// Weighted generalizations: log-power weights log^+ delta = max(1, |log delta|)
// with an optional slowly varying factor S, the p,q exponent
// -1 + 1/(p(1+alpha)) - 1/q, the induced nu(q) = inf_p |q - p(1+alpha)|^{...} psi(p)
// transform, and plain w-weighted averages / norms.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bgls/domain.hpp"
#include "bgls/fit.hpp"
#include "bgls/psi.hpp"
#include "bgls/quadrature.hpp"
#include "bgls/radial.hpp"

namespace bgls {

inline double log_plus(double z) {
  if (!(z > 0.0)) throw std::domain_error("log_plus: requires z > 0");
  return std::max(1.0, std::fabs(std::log(z)));
}

/// log^+ delta evaluated from log(delta); exact in the log-variable tails
/// where delta itself under/overflows.
inline double log_plus_from_log(double log_delta) {
  return std::max(1.0, std::fabs(log_delta));
}

/// Weight w(x) = delta^{delta_power} (log^+ delta)^{log_power} S(log^+ delta).
struct WeightSpec {
  double delta_power = 0.0;
  double log_power = 0.0;
  std::function<double(double)> slow_vary;  // S(z) on [1, inf); null means S == 1

  void validate() const {
    if (!(log_power >= 0.0)) {
      throw std::invalid_argument("WeightSpec: log_power must be >= 0");
    }
    if (slow_vary) {
      for (double z : {1.0, 2.0, 10.0, 100.0}) {
        if (!(slow_vary(z) > 0.0)) {
          throw std::invalid_argument("WeightSpec: S must be positive on [1, inf)");
        }
      }
    }
  }
};

/// (1 - B2 + B1)_+ for min(B1, B2) > 0.
inline double log_weight_exponent(double B1, double B2) {
  if (!(std::min(B1, B2) > 0.0)) {
    throw std::invalid_argument("log_weight_exponent: requires min(B1, B2) > 0");
  }
  return std::max(0.0, 1.0 - B2 + B1);
}

namespace detail {

inline std::function<double(const RadialPoint&)> log_weight_factor(
    double B, const std::function<double(double)>& S, double power) {
  return [B, S, power](const RadialPoint& pt) {
    const double L = log_plus_from_log(pt.log_delta);
    double v = std::pow(L, B);
    if (S) v *= S(L);
    return std::pow(v, power);
  };
}

}  // namespace detail

/// Ratio of the two sides of the log-weight inequality with the
/// [p / |d - p(1+alpha)|]^{(1-B2+B1)_+} factor moved under the denominator:
///
///   | f (log^+ d)^{B1} S / d^{1+a} |_p
///   ----------------------------------------------------------------
///   [p/|d - p(1+a)|]^{(1-B2+B1)_+} | |grad f| (log^+ d)^{B2} S / d^a |_p
///
/// so boundedness over a p-scan is the content of the inequality.
/// f is expected to be centered already on bounded domains.
inline double log_weight_ratio(const RadialProfile& f, const DomainSpec& domain,
                               const PoincareParams& params, double p, double B1,
                               double B2, const std::function<double(double)>& S,
                               const QuadratureConfig& quad) {
  const double exponent = log_weight_exponent(B1, B2);
  if (!(p >= 1.0)) throw std::invalid_argument("log_weight_ratio: requires p >= 1");

  RadialIntegrand num_ig;
  num_ig.power = p;
  num_ig.field = Field::value;
  num_ig.delta_exponent = -p * (1.0 + params.alpha);
  num_ig.factor = detail::log_weight_factor(B1, S, p);
  num_ig.factor_poly_degree = p * (B1 + 1.0);

  RadialIntegrand den_ig;
  den_ig.power = p;
  den_ig.field = Field::gradient;
  den_ig.delta_exponent = -p * params.alpha;
  den_ig.factor = detail::log_weight_factor(B2, S, p);
  den_ig.factor_poly_degree = p * (B2 + 1.0);

  const NormResult num =
      detail::norm_from_integral(integrate_radial(f, domain, num_ig, quad), p);
  const NormResult den =
      detail::norm_from_integral(integrate_radial(f, domain, den_ig, quad), p);
  if (!num.converged || !den.converged) {
    throw std::runtime_error("log_weight_ratio: weighted norm did not converge");
  }
  // Zero gradient norm certifies a constant profile (numerator noise aside).
  if (num.value == 0.0 || den.value == 0.0) return 0.0;
  const double denom_abs = std::fabs(params.d - p * (1.0 + params.alpha));
  if (denom_abs == 0.0) {
    throw std::domain_error("log_weight_ratio: p at the critical exponent");
  }
  return num.value / (std::pow(p / denom_abs, exponent) * den.value);
}

/// Exponent of Eq-style p,q estimates: -1 + 1/(p(1+alpha)) - 1/q for
/// q > p(1+alpha).
inline double pq_exponent(double p, double q, double alpha) {
  if (!(alpha > -1.0)) throw std::invalid_argument("pq_exponent: requires alpha > -1");
  if (!(p >= 1.0)) throw std::invalid_argument("pq_exponent: requires p >= 1");
  if (!(q > p * (1.0 + alpha))) {
    throw std::domain_error("pq_exponent: requires q > p(1+alpha)");
  }
  return -1.0 + 1.0 / (p * (1.0 + alpha)) - 1.0 / q;
}

/// nu(q) = inf over p in [1, q/(1+alpha)) of |q - p(1+alpha)|^{pq_exponent} psi(p),
/// by grid search plus golden-section refinement around the best cell.
inline double nu_transform(const PsiFunction& psi, double alpha, double q,
                           int grid_points = 512) {
  if (!(alpha > -1.0)) throw std::invalid_argument("nu_transform: requires alpha > -1");
  if (!(q > 1.0 + alpha)) {
    throw std::invalid_argument("nu_transform: requires q > 1 + alpha");
  }
  if (grid_points < 8) throw std::invalid_argument("nu_transform: grid too small");
  const double p_lo = std::max(1.0, psi.interval().a);
  const double p_hi = std::min(q / (1.0 + alpha), psi.interval().b);
  if (!(p_lo < p_hi)) {
    throw std::domain_error("nu_transform: empty admissible p-range");
  }
  const auto objective = [&](double p) -> double {
    const double gap = q - p * (1.0 + alpha);
    if (!(gap > 0.0) || p < 1.0) return std::numeric_limits<double>::infinity();
    const double expo = -1.0 + 1.0 / (p * (1.0 + alpha)) - 1.0 / q;
    return std::pow(gap, expo) * psi(p);
  };

  const double span = p_hi - p_lo;
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  std::vector<double> ps(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    ps[i] = p_lo + span * i / grid_points;
    const double v = objective(ps[i]);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  if (!std::isfinite(best)) {
    throw std::runtime_error("nu_transform: objective infinite over the whole grid");
  }
  const double bracket_lo = ps[std::max(0, best_i - 1)];
  const double bracket_hi =
      best_i + 1 < grid_points ? ps[best_i + 1] : p_lo + span * (1.0 - 0.5 / grid_points);
  const auto [argmin, refined] = golden_section_min(objective, bracket_lo, bracket_hi);
  (void)argmin;
  return std::min(best, refined);
}

struct WeightedMoments {
  double average = 0.0;
  double norm = 0.0;
  bool converged = false;
};

/// w-weighted average u_w = \int u w / \int w and norm |u|_{p,w} on the
/// bounded domain (the weight enters the norm linearly).
inline WeightedMoments weighted_average_and_norm(const RadialProfile& f,
                                                 const DomainSpec& domain,
                                                 const WeightSpec& w, double p,
                                                 const QuadratureConfig& quad) {
  if (!domain.bounded()) {
    throw std::invalid_argument("weighted_average_and_norm: domain must be bounded");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("weighted_average_and_norm: requires p >= 1");
  }
  w.validate();
  const auto wf = detail::log_weight_factor(w.log_power, w.slow_vary, 1.0);

  RadialIntegrand linear;
  linear.abs_power = false;
  linear.delta_exponent = w.delta_power;
  linear.factor = wf;
  linear.factor_poly_degree = w.log_power + 1.0;

  const RadialProfile one = make_constant(1.0, domain);
  const IntegralResult mass = integrate_radial(one, domain, linear, quad);
  const IntegralResult fw = integrate_radial(f, domain, linear, quad);

  RadialIntegrand norm_ig = linear;
  norm_ig.abs_power = true;
  norm_ig.power = p;
  const NormResult norm =
      detail::norm_from_integral(integrate_radial(f, domain, norm_ig, quad), p);

  WeightedMoments out;
  out.converged = mass.converged && fw.converged && norm.converged && mass.value > 0.0;
  out.average = mass.value > 0.0 ? fw.value / mass.value
                                 : std::numeric_limits<double>::quiet_NaN();
  out.norm = norm.value;
  return out;
}

}  // namespace bgls
