#pragma once

// Weighted L_p norms of radial profiles by radial reduction:
//
//   |f|_p^p = omega_{d-1} \int |f(r)|^p delta(r)^{-p w} r^{d-1} dr.
//
// Segments touching r = 0 are integrated in y = -log r, segments reaching
// r = infinity in y = log r; both substitutions turn the log-power cores into
// exponentially damped Gamma-type integrands whose tails admit a rigorous
// truncation bound.  Everything else is integrated directly in r.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bgls/domain.hpp"
#include "bgls/gamma.hpp"
#include "bgls/integrate.hpp"
#include "bgls/radial.hpp"

namespace bgls {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 60;
  // Optional hard cap for the log-variable tail; 0 means probe automatically.
  double tail_cap = 0.0;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
      throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
    }
    if (max_depth < 10) {
      throw std::invalid_argument("QuadratureConfig: max_depth must be >= 10");
    }
  }
};

struct NormResult {
  double value = 0.0;
  double est_abs_error = 0.0;
  bool converged = false;
};

/// Which part of the profile enters the integrand.  For a radial function the
/// gradient magnitude is |f'(r)|.
enum class Field { value, gradient };

/// Point data handed to custom radial weight factors.  In the log-variable
/// tails `r` and `delta` can under/overflow; `log_delta` is always exact, so
/// factors that live near the singularities should be written against it.
struct RadialPoint {
  double r;
  double delta;
  double log_delta;
};

/// One term of the radial integrand:
///   [ |F(r)|^power or F(r) ] * delta(r)^delta_exponent * factor(pt) * r^{d-1}
/// with F the profile value or gradient magnitude.
struct RadialIntegrand {
  double power = 1.0;
  bool abs_power = true;  // false: signed linear integrand, power ignored
  Field field = Field::value;
  double delta_exponent = 0.0;
  std::function<double(const RadialPoint&)> factor;
  // Upper bound on the growth exponent of `factor` in |log delta|; feeds the
  // tail truncation bound.
  double factor_poly_degree = 0.0;
};

struct IntegralResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  bool diverged = false;
};

namespace detail {

struct PieceAccum {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool diverged = false;

  void add(const AdaptiveResult& r) {
    value += r.value;
    error += r.abs_error;
    converged = converged && r.converged;
  }
};

inline bool is_zero_piece(const Segment& seg, const RadialIntegrand& ig, double scale,
                          double offset) {
  const bool no_raw = std::holds_alternative<Zero>(seg.kind) ||
                      (std::holds_alternative<Constant>(seg.kind) &&
                       std::get<Constant>(seg.kind).value == 0.0);
  if (ig.field == Field::gradient) {
    return no_raw || std::holds_alternative<Constant>(seg.kind) || scale == 0.0;
  }
  return (no_raw || scale == 0.0) && offset == 0.0;
}

inline std::vector<double> seeded_breakpoints(double lo, double hi, double width_scale) {
  std::vector<double> pts{lo};
  for (double mult : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double y = lo + mult * width_scale;
    if (y > lo && y < hi) pts.push_back(y);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Local growth order of the integrand's F part at radius r0 (0 for a nonzero
// value, 1 for a simple zero, ...; capped at 3).
inline int local_rate(const Segment& seg, Field field, double scale, double offset,
                      double r0) {
  double derivs[3];
  if (field == Field::value) {
    derivs[0] = scale * seg.raw_value(r0) - offset;
    derivs[1] = scale * seg.raw_derivative(r0);
  } else {
    derivs[0] = scale * seg.raw_derivative(r0);
    derivs[1] = 0.0;  // refined below for bridges
  }
  double second = 0.0;
  double third = 0.0;
  if (const auto* bridge = std::get_if<Bridge>(&seg.kind)) {
    second = scale * (2.0 * bridge->c[2] + 6.0 * bridge->c[3] * r0);
    third = scale * 6.0 * bridge->c[3];
  }
  if (field == Field::value) {
    derivs[2] = second;
  } else {
    derivs[1] = second;
    derivs[2] = third;
  }
  for (int k = 0; k < 3; ++k) {
    if (std::fabs(derivs[k]) > 1e-10) return k;
  }
  return 3;
}

// Non-integrable delta(r)^E blowup at r = 1 under the distance-to-boundary
// model: the local behavior is |F|^p ~ (1-r)^{p*rate}, so the integrand goes
// like (1-r)^{p*rate + E}.
inline bool boundary_blowup(const Segment& seg, const RadialIntegrand& ig,
                            const DomainSpec& domain, double scale, double offset,
                            double clip_hi) {
  if (!domain.bounded() || domain.delta_model != DeltaModel::distance_to_boundary ||
      !(ig.delta_exponent < 0.0) || clip_hi < 1.0 - 1e-14) {
    return false;
  }
  const int rate = local_rate(seg, ig.field, scale, offset, 1.0);
  const double local_exp = (ig.abs_power ? ig.power : 1.0) * rate + ig.delta_exponent;
  return local_exp <= -1.0 + 1e-12;
}

// Integrates h(y) = base(y) * exp(-c_exp * y) over [y_lo, y_hi (maybe inf)]
// where base grows at most like y^m_eff.  For y >= 2(m_eff+1)/c_exp the
// log-derivative of the envelope is <= -c_exp/2, so the tail beyond U is
// bounded by 2 h(U) / c_exp.
template <class H>
PieceAccum integrate_damped(H&& h, double y_lo, double y_hi, double c_exp, double m_eff,
                            const QuadratureConfig& quad, double seg_abs_tol) {
  PieceAccum acc;
  const bool infinite = !std::isfinite(y_hi);
  if (infinite && !(c_exp > 0.0)) {
    acc.diverged = true;
    acc.converged = false;
    return acc;
  }
  // The truncation bound is added on top of the panel errors, so the engine
  // only gets half the relative budget.
  const double engine_rel = 0.5 * quad.rel_tol;
  if (!infinite) {
    const double width = (c_exp > 0.0) ? (m_eff + 1.0) / c_exp
                                       : std::max(1.0, 0.25 * (y_hi - y_lo));
    const auto pts = seeded_breakpoints(y_lo, y_hi, width);
    acc.add(integrate_adaptive(h, std::span<const double>(pts.data(), pts.size()),
                               engine_rel, seg_abs_tol, quad.max_depth));
    return acc;
  }
  const double w = (m_eff + 1.0) / c_exp;
  const double y_star = std::max(y_lo, 2.0 * w);
  const double hard_cap = quad.tail_cap > 0.0 ? quad.tail_cap : 1e9;
  double upper = std::min(hard_cap, y_star + 8.0 * std::max(w, 1.0 / c_exp));
  {
    const auto pts = seeded_breakpoints(y_lo, upper, w);
    acc.add(integrate_adaptive(h, std::span<const double>(pts.data(), pts.size()),
                               engine_rel, seg_abs_tol, quad.max_depth));
  }
  double tail_bound = 2.0 * h(upper) / c_exp;
  for (int iter = 0; iter < 300; ++iter) {
    const double target =
        0.25 * std::max(seg_abs_tol, quad.rel_tol * std::fabs(acc.value));
    if (!(tail_bound > target) || upper >= hard_cap) break;
    const double next =
        std::min(hard_cap, upper + std::max(8.0 / c_exp, 0.25 * (upper - y_lo)));
    const double pts[3] = {upper, 0.5 * (upper + next), next};
    acc.add(integrate_adaptive(h, std::span<const double>(pts, 3), engine_rel,
                               seg_abs_tol, quad.max_depth));
    upper = next;
    tail_bound = 2.0 * h(upper) / c_exp;
  }
  if (std::isfinite(tail_bound)) {
    acc.error += std::fabs(tail_bound);
  } else {
    acc.converged = false;
  }
  return acc;
}

// Inner substitution y = -log r for segments whose lower end is r = 0.
inline PieceAccum integrate_inner_log(const Segment& seg, double clip_lo, double clip_hi,
                                      const RadialIntegrand& ig, const DomainSpec& domain,
                                      double scale, double offset,
                                      const QuadratureConfig& quad, double seg_abs_tol) {
  const double y_lo = -std::log(clip_hi);
  const double y_hi =
      clip_lo > 0.0 ? -std::log(clip_lo) : std::numeric_limits<double>::infinity();
  const bool origin = domain.delta_model == DeltaModel::distance_to_origin;
  if (boundary_blowup(seg, ig, domain, scale, offset, clip_hi)) {
    PieceAccum acc;
    acc.diverged = true;
    acc.converged = false;
    return acc;
  }
  const auto* core = std::get_if<LogPowerCore>(&seg.kind);
  if (core && core->orientation != LogPowerCore::Orientation::inner) {
    throw std::logic_error("integrate_inner_log: outer core touching r = 0");
  }
  const bool grad_core = core && ig.field == Field::gradient;
  const double p = ig.power;
  const double c_exp = domain.dimension + (origin ? ig.delta_exponent : 0.0) -
                       (grad_core ? p : 0.0);

  double m_poly = 0.0;
  if (core) {
    m_poly = ig.field == Field::value ? core->Delta : (core->Delta - 1.0);
    if (ig.abs_power) m_poly *= p;
  }
  const double m_eff = m_poly + ig.factor_poly_degree;

  const auto base_f = [&](double y) -> double {
    if (core) {
      if (ig.field == Field::value) return scale * std::pow(y, core->Delta) - offset;
      return scale * core->Delta * std::pow(y, core->Delta - 1.0);
    }
    const double r = std::exp(-y);
    if (ig.field == Field::value) return scale * seg.raw_value(r) - offset;
    return scale * seg.raw_derivative(r);
  };
  const bool has_factor = static_cast<bool>(ig.factor);
  const double e_weight = ig.delta_exponent;
  // |F|^p and e^{-c y} can individually over/underflow for large p even when
  // their product is representable, so the power branch combines exponents in
  // log space.
  const auto h = [&, p, c_exp](double y) -> double {
    const double f = base_f(y);
    double factor_v = 1.0;
    if (has_factor) {
      const double r = std::exp(-y);
      const RadialPoint pt{r, origin ? r : -std::expm1(-y),
                           origin ? -y : std::log1p(-std::exp(-y))};
      factor_v = ig.factor(pt);
    }
    const double log_weight =
        (!origin && e_weight != 0.0) ? e_weight * std::log1p(-std::exp(-y)) : 0.0;
    if (ig.abs_power) {
      if (f == 0.0 || factor_v == 0.0) return 0.0;
      return std::exp(p * std::log(std::fabs(f)) + std::log(factor_v) + log_weight -
                      c_exp * y);
    }
    return f * factor_v * std::exp(log_weight - c_exp * y);
  };
  return integrate_damped(h, y_lo, y_hi, c_exp, m_eff, quad, seg_abs_tol);
}

// Outer substitution y = log r for segments reaching r = infinity.  The
// exterior domain always has delta(x) = |x|.
inline PieceAccum integrate_outer_log(const Segment& seg, double clip_lo, double clip_hi,
                                      const RadialIntegrand& ig, const DomainSpec& domain,
                                      double scale, double offset,
                                      const QuadratureConfig& quad, double seg_abs_tol) {
  const double y_lo = std::log(clip_lo);
  const double y_hi =
      std::isfinite(clip_hi) ? std::log(clip_hi) : std::numeric_limits<double>::infinity();
  const auto* core = std::get_if<LogPowerCore>(&seg.kind);
  if (core && core->orientation != LogPowerCore::Orientation::outer) {
    throw std::logic_error("integrate_outer_log: inner core reaching r = infinity");
  }
  const bool grad_core = core && ig.field == Field::gradient;
  const double p = ig.power;
  const double c_exp =
      -(domain.dimension + ig.delta_exponent) + (grad_core ? p : 0.0);

  double m_poly = 0.0;
  if (core) {
    m_poly = ig.field == Field::value ? core->Delta : (core->Delta - 1.0);
    if (ig.abs_power) m_poly *= p;
  }
  const double m_eff = m_poly + ig.factor_poly_degree;

  const auto base_f = [&](double y) -> double {
    if (core) {
      if (ig.field == Field::value) return scale * std::pow(y, core->Delta) - offset;
      return scale * core->Delta * std::pow(y, core->Delta - 1.0);
    }
    if (const auto* constant = std::get_if<Constant>(&seg.kind)) {
      return ig.field == Field::value ? scale * constant->value - offset : 0.0;
    }
    if (std::holds_alternative<Zero>(seg.kind)) {
      return ig.field == Field::value ? -offset : 0.0;
    }
    const double r = std::exp(y);
    if (ig.field == Field::value) return scale * seg.raw_value(r) - offset;
    return scale * seg.raw_derivative(r);
  };
  const bool has_factor = static_cast<bool>(ig.factor);
  const auto h = [&, p, c_exp](double y) -> double {
    const double f = base_f(y);
    double factor_v = 1.0;
    if (has_factor) {
      const double r = std::exp(y);
      factor_v = ig.factor(RadialPoint{r, r, y});
    }
    if (ig.abs_power) {
      if (f == 0.0 || factor_v == 0.0) return 0.0;
      return std::exp(p * std::log(std::fabs(f)) + std::log(factor_v) - c_exp * y);
    }
    return f * factor_v * std::exp(-c_exp * y);
  };
  return integrate_damped(h, y_lo, y_hi, c_exp, m_eff, quad, seg_abs_tol);
}

inline PieceAccum integrate_direct(const Segment& seg, double clip_lo, double clip_hi,
                                   const RadialIntegrand& ig, const DomainSpec& domain,
                                   double scale, double offset,
                                   const QuadratureConfig& quad, double seg_abs_tol) {
  PieceAccum acc;
  const double p = ig.power;
  const double e_weight = ig.delta_exponent;
  // delta -> 0 only at r = 1 under the distance-to-boundary model here;
  // origin-touching segments are routed through the log substitution.
  if (boundary_blowup(seg, ig, domain, scale, offset, clip_hi)) {
    acc.diverged = true;
    acc.converged = false;
    return acc;
  }
  const bool has_factor = static_cast<bool>(ig.factor);
  const int d = domain.dimension;
  // delta passed explicitly so the singular substitution below can supply it
  // without the 1 - r cancellation.
  const auto h = [&](double r, double delta) -> double {
    const double f = ig.field == Field::value ? scale * seg.raw_value(r) - offset
                                              : scale * seg.raw_derivative(r);
    double v = ig.abs_power ? std::pow(std::fabs(f), p) : f;
    if (e_weight != 0.0) v *= std::pow(delta, e_weight);
    if (has_factor) v *= ig.factor(RadialPoint{r, delta, std::log(delta)});
    return v * std::pow(r, d - 1);
  };

  const bool boundary_singular = domain.bounded() &&
                                 domain.delta_model == DeltaModel::distance_to_boundary &&
                                 e_weight < 0.0 && clip_hi > 1.0 - 1e-14;
  if (boundary_singular) {
    const int rate = local_rate(seg, ig.field, scale, offset, 1.0);
    const double ell = (ig.abs_power ? p : 1.0) * rate + e_weight;
    if (ell < -1e-3) {
      // Integrable endpoint singularity (1-r)^ell, ell in (-1, 0): substitute
      // t = 1 - r = tau^kappa with kappa = 1/(1+ell), which flattens the
      // integrand to O(1) near tau = 0.
      const double kappa = 1.0 / (1.0 + ell);
      const double upper = std::pow(1.0 - clip_lo, 1.0 + ell);
      const auto h_sub = [&](double tau) -> double {
        const double t = std::pow(tau, kappa);
        return h(1.0 - t, t) * kappa * std::pow(tau, kappa - 1.0);
      };
      const double pts[4] = {0.0, 0.125 * upper, 0.5 * upper, upper};
      acc.add(integrate_adaptive(h_sub, std::span<const double>(pts, 4), quad.rel_tol,
                                 seg_abs_tol, quad.max_depth));
      return acc;
    }
  }

  const auto h_plain = [&](double r) -> double { return h(r, delta_of_r(domain, r)); };
  const double pts[3] = {clip_lo, 0.5 * (clip_lo + clip_hi), clip_hi};
  acc.add(integrate_adaptive(h_plain, std::span<const double>(pts, 3), quad.rel_tol,
                             seg_abs_tol, quad.max_depth));
  return acc;
}

}  // namespace detail

/// omega_{d-1} \int_band F-term(r) delta(r)^E factor r^{d-1} dr over the
/// profile's segments, with per-segment singular handling.
inline IntegralResult integrate_radial(const RadialProfile& profile,
                                       const DomainSpec& domain,
                                       const RadialIntegrand& ig,
                                       const QuadratureConfig& quad, double band_lo,
                                       double band_hi) {
  quad.validate();
  if (band_lo < domain.r_lo() - 1e-12 || band_hi > domain.r_hi() + 1e-12 ||
      !(band_hi >= band_lo)) {
    throw std::out_of_range("integrate_radial: band outside the domain's radial range");
  }
  const double scale = profile.scale();
  const double offset = profile.offset();
  int active = 0;
  for (const auto& seg : profile.segments()) {
    if (std::min(seg.r_hi, band_hi) > std::max(seg.r_lo, band_lo) &&
        !detail::is_zero_piece(seg, ig, scale, offset)) {
      ++active;
    }
  }
  const double seg_abs_tol = quad.abs_tol / std::max(1, active);

  detail::PieceAccum total;
  double abs_scale = 0.0;  // sum of |piece| values; reference for signed cancellation
  const auto run_piece = [&](const Segment& seg, double lo, double hi) {
    detail::PieceAccum piece;
    if (seg.r_lo == 0.0 && lo < 0.5) {
      // Split segments that span from the origin to the boundary when the
      // distance-to-boundary weight is singular at r = 1.
      const bool split = domain.bounded() &&
                         domain.delta_model == DeltaModel::distance_to_boundary &&
                         ig.delta_exponent < 0.0 && hi > 0.75;
      const double inner_hi = split ? 0.5 : hi;
      piece = detail::integrate_inner_log(seg, lo, inner_hi, ig, domain, scale, offset,
                                          quad, seg_abs_tol);
      if (split) {
        const detail::PieceAccum rest = detail::integrate_direct(
            seg, 0.5, hi, ig, domain, scale, offset, quad, seg_abs_tol);
        piece.value += rest.value;
        piece.error += rest.error;
        piece.converged = piece.converged && rest.converged;
        piece.diverged = piece.diverged || rest.diverged;
      }
    } else if (seg.r_lo == 0.0) {
      piece = detail::integrate_inner_log(seg, lo, hi, ig, domain, scale, offset, quad,
                                          seg_abs_tol);
    } else if (std::isinf(seg.r_hi)) {
      piece = detail::integrate_outer_log(seg, lo, hi, ig, domain, scale, offset, quad,
                                          seg_abs_tol);
    } else {
      piece = detail::integrate_direct(seg, lo, hi, ig, domain, scale, offset, quad,
                                       seg_abs_tol);
    }
    total.value += piece.value;
    total.error += piece.error;
    total.converged = total.converged && piece.converged;
    total.diverged = total.diverged || piece.diverged;
    abs_scale += std::fabs(piece.value);
  };
  for (const auto& seg : profile.segments()) {
    const double lo = std::max(seg.r_lo, band_lo);
    const double hi = std::min(seg.r_hi, band_hi);
    if (!(hi > lo)) continue;
    if (detail::is_zero_piece(seg, ig, scale, offset)) continue;
    run_piece(seg, lo, hi);
  }

  const double omega = sphere_surface(domain.dimension);
  IntegralResult out;
  out.diverged = total.diverged;
  if (total.diverged || !std::isfinite(total.value)) {
    out.value = std::numeric_limits<double>::infinity();
    out.abs_error = std::numeric_limits<double>::infinity();
    out.converged = false;
    out.diverged = true;
    return out;
  }
  out.value = omega * total.value;
  out.abs_error = omega * total.error;
  // Signed integrands may cancel across segments; convergence is judged
  // against the accumulated magnitude, not the (possibly tiny) net value.
  const double reference = std::max(std::fabs(out.value), omega * abs_scale);
  out.converged =
      total.converged && out.abs_error <= quad.rel_tol * reference + quad.abs_tol * 1.01;
  return out;
}

inline IntegralResult integrate_radial(const RadialProfile& profile,
                                       const DomainSpec& domain,
                                       const RadialIntegrand& ig,
                                       const QuadratureConfig& quad) {
  return integrate_radial(profile, domain, ig, quad, domain.r_lo(), domain.r_hi());
}

namespace detail {

inline NormResult norm_from_integral(const IntegralResult& integral, double p) {
  NormResult out;
  if (integral.diverged || !std::isfinite(integral.value)) {
    out.value = std::numeric_limits<double>::infinity();
    out.est_abs_error = std::numeric_limits<double>::infinity();
    out.converged = false;
    return out;
  }
  out.value = std::pow(integral.value, 1.0 / p);
  out.est_abs_error = integral.value > 0.0
                          ? out.value * integral.abs_error / (p * integral.value)
                          : std::pow(integral.abs_error, 1.0 / p);
  out.converged = integral.converged;
  return out;
}

}  // namespace detail

/// | f delta^{-weight_exp} |_{p, band} (or the same of |f'| for
/// Field::gradient).  Divergence is reported through converged = false with
/// an infinite value, never guessed around.
inline NormResult lp_norm_on_subset(const RadialProfile& profile, const DomainSpec& domain,
                                    double p, double weight_exp, double r_lo, double r_hi,
                                    const QuadratureConfig& quad,
                                    Field field = Field::value) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: requires p >= 1");
  RadialIntegrand ig;
  ig.power = p;
  ig.abs_power = true;
  ig.field = field;
  ig.delta_exponent = -p * weight_exp;
  return detail::norm_from_integral(integrate_radial(profile, domain, ig, quad, r_lo, r_hi),
                                    p);
}

inline NormResult lp_norm_weighted(const RadialProfile& profile, const DomainSpec& domain,
                                   double p, double weight_exp,
                                   const QuadratureConfig& quad,
                                   Field field = Field::value) {
  return lp_norm_on_subset(profile, domain, p, weight_exp, domain.r_lo(), domain.r_hi(),
                           quad, field);
}

/// Adaptive quadrature of \int_1^inf e^{-s y} y^m dy through the damped-tail
/// machinery: the engine-side route of the oracle-equivalence check.
inline IntegralResult integrate_core_integrand(double s, double m,
                                               const QuadratureConfig& quad) {
  quad.validate();
  if (!(m >= 0.0)) throw std::invalid_argument("integrate_core_integrand: m >= 0");
  IntegralResult out;
  if (!(s > 0.0)) {
    out.value = std::numeric_limits<double>::infinity();
    out.abs_error = std::numeric_limits<double>::infinity();
    out.diverged = true;
    return out;
  }
  const auto h = [s, m](double y) { return std::exp(m * std::log(y) - s * y); };
  const detail::PieceAccum acc = detail::integrate_damped(
      h, 1.0, std::numeric_limits<double>::infinity(), s, m, quad, quad.abs_tol);
  out.value = acc.value;
  out.abs_error = acc.error;
  out.diverged = acc.diverged;
  out.converged = acc.converged && !acc.diverged &&
                  acc.error <= quad.rel_tol * std::fabs(acc.value) + quad.abs_tol * 1.01;
  return out;
}

/// Mean value of f over the bounded domain.
inline double mean_value(const RadialProfile& profile, const DomainSpec& domain,
                         const QuadratureConfig& quad) {
  if (!domain.bounded()) {
    throw std::invalid_argument("mean_value: domain must be bounded");
  }
  RadialIntegrand ig;
  ig.abs_power = false;
  const IntegralResult integral = integrate_radial(profile, domain, ig, quad);
  if (!integral.converged) {
    throw std::runtime_error("mean_value: quadrature did not converge");
  }
  return integral.value / ball_volume(domain.dimension);
}

/// f^0 = f - mean(f) on bounded domains; the identity elsewhere.
inline RadialProfile center(const RadialProfile& profile, const DomainSpec& domain,
                            const QuadratureConfig& quad) {
  if (!domain.bounded()) return profile;
  return profile.with_offset(mean_value(profile, domain, quad));
}

}  // namespace bgls
