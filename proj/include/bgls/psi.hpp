#pragma once

// Generating functions psi in Psi(a,b) for Bilateral Grand Lebesgue Spaces,
// the p |d - p(1+alpha)|^{-1} psi(p) transform, and the BGLS norm
//   ||f|| = sup_{p in (a,b)} |f|_p / psi(p)
// computed on an exponent grid refined geometrically toward both endpoints.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "bgls/domain.hpp"

namespace bgls {

struct ExponentInterval {
  double a;
  double b;  // may be +infinity

  ExponentInterval(double a_, double b_) : a(a_), b(b_) {
    if (!(a >= 1.0) || std::isnan(b) || !(a < b)) {
      throw std::invalid_argument("ExponentInterval: requires 1 <= a < b");
    }
  }

  bool finite() const { return std::isfinite(b); }
};

struct PowerBilateral {
  double beta;
  double gamma;
};

struct PowerTail {
  double beta;
  double gamma;  // < 0
  double h;      // continuity-equation root
};

struct CustomFamily {};

using PsiFamily = std::variant<PowerBilateral, PowerTail, CustomFamily>;

/// Exponent grid on (a,b): spacing to each endpoint shrinks geometrically so
/// endpoint suprema are captured; infinite intervals get a logarithmic tail
/// up to p_cap.
struct GridSpec {
  int count = 256;
  double endpoint_offset_rel = 1e-6;
  double p_cap = 200.0;
  // BGLS norms whose grid maximum sits monotonically at an endpoint above
  // this value are flagged as +infinity.
  double ratio_cap = 1e12;
};

inline std::vector<double> build_exponent_grid(const ExponentInterval& interval,
                                               const GridSpec& grid) {
  if (grid.count < 8) throw std::invalid_argument("GridSpec: count must be >= 8");
  if (!(grid.endpoint_offset_rel > 0.0) || !(grid.endpoint_offset_rel < 0.5)) {
    throw std::invalid_argument("GridSpec: endpoint offset must be in (0, 0.5)");
  }
  std::vector<double> ps;
  const int half = grid.count / 2;
  if (interval.finite()) {
    const double len = interval.b - interval.a;
    const double ratio =
        std::pow(0.5 / grid.endpoint_offset_rel, 1.0 / (half - 1));
    double off = grid.endpoint_offset_rel;
    for (int k = 0; k < half; ++k, off *= ratio) {
      const double o = std::min(off, 0.5);
      ps.push_back(interval.a + o * len);
      ps.push_back(interval.b - o * len);
    }
  } else {
    const double cap = std::max(grid.p_cap, interval.a + 2.0);
    const double ratio = std::pow(1.0 / grid.endpoint_offset_rel, 1.0 / (half - 1));
    double off = grid.endpoint_offset_rel;
    for (int k = 0; k < half; ++k, off *= ratio) {
      ps.push_back(interval.a + std::min(off, 1.0));
    }
    const double tail_ratio = std::pow(cap / (interval.a + 1.0), 1.0 / half);
    double p = interval.a + 1.0;
    for (int k = 0; k < half; ++k) {
      p *= tail_ratio;
      ps.push_back(std::min(p, cap));
    }
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

/// A generating function: positive on its open exponent interval.  Custom
/// evaluators are opaque, so positivity is checked by dense sampling.
class PsiFunction {
 public:
  using Evaluator = std::function<double(double)>;

  PsiFunction(ExponentInterval interval, PsiFamily family, Evaluator evaluator)
      : interval_(interval), family_(std::move(family)), eval_(std::move(evaluator)) {
    if (!eval_) throw std::invalid_argument("PsiFunction: null evaluator");
    validate_positivity();
  }

  double operator()(double p) const { return eval_(p); }
  const ExponentInterval& interval() const { return interval_; }
  const PsiFamily& family() const { return family_; }

 private:
  void validate_positivity() const {
    GridSpec dense;
    dense.count = 1024;
    const auto ps = build_exponent_grid(interval_, dense);
    bool any_finite = false;
    for (double p : ps) {
      const double v = eval_(p);
      if (std::isnan(v) || v <= 0.0) {
        throw std::invalid_argument(
            "PsiFunction: evaluator must be positive on the exponent interval");
      }
      any_finite = any_finite || std::isfinite(v);
    }
    if (!any_finite) {
      throw std::invalid_argument("PsiFunction: evaluator is infinite everywhere");
    }
  }

  ExponentInterval interval_;
  PsiFamily family_;
  Evaluator eval_;
};

/// psi(p) = (p-a)^{-beta} (b-p)^{-gamma} on (a,b), finite b, beta, gamma >= 0.
inline PsiFunction make_power_psi(double a, double b, double beta, double gamma) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(beta) ||
      !std::isfinite(gamma)) {
    throw std::invalid_argument("make_power_psi: arguments must be finite");
  }
  if (!(a >= 1.0) || !(a < b)) {
    throw std::invalid_argument("make_power_psi: requires 1 <= a < b < inf");
  }
  if (beta < 0.0 || gamma < 0.0) {
    throw std::invalid_argument("make_power_psi: requires beta, gamma >= 0");
  }
  auto eval = [a, b, beta, gamma](double p) {
    double v = 1.0;
    if (beta != 0.0) v *= std::pow(p - a, -beta);
    if (gamma != 0.0) v *= std::pow(b - p, -gamma);
    return v;
  };
  return PsiFunction(ExponentInterval(a, b), PowerBilateral{beta, gamma}, eval);
}

/// Custom evaluator, validated by sampling.
inline PsiFunction make_custom_psi(ExponentInterval interval,
                                   PsiFunction::Evaluator evaluator) {
  return PsiFunction(interval, CustomFamily{}, std::move(evaluator));
}

/// Root of the continuity equation (h-a)^{-beta} = h^{-gamma} in (a, inf),
/// gamma < 0.  The left side decreases from +inf to 0 while the right side
/// h^{|gamma|} increases, so the root is unique; located by bisection on the
/// log form.
inline double solve_h(double a, double beta, double gamma) {
  if (!std::isfinite(a) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw std::invalid_argument("solve_h: arguments must be finite");
  }
  if (!(a >= 1.0)) throw std::invalid_argument("solve_h: requires a >= 1");
  if (!(beta >= 0.0) || !(gamma < 0.0)) {
    throw std::invalid_argument("solve_h: requires beta >= 0, gamma < 0");
  }
  if (beta == 0.0) {
    // Left side is identically 1 while h^{|gamma|} > 1 on (a, inf): the
    // equation only degenerates to the boundary h = 1 <= a.
    throw std::domain_error("solve_h: no root in (a, inf) for beta = 0");
  }
  const auto g = [a, beta, gamma](double h) {
    return -beta * std::log(h - a) + gamma * std::log(h);
  };
  double t_lo = 1.0;
  while (g(a + t_lo) < 0.0) {
    t_lo *= 0.5;
    if (t_lo < 1e-300) throw std::runtime_error("solve_h: bracketing failed");
  }
  double t_hi = std::max(1.0, 2.0 * t_lo);
  while (g(a + t_hi) > 0.0) {
    t_hi *= 2.0;
    if (!std::isfinite(t_hi)) throw std::runtime_error("solve_h: bracketing failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (mid == t_lo || mid == t_hi) break;
    (g(a + mid) >= 0.0 ? t_lo : t_hi) = mid;
  }
  return a + 0.5 * (t_lo + t_hi);
}

/// Tail family on (a, inf) for gamma < 0:
///   psi(p) = (p-a)^{-beta} on (a, h],  psi(p) = p^{|gamma|} on [h, inf),
/// continuous at the continuity-equation root h.
inline PsiFunction make_tail_psi(double a, double beta, double gamma) {
  const double h = solve_h(a, beta, gamma);
  const double left = std::pow(h - a, -beta);
  const double right = std::pow(h, -gamma);
  if (std::fabs(left - right) > 1e-12 * right) {
    throw std::runtime_error("make_tail_psi: continuity equation residual too large");
  }
  auto eval = [a, beta, gamma, h](double p) {
    return p < h ? std::pow(p - a, -beta) : std::pow(p, -gamma);
  };
  return PsiFunction(ExponentInterval(a, std::numeric_limits<double>::infinity()),
                     PowerTail{beta, gamma, h}, eval);
}

/// psi_{alpha,d}(p) = p / |d - p(1+alpha)| * psi(p) on the same interval.
/// Where the denominator vanishes the evaluator signals the pole with +inf.
inline PsiFunction transform_alpha_d(const PsiFunction& psi,
                                     const PoincareParams& params) {
  const double alpha = params.alpha;
  const double d = params.d;
  auto eval = [psi, alpha, d](double p) {
    const double denom = std::fabs(d - p * (1.0 + alpha));
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return p * psi(p) / denom;
  };
  return PsiFunction(psi.interval(), CustomFamily{}, eval);
}

struct BglsNorm {
  double value = 0.0;
  bool is_infinite = false;
  double argmax_p = 0.0;
  int grid_size = 0;
};

/// sup over the exponent grid of |f|_p / psi(p), with |f|_p supplied as a
/// callback.  psi(p) = +inf contributes a zero ratio (the L_r recovery
/// convention).  Ratios climbing monotonically into an endpoint past
/// grid.ratio_cap are flagged as an infinite norm.
inline BglsNorm bgls_norm(const std::function<double(double)>& lp_norm,
                          const PsiFunction& psi, const GridSpec& grid = {}) {
  const auto ps = build_exponent_grid(psi.interval(), grid);
  std::vector<double> ratios(ps.size());
  BglsNorm out;
  out.grid_size = static_cast<int>(ps.size());
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double lp = lp_norm(ps[i]);
    const double psi_v = psi(ps[i]);
    double ratio;
    if (std::isinf(psi_v)) {
      ratio = 0.0;
    } else {
      ratio = lp / psi_v;
    }
    if (std::isnan(ratio)) {
      throw std::runtime_error("bgls_norm: non-finite ratio at p = " + std::to_string(ps[i]));
    }
    ratios[i] = ratio;
    if (ratio > best) {
      best = ratio;
      best_i = i;
    }
  }
  out.value = best;
  out.argmax_p = ps[best_i];
  if (std::isinf(best)) {
    out.is_infinite = true;
    return out;
  }
  const std::size_t n = ps.size();
  const std::size_t run = std::min<std::size_t>(8, n / 4);
  if (best > grid.ratio_cap && (best_i == 0 || best_i == n - 1) && run >= 2) {
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < run; ++k) {
      const std::size_t i = best_i == 0 ? k : n - 1 - k;
      const std::size_t j = best_i == 0 ? k + 1 : n - 2 - k;
      if (!(ratios[j] < ratios[i])) monotone = false;
    }
    out.is_infinite = monotone;
  }
  return out;
}

}  // namespace bgls
