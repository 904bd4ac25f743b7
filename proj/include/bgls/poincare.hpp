#pragma once

// The inequality machinery: the ratio
//   V(f, p) = |f^0 / delta^{1+alpha}|_p * |d - p(1+alpha)| / p
//             ---------------------------------------------------
//                       | |grad f| / delta^alpha |_p
// its supremum over an exponent grid (the empirical constant of the upper
// bound), and sharpness scans of the extremal families near the critical
// exponent and at p -> infinity.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bgls/domain.hpp"
#include "bgls/fit.hpp"
#include "bgls/psi.hpp"
#include "bgls/quadrature.hpp"
#include "bgls/radial.hpp"

namespace bgls {

inline double critical_exponent(const PoincareParams& params) { return params.p0; }

namespace detail {

struct RatioParts {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  bool converged = false;
};

// f is expected to be centered already on bounded domains.
inline RatioParts ratio_parts(const RadialProfile& f, const DomainSpec& domain,
                              const PoincareParams& params, double p,
                              const QuadratureConfig& quad) {
  RatioParts out;
  const NormResult num =
      lp_norm_weighted(f, domain, p, 1.0 + params.alpha, quad, Field::value);
  const NormResult den =
      lp_norm_weighted(f, domain, p, params.alpha, quad, Field::gradient);
  out.numerator = num.value;
  out.denominator = den.value;
  if (!num.converged || !den.converged) return out;
  // A vanishing gradient norm certifies an a.e.-constant profile, whose
  // centered numerator is identically zero; any nonzero numerator there is
  // centering quadrature noise.
  if (num.value == 0.0 || den.value == 0.0) {
    out.ratio = 0.0;
    out.converged = true;
    return out;
  }
  const double factor = std::fabs(params.d - p * (1.0 + params.alpha)) / p;
  out.ratio = num.value * factor / den.value;
  out.converged = std::isfinite(out.ratio);
  return out;
}

}  // namespace detail

/// V(f, p) for a profile that has already been centered on bounded domains.
/// Throws when either norm fails to converge.
inline double poincare_ratio(const RadialProfile& f, const DomainSpec& domain,
                             const PoincareParams& params, double p,
                             const QuadratureConfig& quad) {
  const auto parts = detail::ratio_parts(f, domain, params, p, quad);
  if (!parts.converged) {
    throw std::runtime_error("poincare_ratio: quadrature did not converge");
  }
  return parts.ratio;
}

struct Theorem1Report {
  double estimated_c = 0.0;
  double argmax_p = 0.0;
  bool grid_stable = false;
};

/// Empirical constant of the upper bound: sup over the exponent grid of the
/// per-p ratio [|f^0/delta^{1+a}|_p / psi_{a,d}(p)] / [| |grad f|/delta^a |_p / psi(p)].
/// The psi factors cancel algebraically, so the computation is psi-free and
/// rescaling psi cannot change the report.  Stability is judged by grid
/// doubling (< 5% change).
inline Theorem1Report theorem1_verify(const RadialProfile& f, const DomainSpec& domain,
                                      const PoincareParams& params, const PsiFunction& psi,
                                      const GridSpec& grid, const QuadratureConfig& quad) {
  const RadialProfile centered = center(f, domain, quad);
  const auto sup_over = [&](const GridSpec& g) {
    const auto ps = build_exponent_grid(psi.interval(), g);
    double best = 0.0;
    double best_p = ps.empty() ? 0.0 : ps.front();
    for (double p : ps) {
      if (p < 1.0) continue;
      const auto parts = detail::ratio_parts(centered, domain, params, p, quad);
      if (!parts.converged) continue;
      if (parts.ratio > best) {
        best = parts.ratio;
        best_p = p;
      }
    }
    return std::make_pair(best, best_p);
  };
  const auto [c1, argmax] = sup_over(grid);
  GridSpec doubled = grid;
  doubled.count = grid.count * 2;
  const auto [c2, argmax2] = sup_over(doubled);
  (void)argmax2;
  Theorem1Report report;
  report.estimated_c = c1;
  report.argmax_p = argmax;
  report.grid_stable =
      (c1 == 0.0 && c2 == 0.0) || std::fabs(c2 - c1) < 0.05 * std::max(c1, c2);
  return report;
}

enum class SharpnessCase { bounded_below, unbounded_above, unbounded_infinity };

struct ScanRow {
  double p = 0.0;
  double eps = 0.0;
  double numerator_norm = 0.0;
  double denominator_norm = 0.0;
  double ratio = 0.0;  // V
  bool converged = false;
};

enum class ScanSeries { ratio, numerator, denominator };

struct ScanResult {
  std::vector<ScanRow> rows;  // sorted by p; includes dropped rows, flagged
  LineFit fit;                // log(V) against log(eps), converged rows only
  PoincareParams params;
  SharpnessCase scan_case;
  double Delta = 0.0;
  int dropped = 0;
  std::string meta;
};

/// log-log refit of one series of an existing scan.
inline LineFit fit_scan_series(const ScanResult& scan, ScanSeries series) {
  std::vector<double> xs, ys;
  for (const auto& row : scan.rows) {
    if (!row.converged) continue;
    const double y = series == ScanSeries::ratio          ? row.ratio
                     : series == ScanSeries::numerator    ? row.numerator_norm
                                                          : row.denominator_norm;
    if (!(y > 0.0) || !std::isfinite(y)) continue;
    xs.push_back(std::log(row.eps));
    ys.push_back(std::log(y));
  }
  return ols_fit(xs, ys);
}

/// 12 geometric points from 0.3 down to 1e-3.
inline std::vector<double> default_epsilons() {
  std::vector<double> eps;
  const double ratio = std::pow(1e-3 / 0.3, 1.0 / 11.0);
  double e = 0.3;
  for (int i = 0; i < 12; ++i, e *= ratio) eps.push_back(e);
  return eps;
}

/// 12 log-spaced exponents from 10 to 200 for the p -> infinity scan.
inline std::vector<double> default_infinity_grid() {
  std::vector<double> ps;
  const double ratio = std::pow(200.0 / 10.0, 1.0 / 11.0);
  double p = 10.0;
  for (int i = 0; i < 12; ++i, p *= ratio) ps.push_back(p);
  ps.back() = 200.0;
  return ps;
}

/// Sharpness scan of the extremal family for the selected regime.
///  - bounded_below:      u_Delta on the unit ball (delta = |x|), p = p0 - eps
///  - unbounded_above:    v_Delta on the exterior domain, p = p0 + eps
///  - unbounded_infinity: v_Delta, `epsilons` interpreted as the p grid itself
/// Divergent rows are kept with converged = false and excluded from the fit.
inline ScanResult sharpness_scan(SharpnessCase scan_case, double Delta,
                                 const PoincareParams& params,
                                 const QuadratureConfig& quad,
                                 const std::vector<double>& epsilons, int threads = 1) {
  if (!(Delta > 1.0)) throw std::invalid_argument("sharpness_scan: requires Delta > 1");
  if (!params.bounded_admissible()) {
    throw std::invalid_argument("sharpness_scan: requires d(1+alpha) > 1");
  }
  if (epsilons.empty()) throw std::invalid_argument("sharpness_scan: empty grid");

  const bool bounded = scan_case == SharpnessCase::bounded_below;
  const DomainSpec domain =
      bounded ? DomainSpec::unit_ball(params.d, DeltaModel::distance_to_origin)
              : DomainSpec::exterior_unit_ball(params.d);
  const RadialProfile f = bounded ? center(make_u_delta(Delta), domain, quad)
                                  : make_v_delta(Delta);

  ScanResult scan{.rows = {},
                  .fit = {},
                  .params = params,
                  .scan_case = scan_case,
                  .Delta = Delta,
                  .dropped = 0,
                  .meta = {}};
  scan.rows.resize(epsilons.size());

  const auto compute_row = [&](std::size_t i) {
    const double eps = epsilons[i];
    double p;
    switch (scan_case) {
      case SharpnessCase::bounded_below:
        p = params.p0 - eps;
        break;
      case SharpnessCase::unbounded_above:
        p = params.p0 + eps;
        break;
      default:
        p = eps;
        break;
    }
    ScanRow row;
    row.p = p;
    row.eps = eps;
    if (p < 1.0) {
      scan.rows[i] = row;  // not an admissible exponent; dropped
      return;
    }
    const auto parts = detail::ratio_parts(f, domain, params, p, quad);
    row.numerator_norm = parts.numerator;
    row.denominator_norm = parts.denominator;
    row.ratio = parts.ratio;
    row.converged = parts.converged;
    scan.rows[i] = row;
  };

  if (threads > 1) {
    std::vector<std::thread> pool;
    const int t_count = std::min<int>(threads, static_cast<int>(epsilons.size()));
    pool.reserve(t_count);
    for (int t = 0; t < t_count; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t i = t; i < epsilons.size(); i += t_count) compute_row(i);
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < epsilons.size(); ++i) compute_row(i);
  }

  std::sort(scan.rows.begin(), scan.rows.end(),
            [](const ScanRow& a, const ScanRow& b) { return a.p < b.p; });
  for (const auto& row : scan.rows) {
    if (!row.converged) ++scan.dropped;
  }
  scan.fit = fit_scan_series(scan, ScanSeries::ratio);
  std::ostringstream meta;
  meta << "case="
       << (scan_case == SharpnessCase::bounded_below     ? "bounded-below"
           : scan_case == SharpnessCase::unbounded_above ? "unbounded-above"
                                                         : "unbounded-infinity")
       << " Delta=" << Delta << " d=" << params.d << " alpha=" << params.alpha
       << " rows=" << scan.rows.size() << " dropped=" << scan.dropped
       << " rel_tol=" << quad.rel_tol << " abs_tol=" << quad.abs_tol;
  scan.meta = meta.str();
  return scan;
}

}  // namespace bgls
