#pragma once

// Globally adaptive Gauss-Kronrod (G7,K15) quadrature on a finite interval.
// The worst panel (largest |K15 - G7|) is bisected until the summed error
// estimate meets max(abs_tol, rel_tol * |integral|).  The rule is open, so
// integrable endpoint singularities are never evaluated exactly.

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace bgls {

struct AdaptiveResult {
  double value = 0.0;
  double abs_error = std::numeric_limits<double>::infinity();
  bool converged = false;
  int panels = 0;
};

namespace detail {

// QUADPACK dqk15 nodes and weights (positive half; the node at 0 is last).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, double& integral, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_gauss = kGaussWeights[3] * fc;
  double result_kronrod = kKronrodWeights[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double fsum = f(center - dx) + f(center + dx);
    result_kronrod += kKronrodWeights[j] * fsum;
    if (j % 2 == 1) {
      result_gauss += kGaussWeights[j / 2] * fsum;
    }
  }
  integral = result_kronrod * half;
  error = std::fabs((result_kronrod - result_gauss) * half);
}

struct Panel {
  double a, b;
  double value;
  double error;
  int depth;
};

struct PanelWorse {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    if (lhs.error != rhs.error) return lhs.error < rhs.error;
    return lhs.a > rhs.a;  // deterministic tie-break
  }
};

}  // namespace detail

/// Adaptive integration over consecutive [breakpoints[i], breakpoints[i+1]]
/// panels.  Seeding with breakpoints lets callers pin down where the mass of
/// a peaked integrand lives before refinement starts.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                  double rel_tol, double abs_tol, int max_depth) {
  AdaptiveResult res;
  if (breakpoints.size() < 2) {
    res.value = 0.0;
    res.abs_error = 0.0;
    res.converged = true;
    return res;
  }
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> work;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    detail::Panel p{breakpoints[i], breakpoints[i + 1], 0.0, 0.0, 0};
    if (!(p.b > p.a)) continue;
    detail::gk15(f, p.a, p.b, p.value, p.error);
    total += p.value;
    total_err += p.error;
    work.push(p);
  }
  constexpr int kMaxPanels = 100000;
  int panels = static_cast<int>(work.size());
  while (total_err > std::max(abs_tol, rel_tol * std::fabs(total)) && !work.empty() &&
         panels < kMaxPanels) {
    const detail::Panel worst = work.top();
    if (worst.depth >= max_depth || !(worst.b - worst.a > 0.0) || worst.error == 0.0) {
      break;  // cannot refine further
    }
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Panel left{worst.a, mid, 0.0, 0.0, worst.depth + 1};
    detail::Panel right{mid, worst.b, 0.0, 0.0, worst.depth + 1};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++panels;
  }
  res.value = total;
  res.abs_error = total_err;
  res.panels = panels;
  res.converged = std::isfinite(total) &&
                  total_err <= std::max(abs_tol, rel_tol * std::fabs(total));
  return res;
}

template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                  double abs_tol, int max_depth) {
  const double pts[2] = {a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(pts, 2), rel_tol,
                            abs_tol, max_depth);
}

}  // namespace bgls
