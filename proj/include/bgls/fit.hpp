#pragma once

// Small numerical helpers: ordinary least squares on (x, y) pairs and
// golden-section minimization of a unimodal function.

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>

namespace bgls {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual
  int points = 0;
};

inline LineFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("ols_fit: need at least two matched points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("ols_fit: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = static_cast<int>(xs.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

/// Golden-section search for the minimum of f on [lo, hi].
/// Returns (argmin, min).  f is assumed unimodal on the bracket; for a
/// monotone f the search converges to the boundary.
template <class F>
std::pair<double, double> golden_section_min(F&& f, double lo, double hi,
                                             double x_tol = 1e-10,
                                             int max_iter = 200) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section_min: requires lo < hi");
  constexpr double invphi = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > x_tol * (1.0 + std::fabs(a)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace bgls
