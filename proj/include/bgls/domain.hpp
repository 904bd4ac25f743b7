#pragma once

// Geometry of the two domains the library works on: the unit ball of R^d and
// its exterior, together with the distance weight delta(x) and the critical
// exponent parameters (alpha, d, p0).

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bgls {

enum class Shape { unit_ball, exterior_unit_ball };

/// How delta(x) is evaluated on the bounded domain.  On the exterior domain
/// delta(x) = |x| always.
enum class DeltaModel { distance_to_origin, distance_to_boundary };

struct DomainSpec {
  Shape shape = Shape::unit_ball;
  int dimension = 2;
  DeltaModel delta_model = DeltaModel::distance_to_origin;

  static DomainSpec unit_ball(int d, DeltaModel model = DeltaModel::distance_to_origin) {
    if (d < 2) throw std::invalid_argument("DomainSpec: dimension must be >= 2");
    return DomainSpec{Shape::unit_ball, d, model};
  }

  // The exterior domain forces delta(x) = |x|.
  static DomainSpec exterior_unit_ball(int d) {
    if (d < 2) throw std::invalid_argument("DomainSpec: dimension must be >= 2");
    return DomainSpec{Shape::exterior_unit_ball, d, DeltaModel::distance_to_origin};
  }

  bool bounded() const { return shape == Shape::unit_ball; }
  double r_lo() const { return bounded() ? 0.0 : 1.0; }
  double r_hi() const {
    return bounded() ? 1.0 : std::numeric_limits<double>::infinity();
  }
};

/// delta as a function of the radius.
inline double delta_of_r(const DomainSpec& domain, double r) {
  if (domain.bounded()) {
    if (r < 0.0 || r > 1.0) {
      throw std::out_of_range("delta_of_r: radius outside the unit ball");
    }
    return domain.delta_model == DeltaModel::distance_to_origin ? r : 1.0 - r;
  }
  if (r < 1.0) {
    throw std::out_of_range("delta_of_r: radius inside the excluded ball");
  }
  return r;
}

/// alpha, the dimension, and the derived exponent p0 = d (1 + alpha).
struct PoincareParams {
  double alpha;
  int d;
  double p0;

  PoincareParams(double alpha_, int d_) : alpha(alpha_), d(d_), p0(d_ * (1.0 + alpha_)) {
    if (!(alpha > -1.0)) {
      throw std::invalid_argument("PoincareParams: requires alpha > -1");
    }
    if (d < 2) throw std::invalid_argument("PoincareParams: requires d >= 2");
  }

  // The bounded-case results additionally need d (1 + alpha) > 1.
  bool bounded_admissible() const { return p0 > 1.0; }
};

}  // namespace bgls
