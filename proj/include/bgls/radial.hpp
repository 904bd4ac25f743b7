#pragma once

// Piecewise radial test functions: a log-power core |log r|^Delta, a cubic
// Hermite bridge that restores C^1 continuity, and constant/zero filler
// segments.  These realize the extremal families u_Delta (unit ball) and
// v_Delta (exterior domain).

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bgls/domain.hpp"

namespace bgls {

/// (-log r)^Delta on (0, r_hi] (inner) or (log r)^Delta on [r_lo, inf) (outer).
struct LogPowerCore {
  double Delta;
  enum class Orientation { inner, outer };
  Orientation orientation;
};

/// Cubic q(r) = c[0] + c[1] r + c[2] r^2 + c[3] r^3.
struct Bridge {
  std::array<double, 4> c{};

  double value(double r) const { return ((c[3] * r + c[2]) * r + c[1]) * r + c[0]; }
  double derivative(double r) const { return (3.0 * c[3] * r + 2.0 * c[2]) * r + c[1]; }
};

struct Constant {
  double value;
};

struct Zero {};

using SegmentKind = std::variant<LogPowerCore, Bridge, Constant, Zero>;

struct Segment {
  double r_lo;
  double r_hi;
  SegmentKind kind;

  double raw_value(double r) const {
    if (const auto* core = std::get_if<LogPowerCore>(&kind)) {
      const double y = core->orientation == LogPowerCore::Orientation::inner
                           ? -std::log(r)
                           : std::log(r);
      return std::pow(y, core->Delta);
    }
    if (const auto* bridge = std::get_if<Bridge>(&kind)) return bridge->value(r);
    if (const auto* constant = std::get_if<Constant>(&kind)) return constant->value;
    return 0.0;
  }

  double raw_derivative(double r) const {
    if (const auto* core = std::get_if<LogPowerCore>(&kind)) {
      if (core->orientation == LogPowerCore::Orientation::inner) {
        return -core->Delta * std::pow(-std::log(r), core->Delta - 1.0) / r;
      }
      return core->Delta * std::pow(std::log(r), core->Delta - 1.0) / r;
    }
    if (const auto* bridge = std::get_if<Bridge>(&kind)) return bridge->derivative(r);
    return 0.0;
  }
};

/// The unique cubic with q(r0) = v0, q'(r0) = d0, q(r1) = v1, q'(r1) = d1.
inline Bridge hermite_bridge(double r0, double r1, double v0, double d0, double v1,
                             double d1) {
  if (!(r0 < r1)) {
    throw std::invalid_argument("hermite_bridge: requires r0 < r1");
  }
  const double h = r1 - r0;
  // Hermite basis in t = (r - r0)/h, then expanded in powers of (r - r0).
  const double at = 2.0 * v0 + h * d0 - 2.0 * v1 + h * d1;
  const double bt = -3.0 * v0 - 2.0 * h * d0 + 3.0 * v1 - h * d1;
  const double a3 = at / (h * h * h);
  const double a2 = bt / (h * h);
  const double a1 = d0;
  const double a0 = v0;
  Bridge q;
  q.c[3] = a3;
  q.c[2] = a2 - 3.0 * a3 * r0;
  q.c[1] = a1 - 2.0 * a2 * r0 + 3.0 * a3 * r0 * r0;
  q.c[0] = a0 - a1 * r0 + a2 * r0 * r0 - a3 * r0 * r0 * r0;
  return q;
}

/// A radial function assembled from contiguous segments, evaluated as
/// scale * raw(r) - offset.  scale/offset let callers rescale and center
/// without disturbing the oracle-checkable core coefficients.
class RadialProfile {
 public:
  RadialProfile(std::vector<Segment> segments, double range_lo, double range_hi)
      : segments_(std::move(segments)), range_lo_(range_lo), range_hi_(range_hi) {
    if (segments_.empty()) {
      throw std::invalid_argument("RadialProfile: needs at least one segment");
    }
    double cursor = range_lo_;
    for (const auto& seg : segments_) {
      if (std::fabs(seg.r_lo - cursor) > 1e-12 * std::max(1.0, std::fabs(cursor))) {
        throw std::invalid_argument("RadialProfile: segments must be contiguous");
      }
      if (!(seg.r_hi > seg.r_lo)) {
        throw std::invalid_argument("RadialProfile: empty segment");
      }
      cursor = seg.r_hi;
    }
    if (std::isfinite(range_hi_) != std::isfinite(cursor) ||
        (std::isfinite(cursor) && std::fabs(cursor - range_hi_) > 1e-12)) {
      throw std::invalid_argument("RadialProfile: segments must cover the radial range");
    }
  }

  double value(double r) const { return scale_ * segment_at(r).raw_value(r) - offset_; }
  double derivative(double r) const { return scale_ * segment_at(r).raw_derivative(r); }

  const std::vector<Segment>& segments() const { return segments_; }
  double range_lo() const { return range_lo_; }
  double range_hi() const { return range_hi_; }
  double scale() const { return scale_; }
  double offset() const { return offset_; }

  /// Profile representing value(r) - c.
  RadialProfile with_offset(double c) const {
    RadialProfile out = *this;
    out.offset_ += c;
    return out;
  }

  /// Profile representing c * value(r).
  RadialProfile scaled(double c) const {
    RadialProfile out = *this;
    out.scale_ *= c;
    out.offset_ *= c;
    return out;
  }

  /// Interior knots (segment junctions).
  std::vector<double> knots() const {
    std::vector<double> ks;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) ks.push_back(segments_[i].r_hi);
    return ks;
  }

 private:
  const Segment& segment_at(double r) const {
    if (r < range_lo_ - 1e-12 || r > range_hi_ + 1e-12) {
      throw std::out_of_range("RadialProfile: radius outside the profile range");
    }
    for (const auto& seg : segments_) {
      if (r <= seg.r_hi) return seg;
    }
    return segments_.back();
  }

  std::vector<Segment> segments_;
  double range_lo_;
  double range_hi_;
  double scale_ = 1.0;
  double offset_ = 0.0;
};

/// f == c on the whole radial range of the domain.
inline RadialProfile make_constant(double c, const DomainSpec& domain) {
  std::vector<Segment> segs{{domain.r_lo(), domain.r_hi(), Constant{c}}};
  return RadialProfile(std::move(segs), domain.r_lo(), domain.r_hi());
}

/// Bounded-case extremal on the unit ball:
///   (-log r)^Delta on (0, 1/e], a C^1 cubic bridge down to zero on
///   [1/e, 2/e], zero on [2/e, 1].
/// The bridge matches the core's actual one-sided derivative -e*Delta at 1/e.
inline RadialProfile make_u_delta(double Delta) {
  if (!(Delta > 1.0)) {
    throw std::invalid_argument("make_u_delta: requires Delta > 1");
  }
  const double r1 = std::exp(-1.0);
  const double r2 = 2.0 * r1;
  std::vector<Segment> segs;
  segs.push_back({0.0, r1, LogPowerCore{Delta, LogPowerCore::Orientation::inner}});
  segs.push_back({r1, r2,
                  hermite_bridge(r1, r2, 1.0, -std::numbers::e * Delta, 0.0, 0.0)});
  segs.push_back({r2, 1.0, Zero{}});
  return RadialProfile(std::move(segs), 0.0, 1.0);
}

/// Core-only variant of u_Delta (bridge replaced by zero), for closed-form
/// cross-checks against the gamma oracle.
inline RadialProfile make_u_delta_core(double Delta) {
  if (!(Delta > 1.0)) {
    throw std::invalid_argument("make_u_delta_core: requires Delta > 1");
  }
  const double r1 = std::exp(-1.0);
  std::vector<Segment> segs;
  segs.push_back({0.0, r1, LogPowerCore{Delta, LogPowerCore::Orientation::inner}});
  segs.push_back({r1, 1.0, Zero{}});
  return RadialProfile(std::move(segs), 0.0, 1.0);
}

/// Unbounded-case extremal on the exterior domain:
///   zero on [1, e/2], a C^1 cubic bridge up to 1 on [e/2, e] with slope
///   Delta/e at e, (log r)^Delta on [e, inf).
inline RadialProfile make_v_delta(double Delta) {
  if (!(Delta > 1.0)) {
    throw std::invalid_argument("make_v_delta: requires Delta > 1");
  }
  const double e = std::numbers::e;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Segment> segs;
  segs.push_back({1.0, 0.5 * e, Zero{}});
  segs.push_back({0.5 * e, e, hermite_bridge(0.5 * e, e, 0.0, 0.0, 1.0, Delta / e)});
  segs.push_back({e, inf, LogPowerCore{Delta, LogPowerCore::Orientation::outer}});
  return RadialProfile(std::move(segs), 1.0, inf);
}

/// Core-only variant of v_Delta.
inline RadialProfile make_v_delta_core(double Delta) {
  if (!(Delta > 1.0)) {
    throw std::invalid_argument("make_v_delta_core: requires Delta > 1");
  }
  const double e = std::numbers::e;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Segment> segs;
  segs.push_back({1.0, e, Zero{}});
  segs.push_back({e, inf, LogPowerCore{Delta, LogPowerCore::Orientation::outer}});
  return RadialProfile(std::move(segs), 1.0, inf);
}

}  // namespace bgls
