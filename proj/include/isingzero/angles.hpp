#pragma once
// Canonical circle coordinates: angles normalized into [0, 2pi) and
// counterclockwise arcs with endpoint-inclusion flags.

#include <cmath>

#include "cx.hpp"

namespace isingzero {

inline constexpr double TWO_PI = 6.283185307179586476925286766559;

inline double wrap_angle(double theta) {
  double t = std::fmod(theta, TWO_PI);
  if (t < 0) t += TWO_PI;
  if (t >= TWO_PI) t = 0; // fmod rounding at the seam
  return t;
}

struct UnitAngle {
  double theta = 0; // in [0, 2pi)

  UnitAngle() = default;
  explicit UnitAngle(double t) : theta(wrap_angle(t)) {}

  Cx<double> point() const { return unit_cx(theta); }
  static UnitAngle of(const Cx<double> &z) { return UnitAngle(arg(z)); }
};

// Counterclockwise arc from start to end. start == end denotes the
// degenerate single-point arc (when closed), not the full circle.
struct CircleArc {
  UnitAngle start, end;
  bool includes_start = true;
  bool includes_end = true;

  // end angle lifted counterclockwise from start, in [0, 2pi)
  double width() const { return wrap_angle(end.theta - start.theta); }

  bool contains(UnitAngle a, double tol = 0.0) const {
    double lift = wrap_angle(a.theta - start.theta);
    double w = width();
    if (lift <= tol || lift >= TWO_PI - tol)
      return includes_start || (includes_end && w <= tol);
    if (std::abs(lift - w) <= tol) return includes_end;
    return lift < w;
  }

  // signed distance to the arc interior: negative inside, measured in radians
  double interior_margin(UnitAngle a) const {
    double lift = wrap_angle(a.theta - start.theta);
    double w = width();
    if (lift <= w) return -std::min(lift, w - lift);
    return std::min(lift - w, TWO_PI - lift);
  }

  double midpoint() const { return wrap_angle(start.theta + width() / 2); }
};

} // namespace isingzero
