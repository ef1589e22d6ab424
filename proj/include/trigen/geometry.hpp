#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "trigen/errors.hpp"

namespace trigen {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Point2& a, const Point2& b) {
  return a.x == b.x && a.y == b.y;  // bitwise-exact comparison is intentional
}
inline bool operator!=(const Point2& a, const Point2& b) { return !(a == b); }

inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(const Point2& a, double s) { return {a.x * s, a.y * s}; }
inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

/// Exact sign of the signed area of triangle (a, b, c): Positive when the
/// points make a left turn (counter-clockwise), Zero when collinear.
/// Evaluated with a floating-point filter; falls back to exact rational
/// arithmetic when the filter cannot certify the sign.
Sign orient2d(const Point2& a, const Point2& b, const Point2& c);

/// Exact position of d relative to the circumcircle of the counter-clockwise
/// triangle (a, b, c): Positive strictly inside, Zero on the circle,
/// Negative strictly outside. Same filter + exact fallback as orient2d.
Sign in_circumcircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

struct TriMetrics {
  double area = 0.0;          // positive
  double longest_edge = 0.0;  // diameter h
  double inradius = 0.0;
  double circumradius = 0.0;
  double quality = 0.0;   // 2 * inradius / circumradius, in (0, 1], 1 for equilateral
  double min_angle = 0.0;  // radians
};

/// Area of triangle (a, b, c), independent of orientation.
inline double tri_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * std::fabs(cross(b - a, c - a));
}

/// Length of the longest edge of triangle (a, b, c).
inline double tri_longest_edge(const Point2& a, const Point2& b, const Point2& c) {
  const double ab = norm(b - a);
  const double bc = norm(c - b);
  const double ca = norm(a - c);
  return std::fmax(ab, std::fmax(bc, ca));
}

/// All metrics of a nondegenerate triangle; nullopt when (a, b, c) are
/// exactly collinear (decided by orient2d).
std::optional<TriMetrics> try_tri_metrics(const Point2& a, const Point2& b, const Point2& c);

/// Throwing variant of try_tri_metrics: GeometryError on degenerate input.
TriMetrics tri_metrics(const Point2& a, const Point2& b, const Point2& c);

/// Signed area of a closed polygonal loop (shoelace formula); positive for
/// counter-clockwise orientation. The loop is given without a repeated end
/// vertex. Throws GeometryError for fewer than 3 vertices.
double polygon_area(std::span<const Point2> loop);

/// Precondition: x is collinear with segment [a, b] (orient2d == Zero).
/// True when x lies strictly between a and b. Exact.
inline bool collinear_point_in_open_segment(const Point2& a, const Point2& b, const Point2& x) {
  if (x == a || x == b) return false;
  if (std::fabs(b.x - a.x) >= std::fabs(b.y - a.y)) {
    return std::fmin(a.x, b.x) < x.x && x.x < std::fmax(a.x, b.x);
  }
  return std::fmin(a.y, b.y) < x.y && x.y < std::fmax(a.y, b.y);
}

enum class PointLocation { Inside, Boundary, Outside };

/// Exact even-odd point-in-polygon test for a simple closed loop (no
/// repeated end vertex, either orientation).
PointLocation point_in_polygon(std::span<const Point2> loop, const Point2& p);

/// True when closed segments [p1,p2] and [q1,q2] share any point that is not
/// an endpoint common to both segments. Exact: meeting only at a shared
/// endpoint is not an intersection, while any crossing, endpoint-in-interior
/// contact, or collinear overlap of positive length is. Throws GeometryError
/// when either segment has zero length.
bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2);

}  // namespace trigen
