// Exact planar predicates (floating-point filter + rational fallback) and
// basic triangle / polygon measures.

#include "trigen/geometry.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace trigen {

namespace {

// Half-ulp of 1.0; the error-bound coefficients below are the standard
// first-stage filter constants for the orientation and incircle determinants.
constexpr double kEps = DBL_EPSILON * 0.5;
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncErrBound = (10.0 + 96.0 * kEps) * kEps;

// The classic filter bounds assume no underflow: a product that drops into
// the subnormal range carries an absolute rounding error (up to half the
// smallest subnormal per product) that the relative bounds above do not
// cover. Adding this absolute term to every error bound forces the exact
// fallback at those extreme scales; it is far below 1 ulp of any normal
// error bound, so ordinary inputs never notice it.
constexpr double kUnderflowGuard = 1e-320;

inline Sign sign_of(double v) {
  if (v > 0.0) return Sign::Positive;
  if (v < 0.0) return Sign::Negative;
  return Sign::Zero;
}

inline Sign sign_of(int v) {
  if (v > 0) return Sign::Positive;
  if (v < 0) return Sign::Negative;
  return Sign::Zero;
}

Sign orient2d_exact(const Point2& a, const Point2& b, const Point2& c) {
  // Conversion from double to rational is exact, so this evaluates the
  // determinant with no rounding at all.
  const mpq_class ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  const mpq_class det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return sign_of(sgn(det));
}

Sign in_circumcircle_exact(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const mpq_class adx = mpq_class(a.x) - mpq_class(d.x);
  const mpq_class ady = mpq_class(a.y) - mpq_class(d.y);
  const mpq_class bdx = mpq_class(b.x) - mpq_class(d.x);
  const mpq_class bdy = mpq_class(b.y) - mpq_class(d.y);
  const mpq_class cdx = mpq_class(c.x) - mpq_class(d.x);
  const mpq_class cdy = mpq_class(c.y) - mpq_class(d.y);

  const mpq_class alift = adx * adx + ady * ady;
  const mpq_class blift = bdx * bdx + bdy * bdy;
  const mpq_class clift = cdx * cdx + cdy * cdy;

  const mpq_class det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                        clift * (adx * bdy - bdx * ady);
  return sign_of(sgn(det));
}

}  // namespace

Sign orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;

  // A nonzero floating-point product always has the sign of the exact
  // product, so strictly opposite signs decide without error analysis.
  if (detleft > 0.0 && detright < 0.0) return Sign::Positive;
  if (detleft < 0.0 && detright > 0.0) return Sign::Negative;

  if (detleft == 0.0 && detright == 0.0) {
    // A zero product is exact only when one factor is zero; otherwise it
    // may be an underflowed nonzero value.
    const bool left_exact = (a.x == c.x) || (b.y == c.y);
    const bool right_exact = (a.y == c.y) || (b.x == c.x);
    if (left_exact && right_exact) return Sign::Zero;
    return orient2d_exact(a, b, c);
  }

  const double detsum = std::fabs(detleft) + std::fabs(detright);
  const double errbound = kCcwErrBound * detsum + kUnderflowGuard;
  if (det > errbound) return Sign::Positive;
  if (-det > errbound) return Sign::Negative;
  return orient2d_exact(a, b, c);
}

Sign in_circumcircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x;
  const double ady = a.y - d.y;
  const double bdx = b.x - d.x;
  const double bdy = b.y - d.y;
  const double cdx = c.x - d.x;
  const double cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy;
  const double cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;

  const double cdxady = cdx * ady;
  const double adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;

  const double adxbdy = adx * bdy;
  const double bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);

  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  const double errbound = kIncErrBound * permanent + kUnderflowGuard;
  if (det > errbound || -det > errbound) return sign_of(det);
  return in_circumcircle_exact(a, b, c, d);
}

std::optional<TriMetrics> try_tri_metrics(const Point2& a, const Point2& b, const Point2& c) {
  if (orient2d(a, b, c) == Sign::Zero) return std::nullopt;

  TriMetrics m;
  const double la = norm(c - b);  // edge opposite a
  const double lb = norm(a - c);  // edge opposite b
  const double lc = norm(b - a);  // edge opposite c

  m.area = tri_area(a, b, c);
  m.longest_edge = std::fmax(la, std::fmax(lb, lc));
  const double s = 0.5 * (la + lb + lc);
  m.inradius = m.area / s;
  m.circumradius = la * lb * lc / (4.0 * m.area);
  m.quality = std::fmin(2.0 * m.inradius / m.circumradius, 1.0);

  const auto corner_angle = [](const Point2& at, const Point2& u, const Point2& v) {
    const Point2 e1 = u - at;
    const Point2 e2 = v - at;
    return std::atan2(std::fabs(cross(e1, e2)), dot(e1, e2));
  };
  m.min_angle = std::fmin(corner_angle(a, b, c),
                          std::fmin(corner_angle(b, c, a), corner_angle(c, a, b)));
  return m;
}

TriMetrics tri_metrics(const Point2& a, const Point2& b, const Point2& c) {
  auto m = try_tri_metrics(a, b, c);
  if (!m) throw GeometryError("tri_metrics: degenerate (collinear) triangle");
  return *m;
}

double polygon_area(std::span<const Point2> loop) {
  if (loop.size() < 3) throw GeometryError("polygon_area: loop needs at least 3 vertices");
  double twice = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point2& p = loop[i];
    const Point2& q = loop[(i + 1) % loop.size()];
    twice += cross(p, q);
  }
  return 0.5 * twice;
}

namespace {

// x is known to be collinear with segment [a, b]; true when x lies in the
// closed segment. Compares along the dominant axis, exactly.
bool on_collinear_segment(const Point2& a, const Point2& b, const Point2& x) {
  if (std::fabs(b.x - a.x) >= std::fabs(b.y - a.y)) {
    return std::fmin(a.x, b.x) <= x.x && x.x <= std::fmax(a.x, b.x);
  }
  return std::fmin(a.y, b.y) <= x.y && x.y <= std::fmax(a.y, b.y);
}

// Closed segments share a point of positive collinear overlap beyond v?
bool collinear_overlap_beyond(const Point2& p1, const Point2& p2, const Point2& q1,
                              const Point2& q2, const Point2& v) {
  // All four points collinear. Overlap interval is nonempty (contains v);
  // it degenerates to {v} exactly when the segments point away from each
  // other at v. Otherwise there is a shared point distinct from v.
  const Point2& p_other = (p1 == v) ? p2 : p1;
  const Point2& q_other = (q1 == v) ? q2 : q1;
  // Directions from v along each segment: same direction <=> positive
  // overlap. Compared by componentwise sign, which is exact.
  const Point2 dp = p_other - v;
  const Point2 dq = q_other - v;
  const auto sgn3 = [](double t) { return (t > 0.0) - (t < 0.0); };
  return sgn3(dp.x) == sgn3(dq.x) && sgn3(dp.y) == sgn3(dq.y);
}

}  // namespace

PointLocation point_in_polygon(std::span<const Point2> loop, const Point2& p) {
  if (loop.size() < 3) throw GeometryError("point_in_polygon: loop needs at least 3 vertices");
  bool inside = false;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point2& a = loop[i];
    const Point2& b = loop[(i + 1) % loop.size()];
    if (p == a || p == b) return PointLocation::Boundary;
    const Sign side = orient2d(a, b, p);
    if (side == Sign::Zero && collinear_point_in_open_segment(a, b, p)) {
      return PointLocation::Boundary;
    }
    // Half-open crossing rule for a ray towards +x: an upward edge counts
    // when p is strictly left of it, a downward edge when strictly right.
    if (a.y <= p.y) {
      if (b.y > p.y && side == Sign::Positive) inside = !inside;
    } else {
      if (b.y <= p.y && side == Sign::Negative) inside = !inside;
    }
  }
  return inside ? PointLocation::Inside : PointLocation::Outside;
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  if (p1 == p2 || q1 == q2) throw GeometryError("segments_intersect: zero-length segment");

  const bool s11 = (p1 == q1);
  const bool s12 = (p1 == q2);
  const bool s21 = (p2 == q1);
  const bool s22 = (p2 == q2);
  const int shared = int(s11) + int(s12) + int(s21) + int(s22);

  if (shared >= 2) return true;  // same segment (possibly reversed): full overlap

  if (shared == 1) {
    // Segments meet at one declared endpoint v. Two distinct lines through v
    // meet nowhere else, so an additional contact requires collinearity.
    const Point2& v = s11 || s12 ? p1 : p2;
    if (orient2d(p1, p2, q1) != Sign::Zero || orient2d(p1, p2, q2) != Sign::Zero) return false;
    return collinear_overlap_beyond(p1, p2, q1, q2, v);
  }

  const Sign d1 = orient2d(q1, q2, p1);
  const Sign d2 = orient2d(q1, q2, p2);
  const Sign d3 = orient2d(p1, p2, q1);
  const Sign d4 = orient2d(p1, p2, q2);

  const auto opposite = [](Sign u, Sign v) {
    return (u == Sign::Positive && v == Sign::Negative) ||
           (u == Sign::Negative && v == Sign::Positive);
  };
  if (opposite(d1, d2) && opposite(d3, d4)) return true;  // proper crossing

  // Endpoint-on-segment contacts (no endpoints coincide here).
  if (d1 == Sign::Zero && on_collinear_segment(q1, q2, p1)) return true;
  if (d2 == Sign::Zero && on_collinear_segment(q1, q2, p2)) return true;
  if (d3 == Sign::Zero && on_collinear_segment(p1, p2, q1)) return true;
  if (d4 == Sign::Zero && on_collinear_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace trigen
