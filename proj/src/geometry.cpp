#include "isq/geometry.hpp"

#include <algorithm>

namespace isq {

int orient(Vec2 a, Vec2 b, Vec2 c) {
  const double detl = (b.x - a.x) * (c.y - a.y);
  const double detr = (b.y - a.y) * (c.x - a.x);
  const double det = detl - detr;
  // Error bound for the double evaluation (classic static filter).
  const double bound = 3.3306690738754716e-16 * (std::abs(detl) + std::abs(detr));
  if (det > bound) return 1;
  if (det < -bound) return -1;
  const long double detx = (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
                           (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
  if (detx > 0) return 1;
  if (detx < 0) return -1;
  return 0;
}

namespace {

bool on_segment_collinear(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2) {
  if (std::max(a1.x, a2.x) < std::min(b1.x, b2.x)) return false;
  if (std::max(b1.x, b2.x) < std::min(a1.x, a2.x)) return false;
  if (std::max(a1.y, a2.y) < std::min(b1.y, b2.y)) return false;
  if (std::max(b1.y, b2.y) < std::min(a1.y, a2.y)) return false;

  const int o1 = orient(a1, a2, b1);
  const int o2 = orient(a1, a2, b2);
  const int o3 = orient(b1, b2, a1);
  const int o4 = orient(b1, b2, a2);

  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_collinear(a1, a2, b1)) return true;
  if (o2 == 0 && on_segment_collinear(a1, a2, b2)) return true;
  if (o3 == 0 && on_segment_collinear(b1, b2, a1)) return true;
  if (o4 == 0 && on_segment_collinear(b1, b2, a2)) return true;
  return false;
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return a;
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return a + t * ab;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  return dist(p, closest_point_on_segment(p, a, b));
}

}  // namespace isq
