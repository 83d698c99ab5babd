#pragma once

// Independent numerics used only by the tests. Everything here works from
// PlaneCurve::position alone (no library derivatives, quadrature, or arc
// tables), so a bug in the library cannot cancel against the oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "isq/curve.hpp"
#include "isq/geometry.hpp"

namespace oracle {

inline isq::Vec2 fd_velocity(const isq::PlaneCurve& c, double s, double h = 1e-5) {
  const isq::Vec2 p1 = c.position(s - 2.0 * h), p2 = c.position(s - h);
  const isq::Vec2 p3 = c.position(s + h), p4 = c.position(s + 2.0 * h);
  return (1.0 / (12.0 * h)) * (p1 - 8.0 * p2 + 8.0 * p3 - p4);
}

inline isq::Vec2 fd_acceleration(const isq::PlaneCurve& c, double s, double h = 1e-4) {
  const isq::Vec2 p1 = c.position(s - 2.0 * h), p2 = c.position(s - h);
  const isq::Vec2 p0 = c.position(s);
  const isq::Vec2 p3 = c.position(s + h), p4 = c.position(s + 2.0 * h);
  return (1.0 / (12.0 * h * h)) * (-p1 + 16.0 * p2 - 30.0 * p0 + 16.0 * p3 - p4);
}

inline double fd_curvature(const isq::PlaneCurve& c, double s) {
  const isq::Vec2 v = fd_velocity(c, s);
  const isq::Vec2 a = fd_acceleration(c, s);
  const double sp = isq::norm(v);
  return std::abs(isq::cross(v, a)) / (sp * sp * sp);
}

/// Polygonal (chordal) length of the whole curve; converges O(n^-2) from
/// below, no derivatives involved.
inline double chordal_length(const isq::PlaneCurve& c, int n = 1 << 16) {
  double sum = 0.0;
  isq::Vec2 prev = c.position(0.0);
  for (int i = 1; i <= n; ++i) {
    const isq::Vec2 q = c.position(isq::kTwoPi * i / n);
    sum += isq::dist(prev, q);
    prev = q;
  }
  return sum;
}

/// Chordal length of the forward arc s0 -> s1.
inline double chordal_arc(const isq::PlaneCurve& c, double s0, double s1, int n = 4096) {
  double gap = s1 - s0;
  gap -= isq::kTwoPi * std::floor(gap / isq::kTwoPi);
  double sum = 0.0;
  isq::Vec2 prev = c.position(s0);
  for (int i = 1; i <= n; ++i) {
    const isq::Vec2 q = c.position(s0 + gap * i / n);
    sum += isq::dist(prev, q);
    prev = q;
  }
  return sum;
}

/// Identity size from first principles: four chordal arc lengths between
/// consecutive params, total minus the largest.
inline double identity_size(const isq::PlaneCurve& c, const std::array<double, 4>& params) {
  double arcs[4], total = 0.0;
  for (int i = 0; i < 4; ++i) {
    arcs[i] = chordal_arc(c, params[i], params[(i + 1) % 4]);
    total += arcs[i];
  }
  return total - *std::max_element(arcs, arcs + 4);
}

/// Plain geometric test: four points form a positively oriented nondegenerate
/// square (equal sides, right angles, CCW).
inline bool is_ccw_square(const std::array<isq::Vec2, 4>& v, double tol) {
  double side = -1.0;
  for (int i = 0; i < 4; ++i) {
    const isq::Vec2 e = v[(i + 1) % 4] - v[i];
    const isq::Vec2 f = v[(i + 2) % 4] - v[(i + 1) % 4];
    const double len = isq::norm(e);
    if (side < 0.0) side = len;
    if (std::abs(len - side) > tol) return false;
    if (std::abs(isq::dot(e, f)) > tol * std::max(side, 1.0)) return false;
    if (isq::cross(e, f) <= 0.0) return false;
  }
  return side > tol;
}

}  // namespace oracle
