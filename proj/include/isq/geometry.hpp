#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace isq {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// 2D point / vector in plane units.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double c) const { return {x * c, y * c}; }
  constexpr Vec2 operator/(double c) const { return {x / c, y / c}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  Vec2& operator*=(double c) {
    x *= c;
    y *= c;
    return *this;
  }
};

constexpr Vec2 operator*(double c, Vec2 v) { return {c * v.x, c * v.y}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// Counterclockwise quarter turn.
constexpr Vec2 rot90ccw(Vec2 v) { return {-v.y, v.x}; }
/// Clockwise quarter turn.
constexpr Vec2 rot90cw(Vec2 v) { return {v.y, -v.x}; }

inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double s) {
  s = std::fmod(s, kTwoPi);
  if (s < 0.0) s += kTwoPi;
  if (s >= kTwoPi) s = 0.0;
  return s;
}

/// Wraps a difference of angles into (-pi, pi].
inline double wrap_signed(double d) {
  d = std::fmod(d, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  if (d > kPi) d -= kTwoPi;
  return d;
}

/// Forward (counterclockwise) angular gap from s0 to s1, in [0, 2*pi).
inline double forward_gap(double s0, double s1) {
  double d = std::fmod(s1 - s0, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d;
}

/// Malformed input files or argument syntax.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical preconditions violated or iterations exhausted.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic uniform RNG. Draws doubles directly from mt19937_64 bits so
/// generated scenarios are byte-identical across platforms and library
/// versions (std::uniform_real_distribution makes no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// Sign of the signed area of triangle (a, b, c): +1 ccw, -1 cw, 0 collinear.
/// Filtered: double evaluation with a long double recheck near the decision
/// boundary.
int orient(Vec2 a, Vec2 b, Vec2 c);

/// True if closed segments [a1,a2] and [b1,b2] share at least one point.
bool segments_intersect(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2);

/// Distance from p to the closed segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Closest point to p on the closed segment [a, b].
Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);

}  // namespace isq
