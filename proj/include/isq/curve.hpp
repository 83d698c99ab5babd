#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isq/geometry.hpp"

namespace isq {

/// Closed plane curve parametrized over [0, 2*pi). Implementations must be
/// immutable after construction; all member functions are safe to call
/// concurrently.
class PlaneCurve {
 public:
  virtual ~PlaneCurve() = default;

  virtual Vec2 position(double s) const = 0;
  /// First derivative with respect to the parameter.
  virtual Vec2 velocity(double s) const = 0;
  /// Second derivative; default is a central difference of velocity.
  virtual Vec2 acceleration(double s) const;
  virtual double total_length() const = 0;

  double speed(double s) const { return norm(velocity(s)); }
};

/// Smooth closed curve as a truncated trigonometric series:
///   s |-> a0 + sum_k (a_k cos(k s) + b_k sin(k s)),  k = 1..K.
/// Closedness and smoothness are automatic; derivatives and curvature are
/// exact. Construction verifies regularity on a dense sample grid.
class FourierCurve final : public PlaneCurve {
 public:
  /// cos_coef[k], sin_coef[k] hold a_k and b_k; sin_coef[0] must be zero.
  FourierCurve(std::vector<Vec2> cos_coef, std::vector<Vec2> sin_coef);

  Vec2 position(double s) const override;
  Vec2 velocity(double s) const override;
  Vec2 acceleration(double s) const override;
  Vec2 jerk(double s) const;
  double total_length() const override { return length_; }

  int max_harmonic() const { return static_cast<int>(cos_coef_.size()) - 1; }
  const std::vector<Vec2>& cos_coefficients() const { return cos_coef_; }
  const std::vector<Vec2>& sin_coefficients() const { return sin_coef_; }

  /// Unit normal (left of velocity) and its parameter derivative.
  Vec2 unit_normal(double s) const;
  Vec2 unit_normal_derivative(double s) const;

 private:
  std::vector<Vec2> cos_coef_;
  std::vector<Vec2> sin_coef_;
  double length_ = 0.0;
};

/// Closed polygonal curve. Vertices are implicitly closed (last connects to
/// first) and parametrized by arc length scaled to [0, 2*pi). velocity() is
/// the almost-everywhere derivative (constant along each edge, arbitrary at
/// corners); derivative-based refinement should not be pointed at polylines.
class PolylineCurve final : public PlaneCurve {
 public:
  explicit PolylineCurve(std::vector<Vec2> vertices);

  Vec2 position(double u) const override;
  Vec2 velocity(double u) const override;
  double total_length() const override { return length_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  /// Parameter of vertex i.
  double vertex_param(std::size_t i) const;

  /// Exact nearest point on the polygon; returns (parameter, distance).
  struct Projection {
    double u = 0.0;
    double distance = 0.0;
  };
  Projection project(Vec2 p) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<double> cumlen_;  // cumlen_[i] = length of edges 0..i-1
  double length_ = 0.0;
};

/// Summary measurements of a smooth curve.
struct CurveAnalysis {
  double max_unsigned_curvature = 0.0;
  double total_length = 0.0;
  int sample_count = 0;
  std::vector<double> arclength_table;  // cumulative length at uniform params, size sample_count+1

  /// Cumulative arc length from parameter 0 to u (u taken mod 2*pi),
  /// interpolated from the table with a local quadrature correction.
  double arclength_at(double u) const;
  /// Inverse lookup: parameter at cumulative arc length ell in [0, L].
  double param_at_arclength(double ell) const;

  const FourierCurve* curve = nullptr;
};

/// Samples curvature/length bookkeeping; sample_count >= 64.
CurveAnalysis analyze(const FourierCurve& curve, int sample_count = 512);

/// Unsigned curvature |x'y'' - y'x''| / |v|^3 at parameter s.
/// Throws NumericalError when the speed is degenerate at s.
double unsigned_curvature(const FourierCurve& curve, double s);

/// Maximum unsigned curvature over n uniform samples, refined by local
/// maximization around the best sample. n >= 64.
double max_unsigned_curvature(const FourierCurve& curve, int sample_count = 512);

/// Arc length of the forward arc from s0 to s1 (both mod 2*pi); s0 == s1
/// yields the empty arc, 0. Adaptive quadrature with absolute tolerance
/// 1e-10 * total_length.
double arc_length(const FourierCurve& curve, double s0, double s1);

/// True when no two non-adjacent segments of the sampled polygon intersect.
/// sample_count >= 32.
bool is_simple(const FourierCurve& curve, int sample_count = 512);
/// Polyline variant; uses the polygon's own edges.
bool is_simple(const PolylineCurve& curve);

struct ProjectionResult {
  double s = 0.0;
  double distance = 0.0;
  /// Set when a second local minimum matches the best within tolerance
  /// (medial-axis points); the ambiguity is reported, not resolved.
  bool ambiguous = false;
};

/// Nearest-point projection of p onto the curve: seeds on a uniform grid,
/// then 1-D Newton on (gamma(s) - p) . gamma'(s) = 0.
ProjectionResult nearest_point_projection(const FourierCurve& curve, Vec2 p,
                                          int seed_count = 256);

/// Generic projection for homotopy slices: sampling plus golden-section
/// refinement, no derivatives of the curve required.
ProjectionResult nearest_point_projection(const PlaneCurve& curve, Vec2 p,
                                          int seed_count = 256);

/// Degree of a circle map sampled on a uniform parameter grid. Successive
/// samples are lifted continuously with increments in (-pi, pi]; throws
/// NumericalError when a gap reaches pi - 1e-6 (sample more densely).
int winding_degree(const std::vector<double>& samples);

/// Continuous lift of circle-map samples; lift[0] = samples[0] and
/// lift[i+1] - lift[i] = wrap_signed(samples[i+1] - samples[i]).
std::vector<double> lift_circle_samples(const std::vector<double>& samples);

/// Ellipse (a cos s, b sin s) as a first-harmonic series.
FourierCurve make_ellipse(double a, double b);

/// Circle of radius r centered at c.
FourierCurve make_circle(double r, Vec2 c = {0.0, 0.0});

/// Adds uniform-random coefficients of magnitude <= amplitude to harmonics
/// 2..max_harmonic, deterministically from seed. The result is re-checked for
/// regularity and, when require_simple is set, simplicity; a failed check
/// throws NumericalError.
FourierCurve perturb_fourier(const FourierCurve& curve, double amplitude, int max_harmonic,
                             std::uint64_t seed, bool require_simple = true);

/// Rotation by angle about the origin followed by translation.
FourierCurve transformed(const FourierCurve& curve, double angle, Vec2 translation);
PolylineCurve transformed(const PolylineCurve& curve, double angle, Vec2 translation);

/// Numerical lower bound on the reach (embedded tubular radius): the minimum
/// of 1/max-curvature and half the closest approach between parameter-distant
/// sample pairs.
double estimate_reach(const FourierCurve& curve, int sample_count = 512);

/// Dense point sampling used by seed searches: approximates distance to the
/// curve by distance to the sampled closed polygon.
class SampledCurve {
 public:
  SampledCurve(const PlaneCurve& curve, int sample_count);

  double distance(Vec2 p) const;
  /// min(distance, cap): the ring walk stops expanding once nothing within
  /// cap can remain, so far queries cost O(1) instead of O(domain/cell).
  double distance(Vec2 p, double cap) const;
  /// Parameter of the closest sampled segment's interpolated point.
  double nearest_param(Vec2 p) const;
  int sample_count() const { return static_cast<int>(points_.size()); }

 private:
  struct Hit {
    double d2;
    double u;
  };
  Hit nearest(Vec2 p, double d2_limit) const;

  std::vector<Vec2> points_;
  std::vector<double> params_;
  // uniform spatial grid over segment bounding boxes
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  Vec2 lo_;
  std::vector<std::vector<int>> cells_;
};

}  // namespace isq
