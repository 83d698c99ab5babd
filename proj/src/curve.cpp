#include "isq/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isq/numerics.hpp"

namespace isq {

namespace {

constexpr double kRegularityRel = 1e-8;  // |v| >= 1e-8 * (L / 2pi) on the grid

double mean_speed(const PlaneCurve& c) { return c.total_length() / kTwoPi; }

}  // namespace

Vec2 PlaneCurve::acceleration(double s) const {
  const double h = 1e-5;
  return (velocity(s + h) - velocity(s - h)) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// FourierCurve

FourierCurve::FourierCurve(std::vector<Vec2> cos_coef, std::vector<Vec2> sin_coef)
    : cos_coef_(std::move(cos_coef)), sin_coef_(std::move(sin_coef)) {
  if (cos_coef_.empty()) throw FormatError("fourier curve needs at least the constant term");
  if (sin_coef_.size() != cos_coef_.size())
    throw FormatError("fourier curve: cosine/sine coefficient lists differ in length");
  if (sin_coef_[0].x != 0.0 || sin_coef_[0].y != 0.0)
    throw FormatError("fourier curve: sin[0] must be zero");

  const int panels = std::max(512, 8 * max_harmonic());
  const double h = kTwoPi / panels;
  double min_speed = std::numeric_limits<double>::infinity();
  double len = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double s0 = i * h;
    min_speed = std::min(min_speed, speed(s0));
    len += integrate_gl8([this](double s) { return speed(s); }, s0, s0 + h);
  }
  length_ = len;
  if (!(length_ > 0.0) || min_speed < kRegularityRel * mean_speed(*this)) {
    throw NumericalError("fourier curve is not regular at the sample resolution");
  }
}

Vec2 FourierCurve::position(double s) const {
  Vec2 p = cos_coef_[0];
  for (std::size_t k = 1; k < cos_coef_.size(); ++k) {
    const double c = std::cos(k * s), n = std::sin(k * s);
    p += c * cos_coef_[k] + n * sin_coef_[k];
  }
  return p;
}

Vec2 FourierCurve::velocity(double s) const {
  Vec2 v{0.0, 0.0};
  for (std::size_t k = 1; k < cos_coef_.size(); ++k) {
    const double c = std::cos(k * s), n = std::sin(k * s);
    v += static_cast<double>(k) * (c * sin_coef_[k] - n * cos_coef_[k]);
  }
  return v;
}

Vec2 FourierCurve::acceleration(double s) const {
  Vec2 a{0.0, 0.0};
  for (std::size_t k = 1; k < cos_coef_.size(); ++k) {
    const double k2 = static_cast<double>(k) * k;
    const double c = std::cos(k * s), n = std::sin(k * s);
    a -= k2 * (c * cos_coef_[k] + n * sin_coef_[k]);
  }
  return a;
}

Vec2 FourierCurve::jerk(double s) const {
  Vec2 j{0.0, 0.0};
  for (std::size_t k = 1; k < cos_coef_.size(); ++k) {
    const double k3 = static_cast<double>(k) * k * k;
    const double c = std::cos(k * s), n = std::sin(k * s);
    j += k3 * (n * cos_coef_[k] - c * sin_coef_[k]);
  }
  return j;
}

Vec2 FourierCurve::unit_normal(double s) const {
  const Vec2 v = velocity(s);
  return rot90ccw(v) / norm(v);
}

Vec2 FourierCurve::unit_normal_derivative(double s) const {
  const Vec2 v = velocity(s);
  const Vec2 a = acceleration(s);
  const double sp = norm(v);
  // d/ds [ J v / |v| ] = J a / |v| - J v (v.a) / |v|^3
  return rot90ccw(a) / sp - rot90ccw(v) * (dot(v, a) / (sp * sp * sp));
}

// ---------------------------------------------------------------------------
// PolylineCurve

PolylineCurve::PolylineCurve(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw FormatError("polyline needs at least 3 vertices");
  cumlen_.resize(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dist(vertices_[i], vertices_[(i + 1) % n]);
    cumlen_[i + 1] = cumlen_[i] + d;
  }
  length_ = cumlen_[n];
  const double min_edge_tol = 1e-12 * length_;
  for (std::size_t i = 0; i < n; ++i) {
    if (cumlen_[i + 1] - cumlen_[i] <= min_edge_tol)
      throw FormatError("polyline has coincident consecutive vertices");
  }
}

namespace {

std::size_t edge_index(const std::vector<double>& cumlen, std::size_t n_vertices, double ell) {
  const auto it = std::upper_bound(cumlen.begin(), cumlen.end(), ell);
  std::size_t i = (it == cumlen.begin()) ? 0 : static_cast<std::size_t>(it - cumlen.begin()) - 1;
  return std::min(i, n_vertices - 1);
}

}  // namespace

Vec2 PolylineCurve::position(double u) const {
  const double ell = wrap_angle(u) / kTwoPi * length_;
  const std::size_t i = edge_index(cumlen_, vertices_.size(), ell);
  const double t = (ell - cumlen_[i]) / (cumlen_[i + 1] - cumlen_[i]);
  const Vec2 a = vertices_[i];
  const Vec2 b = vertices_[(i + 1) % vertices_.size()];
  return a + t * (b - a);
}

Vec2 PolylineCurve::velocity(double u) const {
  const double ell = wrap_angle(u) / kTwoPi * length_;
  const std::size_t i = edge_index(cumlen_, vertices_.size(), ell);
  const Vec2 a = vertices_[i];
  const Vec2 b = vertices_[(i + 1) % vertices_.size()];
  // d(position)/du has constant magnitude L / 2*pi along every edge.
  return (b - a) / (cumlen_[i + 1] - cumlen_[i]) * (length_ / kTwoPi);
}

double PolylineCurve::vertex_param(std::size_t i) const {
  return cumlen_[i % vertices_.size()] / length_ * kTwoPi;
}

PolylineCurve::Projection PolylineCurve::project(Vec2 p) const {
  const std::size_t n = vertices_.size();
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_u = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    const Vec2 q = closest_point_on_segment(p, a, b);
    const double d2 = norm2(p - q);
    if (d2 < best_d2) {
      best_d2 = d2;
      const double edge_len = cumlen_[i + 1] - cumlen_[i];
      best_u = (cumlen_[i] + std::min(dist(a, q), edge_len)) / length_ * kTwoPi;
    }
  }
  return {wrap_angle(best_u), std::sqrt(best_d2)};
}

// ---------------------------------------------------------------------------
// Analysis

double CurveAnalysis::arclength_at(double u) const {
  u = wrap_angle(u);
  const double h = kTwoPi / sample_count;
  const int k = std::min(static_cast<int>(u / h), sample_count - 1);
  const double s0 = k * h;
  double tail = 0.0;
  if (u > s0 && curve != nullptr) {
    tail = integrate_gl8([this](double s) { return curve->speed(s); }, s0, u);
  }
  return arclength_table[k] + tail;
}

double CurveAnalysis::param_at_arclength(double ell) const {
  ell = std::clamp(ell, 0.0, total_length);
  const auto it = std::upper_bound(arclength_table.begin(), arclength_table.end(), ell);
  int k = static_cast<int>(it - arclength_table.begin()) - 1;
  k = std::clamp(k, 0, sample_count - 1);
  const double h = kTwoPi / sample_count;
  double s = k * h;
  // Newton on arclength_at(s) = ell; the speed is the exact derivative.
  for (int iter = 0; iter < 40; ++iter) {
    const double f = arclength_at(s) - ell;
    const double sp = curve->speed(s);
    const double step = f / sp;
    s -= step;
    s = std::clamp(s, k * h - h, k * h + 2.0 * h);
    if (std::abs(step) < 1e-14 * kTwoPi) break;
  }
  return wrap_angle(s);
}

CurveAnalysis analyze(const FourierCurve& curve, int sample_count) {
  if (sample_count < 64) throw FormatError("analyze: sample_count must be >= 64");
  CurveAnalysis out;
  out.curve = &curve;
  out.sample_count = sample_count;
  out.arclength_table.resize(sample_count + 1, 0.0);
  const double h = kTwoPi / sample_count;
  for (int i = 0; i < sample_count; ++i) {
    const double piece =
        integrate_gl8([&curve](double s) { return curve.speed(s); }, i * h, (i + 1) * h);
    out.arclength_table[i + 1] = out.arclength_table[i] + piece;
  }
  out.total_length = out.arclength_table[sample_count];
  out.max_unsigned_curvature = max_unsigned_curvature(curve, sample_count);
  // A closed curve's maximum curvature is at least its mean 2*pi/L.
  if (out.max_unsigned_curvature < kTwoPi / out.total_length * (1.0 - 1e-9)) {
    throw NumericalError("curve analysis failed the mean-curvature sanity bound");
  }
  return out;
}

double unsigned_curvature(const FourierCurve& curve, double s) {
  const Vec2 v = curve.velocity(s);
  const Vec2 a = curve.acceleration(s);
  const double sp = norm(v);
  if (sp < kRegularityRel * mean_speed(curve)) {
    throw NumericalError("degenerate speed: curvature undefined at the requested parameter");
  }
  return std::abs(cross(v, a)) / (sp * sp * sp);
}

double max_unsigned_curvature(const FourierCurve& curve, int sample_count) {
  if (sample_count < 64) throw FormatError("max_unsigned_curvature: sample count must be >= 64");
  const double h = kTwoPi / sample_count;
  std::vector<double> kappa(sample_count);
  for (int i = 0; i < sample_count; ++i) kappa[i] = unsigned_curvature(curve, i * h);

  // Refine every sampled local maximum; the global winner may sit between
  // samples of a slightly lower bin.
  double best = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    const double prev = kappa[(i + sample_count - 1) % sample_count];
    const double next = kappa[(i + 1) % sample_count];
    if (kappa[i] < prev || kappa[i] < next) continue;
    const auto res = minimize_golden(
        [&curve](double s) { return -unsigned_curvature(curve, s); }, i * h - h, i * h + h,
        1e-10);
    best = std::max(best, -res.value);
  }
  return best;
}

double arc_length(const FourierCurve& curve, double s0, double s1) {
  const double gap = forward_gap(s0, s1);
  if (gap == 0.0) return 0.0;
  const double tol = 1e-10 * curve.total_length();
  return integrate_adaptive([&curve](double s) { return curve.speed(s); }, s0, s0 + gap, tol);
}

namespace {

bool polygon_is_simple(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a1 = pts[i];
    const Vec2 a2 = pts[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the seam
      if (segments_intersect(a1, a2, pts[j], pts[(j + 1) % n])) return false;
    }
  }
  return true;
}

}  // namespace

bool is_simple(const FourierCurve& curve, int sample_count) {
  if (sample_count < 32) throw FormatError("is_simple: sample count must be >= 32");
  std::vector<Vec2> pts(sample_count);
  for (int i = 0; i < sample_count; ++i) pts[i] = curve.position(kTwoPi * i / sample_count);
  return polygon_is_simple(pts);
}

bool is_simple(const PolylineCurve& curve) { return polygon_is_simple(curve.vertices()); }

// ---------------------------------------------------------------------------
// Projection

namespace {

struct Seed {
  double s;
  double d2;
};

ProjectionResult finish_projection(std::vector<Seed> refined, double char_len) {
  std::sort(refined.begin(), refined.end(), [](const Seed& a, const Seed& b) { return a.d2 < b.d2; });
  ProjectionResult out;
  out.s = wrap_angle(refined.front().s);
  out.distance = std::sqrt(refined.front().d2);
  const double tol = 1e-8 * std::max(char_len, out.distance);
  for (std::size_t i = 1; i < refined.size(); ++i) {
    const double sep = std::abs(wrap_signed(refined[i].s - refined.front().s));
    if (sep > 1e-4 && std::sqrt(refined[i].d2) <= out.distance + tol) {
      out.ambiguous = true;
      break;
    }
  }
  return out;
}

std::vector<Seed> local_minima_seeds(const PlaneCurve& curve, Vec2 p, int n) {
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) d2[i] = norm2(curve.position(kTwoPi * i / n) - p);
  std::vector<Seed> seeds;
  for (int i = 0; i < n; ++i) {
    const double prev = d2[(i + n - 1) % n];
    const double next = d2[(i + 1) % n];
    if (d2[i] <= prev && d2[i] <= next) seeds.push_back({kTwoPi * i / n, d2[i]});
  }
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.d2 < b.d2; });
  if (seeds.size() > 8) seeds.resize(8);
  return seeds;
}

}  // namespace

ProjectionResult nearest_point_projection(const FourierCurve& curve, Vec2 p, int seed_count) {
  auto seeds = local_minima_seeds(curve, p, seed_count);
  const double h = kTwoPi / seed_count;
  std::vector<Seed> refined;
  for (const Seed& seed : seeds) {
    double s = seed.s;
    // Newton on g(s) = (gamma(s) - p) . gamma'(s), kept inside the bracket.
    for (int iter = 0; iter < 60; ++iter) {
      const Vec2 d = curve.position(s) - p;
      const Vec2 v = curve.velocity(s);
      const double g = dot(d, v);
      const double gp = norm2(v) + dot(d, curve.acceleration(s));
      if (gp == 0.0) break;
      double step = g / gp;
      step = std::clamp(step, -h, h);
      s -= step;
      if (std::abs(step) < 1e-15 * kTwoPi) break;
    }
    s = std::clamp(s, seed.s - h, seed.s + h);
    refined.push_back({s, norm2(curve.position(s) - p)});
  }
  return finish_projection(std::move(refined), mean_speed(curve));
}

ProjectionResult nearest_point_projection(const PlaneCurve& curve, Vec2 p, int seed_count) {
  auto seeds = local_minima_seeds(curve, p, seed_count);
  const double h = kTwoPi / seed_count;
  std::vector<Seed> refined;
  for (const Seed& seed : seeds) {
    const auto res = minimize_golden(
        [&curve, p](double s) { return norm2(curve.position(s) - p); }, seed.s - h, seed.s + h,
        1e-12);
    refined.push_back({res.x, res.value});
  }
  return finish_projection(std::move(refined), mean_speed(curve));
}

// ---------------------------------------------------------------------------
// Winding

std::vector<double> lift_circle_samples(const std::vector<double>& samples) {
  std::vector<double> lift(samples.size());
  if (samples.empty()) return lift;
  lift[0] = samples[0];
  for (std::size_t i = 1; i < samples.size(); ++i) {
    lift[i] = lift[i - 1] + wrap_signed(samples[i] - samples[i - 1]);
  }
  return lift;
}

int winding_degree(const std::vector<double>& samples) {
  if (samples.size() < 3) throw FormatError("winding_degree: need at least 3 samples");
  constexpr double kGapLimit = kPi - 1e-6;
  double total = 0.0;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = wrap_signed(samples[(i + 1) % n] - samples[i]);
    if (std::abs(gap) >= kGapLimit) {
      throw NumericalError("winding_degree: successive samples too sparse to lift unambiguously");
    }
    total += gap;
  }
  return static_cast<int>(std::llround(total / kTwoPi));
}

// ---------------------------------------------------------------------------
// Constructors and transforms

FourierCurve make_ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw FormatError("make_ellipse: axes must be positive");
  std::vector<Vec2> cosc = {{0.0, 0.0}, {a, 0.0}};
  std::vector<Vec2> sinc = {{0.0, 0.0}, {0.0, b}};
  return FourierCurve(std::move(cosc), std::move(sinc));
}

FourierCurve make_circle(double r, Vec2 c) {
  std::vector<Vec2> cosc = {c, {r, 0.0}};
  std::vector<Vec2> sinc = {{0.0, 0.0}, {0.0, r}};
  return FourierCurve(std::move(cosc), std::move(sinc));
}

FourierCurve perturb_fourier(const FourierCurve& curve, double amplitude, int max_harmonic,
                             std::uint64_t seed, bool require_simple) {
  if (amplitude < 0.0) throw FormatError("perturb_fourier: amplitude must be >= 0");
  auto cosc = curve.cos_coefficients();
  auto sinc = curve.sin_coefficients();
  if (static_cast<int>(cosc.size()) <= max_harmonic) {
    cosc.resize(max_harmonic + 1, {0.0, 0.0});
    sinc.resize(max_harmonic + 1, {0.0, 0.0});
  }
  Rng rng(seed);
  for (int k = 2; k <= max_harmonic; ++k) {
    cosc[k] += {rng.uniform(-amplitude, amplitude), rng.uniform(-amplitude, amplitude)};
    sinc[k] += {rng.uniform(-amplitude, amplitude), rng.uniform(-amplitude, amplitude)};
  }
  FourierCurve out(std::move(cosc), std::move(sinc));  // throws when irregular
  if (require_simple && !is_simple(out)) {
    throw NumericalError("perturb_fourier: perturbed curve failed the simplicity check");
  }
  return out;
}

FourierCurve transformed(const FourierCurve& curve, double angle, Vec2 translation) {
  auto cosc = curve.cos_coefficients();
  auto sinc = curve.sin_coefficients();
  for (auto& c : cosc) c = rotate(c, angle);
  for (auto& c : sinc) c = rotate(c, angle);
  cosc[0] += translation;
  return FourierCurve(std::move(cosc), std::move(sinc));
}

PolylineCurve transformed(const PolylineCurve& curve, double angle, Vec2 translation) {
  auto verts = curve.vertices();
  for (auto& v : verts) v = rotate(v, angle) + translation;
  return PolylineCurve(std::move(verts));
}

double estimate_reach(const FourierCurve& curve, int sample_count) {
  const double kappa = max_unsigned_curvature(curve, std::max(sample_count, 64));
  std::vector<Vec2> pts(sample_count);
  for (int i = 0; i < sample_count; ++i) pts[i] = curve.position(kTwoPi * i / sample_count);
  double min_pair = std::numeric_limits<double>::infinity();
  const int min_sep = sample_count / 16;  // parameter distance >= pi/8
  for (int i = 0; i < sample_count; ++i) {
    for (int j = i + min_sep; j < sample_count; ++j) {
      if (i + sample_count - j < min_sep) continue;  // wrapped separation too small
      min_pair = std::min(min_pair, norm2(pts[i] - pts[j]));
    }
  }
  return std::min(1.0 / kappa, 0.5 * std::sqrt(min_pair));
}

// ---------------------------------------------------------------------------
// SampledCurve

SampledCurve::SampledCurve(const PlaneCurve& curve, int sample_count) {
  points_.resize(sample_count);
  params_.resize(sample_count);
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (int i = 0; i < sample_count; ++i) {
    params_[i] = kTwoPi * i / sample_count;
    points_[i] = curve.position(params_[i]);
    lo.x = std::min(lo.x, points_[i].x);
    lo.y = std::min(lo.y, points_[i].y);
    hi.x = std::max(hi.x, points_[i].x);
    hi.y = std::max(hi.y, points_[i].y);
  }
  lo_ = lo;
  const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
  const int target = std::max(8, static_cast<int>(std::sqrt(sample_count)) * 2);
  cell_ = span / target;
  nx_ = std::max(1, static_cast<int>((hi.x - lo.x) / cell_) + 1);
  ny_ = std::max(1, static_cast<int>((hi.y - lo.y) / cell_) + 1);
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (int i = 0; i < sample_count; ++i) {
    const Vec2 a = points_[i];
    const Vec2 b = points_[(i + 1) % sample_count];
    const int x0 = std::clamp(static_cast<int>((std::min(a.x, b.x) - lo_.x) / cell_), 0, nx_ - 1);
    const int x1 = std::clamp(static_cast<int>((std::max(a.x, b.x) - lo_.x) / cell_), 0, nx_ - 1);
    const int y0 = std::clamp(static_cast<int>((std::min(a.y, b.y) - lo_.y) / cell_), 0, ny_ - 1);
    const int y1 = std::clamp(static_cast<int>((std::max(a.y, b.y) - lo_.y) / cell_), 0, ny_ - 1);
    for (int cy = y0; cy <= y1; ++cy) {
      for (int cx = x0; cx <= x1; ++cx) {
        cells_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(i);
      }
    }
  }
}

SampledCurve::Hit SampledCurve::nearest(Vec2 p, double d2_limit) const {
  const int n = static_cast<int>(points_.size());
  const int px = std::clamp(static_cast<int>((p.x - lo_.x) / cell_), 0, nx_ - 1);
  const int py = std::clamp(static_cast<int>((p.y - lo_.y) / cell_), 0, ny_ - 1);
  Hit best{d2_limit, 0.0};
  const int max_ring = std::max(nx_, ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    // Stop as soon as the ring cannot contain anything below the best (or the
    // caller's cap).
    if (best.d2 < std::numeric_limits<double>::infinity()) {
      const double ring_min = (ring - 1) * cell_;
      if (ring_min > 0.0 && ring_min * ring_min > best.d2) break;
    }
    bool any_cell = false;
    for (int cy = py - ring; cy <= py + ring; ++cy) {
      if (cy < 0 || cy >= ny_) continue;
      for (int cx = px - ring; cx <= px + ring; ++cx) {
        if (cx < 0 || cx >= nx_) continue;
        if (ring > 0 && std::abs(cx - px) != ring && std::abs(cy - py) != ring) continue;
        any_cell = true;
        for (int i : cells_[static_cast<std::size_t>(cy) * nx_ + cx]) {
          const Vec2 a = points_[i];
          const Vec2 b = points_[(i + 1) % n];
          const Vec2 q = closest_point_on_segment(p, a, b);
          const double d2 = norm2(p - q);
          if (d2 < best.d2) {
            const double seg = dist(a, b);
            const double t = (seg > 0.0) ? dist(a, q) / seg : 0.0;
            const double u1 = (i + 1 < n) ? params_[i + 1] : kTwoPi;
            best = {d2, params_[i] + t * (u1 - params_[i])};
          }
        }
      }
    }
    if (!any_cell && ring > std::max(nx_, ny_)) break;
  }
  return best;
}

double SampledCurve::distance(Vec2 p) const {
  return std::sqrt(nearest(p, std::numeric_limits<double>::infinity()).d2);
}

double SampledCurve::distance(Vec2 p, double cap) const {
  return std::sqrt(nearest(p, cap * cap).d2);
}

double SampledCurve::nearest_param(Vec2 p) const {
  return wrap_angle(nearest(p, std::numeric_limits<double>::infinity()).u);
}

}  // namespace isq
