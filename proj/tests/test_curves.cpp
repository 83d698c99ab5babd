#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "isq/curve.hpp"
#include "oracles.hpp"
#include "suites.hpp"

using namespace isq;

TEST_CASE("ellipse positions and derivatives are the analytic ones") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  for (double s : {0.0, 0.3, kPi / 2, 2.0, kPi, 4.7, kTwoPi - 0.1}) {
    CHECK(e.position(s).x == doctest::Approx(2.0 * std::cos(s)).epsilon(1e-14));
    CHECK(e.position(s).y == doctest::Approx(std::sin(s)).epsilon(1e-14));
    CHECK(e.velocity(s).x == doctest::Approx(-2.0 * std::sin(s)).epsilon(1e-14));
    CHECK(e.velocity(s).y == doctest::Approx(std::cos(s)).epsilon(1e-14));
    CHECK(e.acceleration(s).x == doctest::Approx(-2.0 * std::cos(s)).epsilon(1e-14));
  }
}

TEST_CASE("derivatives match finite differences on a perturbed curve") {
  const FourierCurve c = perturb_fourier(make_ellipse(1.7, 1.1), 0.03, 5, 8);
  for (int i = 0; i < 24; ++i) {
    const double s = kTwoPi * i / 24.0;
    const Vec2 v = c.velocity(s), vo = oracle::fd_velocity(c, s);
    const Vec2 a = c.acceleration(s), ao = oracle::fd_acceleration(c, s);
    CHECK(dist(v, vo) < 1e-8);
    CHECK(dist(a, ao) < 1e-6);
  }
}

TEST_CASE("curvature agrees with the finite-difference oracle across suites") {
  for (const FourierCurve& c : suites::small_suite()) {
    for (int i = 0; i < 16; ++i) {
      const double s = kTwoPi * (i + 0.37) / 16.0;
      CHECK(unsigned_curvature(c, s) ==
            doctest::Approx(oracle::fd_curvature(c, s)).epsilon(1e-5));
    }
  }
}

TEST_CASE("ellipse extremal curvature and perimeter") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  CHECK(max_unsigned_curvature(e) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(unsigned_curvature(e, kPi / 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e.total_length() == doctest::Approx(9.688448220547675).epsilon(1e-9));
  CHECK(e.total_length() == doctest::Approx(oracle::chordal_length(e)).epsilon(1e-7));
}

TEST_CASE("arc length: additivity, oracle match, inverse lookup") {
  const FourierCurve c = perturb_fourier(make_ellipse(1.4, 1.0), 0.02, 4, 3);
  const CurveAnalysis an = analyze(c);
  CHECK(an.total_length == doctest::Approx(c.total_length()).epsilon(1e-12));

  CHECK(arc_length(c, 0.7, 2.9) == doctest::Approx(oracle::chordal_arc(c, 0.7, 2.9, 1 << 15))
                                       .epsilon(1e-6));
  // Wrapped arc.
  CHECK(arc_length(c, 5.8, 0.4) == doctest::Approx(oracle::chordal_arc(c, 5.8, 0.4, 1 << 15))
                                       .epsilon(1e-6));
  // Complementary arcs tile the curve.
  CHECK(arc_length(c, 0.7, 2.9) + arc_length(c, 2.9, 0.7) ==
        doctest::Approx(c.total_length()).epsilon(1e-10));

  for (double u : {0.0, 0.9, 2.2, 4.4, 6.1}) {
    const double ell = an.arclength_at(u);
    CHECK(an.param_at_arclength(ell) == doctest::Approx(u).epsilon(1e-8));
  }
}

TEST_CASE("unit normal is the left-hand unit perpendicular") {
  const FourierCurve c = perturb_fourier(make_ellipse(2.1, 1.3), 0.04, 6, 17);
  for (int i = 0; i < 12; ++i) {
    const double s = kTwoPi * i / 12.0;
    const Vec2 n = c.unit_normal(s), v = c.velocity(s);
    CHECK(norm(n) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(dot(n, v)) < 1e-12 * norm(v));
    CHECK(cross(v, n) > 0.0);  // left of the velocity
    // Derivative of the normal by finite differences.
    const double h = 1e-6;
    const Vec2 fd = (1.0 / (2.0 * h)) * (c.unit_normal(s + h) - c.unit_normal(s - h));
    CHECK(dist(c.unit_normal_derivative(s), fd) < 1e-6);
  }
}

TEST_CASE("constructor rejects irregular curves (cardioid cusp)") {
  // (cos s + (1 + cos 2s)/2, sin s + sin 2s / 2) has a cusp at s = pi.
  std::vector<Vec2> cos_c = {{0.5, 0.0}, {1.0, 0.0}, {0.5, 0.0}};
  std::vector<Vec2> sin_c = {{0.0, 0.0}, {0.0, 1.0}, {0.0, 0.5}};
  CHECK_THROWS_AS(FourierCurve(cos_c, sin_c), NumericalError);
}

TEST_CASE("constructor validates coefficient shape") {
  CHECK_THROWS_AS(FourierCurve({{0, 0}}, {}), FormatError);           // size mismatch
  CHECK_THROWS_AS(FourierCurve({}, {}), FormatError);                 // empty
  CHECK_THROWS_AS(FourierCurve({{0, 0}, {1, 0}}, {{0, 1}, {0, 1}}),   // sin[0] != 0
                  FormatError);
}

TEST_CASE("is_simple distinguishes embeddings from figure-eights") {
  CHECK(is_simple(make_ellipse(2.0, 1.0)));
  CHECK(is_simple(make_ellipse(1.05, 1.0)));
  // (sin 2s, sin s) is the standard figure eight.
  const FourierCurve eight({{0, 0}, {0, 0}, {0, 0}}, {{0, 0}, {0, 1}, {1, 0}});
  CHECK_FALSE(is_simple(eight));
}

TEST_CASE("transformed curves: isometry invariants") {
  const FourierCurve base = perturb_fourier(make_ellipse(1.9, 1.2), 0.03, 5, 5);
  const double angle = 0.7;
  const Vec2 shift{0.3, -1.1};
  const FourierCurve moved = transformed(base, angle, shift);
  CHECK(moved.total_length() == doctest::Approx(base.total_length()).epsilon(1e-12));
  CHECK(max_unsigned_curvature(moved) ==
        doctest::Approx(max_unsigned_curvature(base)).epsilon(1e-9));
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (double s : {0.0, 1.0, 3.3, 5.9}) {
    const Vec2 p = base.position(s);
    const Vec2 expect{ca * p.x - sa * p.y + shift.x, sa * p.x + ca * p.y + shift.y};
    CHECK(dist(moved.position(s), expect) < 1e-12);
  }
}

TEST_CASE("polyline parametrization is arc length scaled to 2 pi") {
  const PolylineCurve sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(sq.total_length() == doctest::Approx(4.0));
  CHECK(dist(sq.position(0.0), {0, 0}) < 1e-15);
  CHECK(dist(sq.position(kPi / 4), {0.5, 0.0}) < 1e-12);  // half of edge 0
  CHECK(dist(sq.position(kPi), {1.0, 1.0}) < 1e-12);      // two edges in
  CHECK(sq.vertex_param(2) == doctest::Approx(kPi));
  // Projection: interior point projects to the nearest edge.
  const auto pr = sq.project({0.5, -0.3});
  CHECK(pr.distance == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(dist(sq.position(pr.u), {0.5, 0.0}) < 1e-12);

  CHECK(is_simple(sq));
  CHECK_FALSE(is_simple(PolylineCurve({{0, 0}, {1, 1}, {1, 0}, {0, 1}})));  // bowtie
  CHECK_THROWS_AS(PolylineCurve({{0, 0}, {1, 1}}), FormatError);
}

TEST_CASE("nearest point projection: distance and ambiguity flag") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const auto p = nearest_point_projection(e, Vec2{3.0, 0.0});
  CHECK(p.distance == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(wrap_signed(p.s - 0.0)) < 1e-6);
  CHECK_FALSE(p.ambiguous);
  // The center of a circle sees every point at the same distance.
  const auto q = nearest_point_projection(make_circle(1.0), Vec2{0.0, 0.0});
  CHECK(q.ambiguous);
}

TEST_CASE("winding degree and lifts") {
  std::vector<double> once(128), twice(128), still(128);
  for (int i = 0; i < 128; ++i) {
    const double s = kTwoPi * i / 128;
    once[i] = wrap_angle(s + 0.4 * std::sin(s));
    twice[i] = wrap_angle(2.0 * s);
    still[i] = 1.0 + 0.3 * std::sin(s);
  }
  CHECK(winding_degree(once) == 1);
  CHECK(winding_degree(twice) == 2);
  CHECK(winding_degree(still) == 0);
  const auto lift = lift_circle_samples(once);
  CHECK(lift.size() == once.size());
  for (std::size_t i = 0; i < lift.size(); ++i) {
    CHECK(wrap_angle(lift[i]) == doctest::Approx(once[i]).epsilon(1e-12));
  }
}

TEST_CASE("every suite curve is simple, regular, and self-consistent") {
  for (const FourierCurve& c : suites::full_suite()) {
    CHECK(is_simple(c));
    CHECK(c.total_length() == doctest::Approx(oracle::chordal_length(c, 1 << 14)).epsilon(1e-5));
    CHECK(max_unsigned_curvature(c) > 0.0);
  }
}
