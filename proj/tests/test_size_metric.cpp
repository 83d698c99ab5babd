#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "isq/curve.hpp"
#include "isq/size_metric.hpp"
#include "isq/squares.hpp"
#include "oracles.hpp"
#include "suites.hpp"

using namespace isq;

TEST_CASE("identity size on the unit circle square is 3 pi / 2") {
  const FourierCurve circle = make_circle(1.0);
  const SquareCandidate sq = make_candidate(circle, {0.2, 0.2 + kPi / 2, 0.2 + kPi,
                                                     0.2 + 3 * kPi / 2}, 0.0);
  // Four quarter arcs; drop one: 3/4 of the full circumference.
  CHECK(square_size_identity(circle, sq) == doctest::Approx(1.5 * kPi).epsilon(1e-10));
}

TEST_CASE("identity size matches the chordal oracle across the suite") {
  for (const FourierCurve& c : suites::small_suite()) {
    const FindReport fr = find_all_squares(c);
    for (const auto& sq : fr.squares) {
      const double lib = square_size_identity(c, sq);
      const double ora = oracle::identity_size(c, sq.params);
      CHECK(lib == doctest::Approx(ora).epsilon(1e-5));
    }
  }
}

TEST_CASE("identity size is invariant under cyclic relabeling") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const SquareCandidate sq = find_all_squares(e).squares[0];
  SquareCandidate rotated = sq;
  std::rotate(rotated.params.begin(), rotated.params.begin() + 1, rotated.params.end());
  std::rotate(rotated.vertices.begin(), rotated.vertices.begin() + 1, rotated.vertices.end());
  CHECK(square_size_identity(e, rotated) ==
        doctest::Approx(square_size_identity(e, sq)).epsilon(1e-12));
}

TEST_CASE("identity correspondence reproduces identity size") {
  const FourierCurve e = make_ellipse(1.5, 1.0);
  const CurveAnalysis an = analyze(e);
  const ParamCorrespondence id = make_identity_correspondence(e);
  CHECK(id.degree() == 1);
  CHECK(id.max_displacement == doctest::Approx(0.0));
  const SquareCandidate sq = find_all_squares(e).squares[0];
  CHECK(square_size(sq, an, id) ==
        doctest::Approx(square_size_identity(e, sq)).epsilon(1e-9));
}

TEST_CASE("oriented length: sign, additivity, and full loops") {
  const FourierCurve e = make_ellipse(1.5, 1.0);
  const CurveAnalysis an = analyze(e);
  const ParamCorrespondence id = make_identity_correspondence(e);
  const double L = e.total_length();

  const double fwd = oriented_length(an, id, 0.5, 2.0);
  CHECK(fwd == doctest::Approx(arc_length(e, 0.5, 2.0)).epsilon(1e-9));
  CHECK(fwd > 0.0);
  // Complementary arc completes the loop.
  CHECK(fwd + oriented_length(an, id, 2.0, 0.5 + kTwoPi) == doctest::Approx(L).epsilon(1e-9));
  CHECK(oriented_length(an, id, 1.0, 1.0) == doctest::Approx(0.0));

  // A reversing correspondence makes forward arcs travel backward.
  const ParamCorrespondence rev =
      make_correspondence(e, e, [](double s) { return kTwoPi - s; }, 512, "reversed");
  CHECK(rev.degree() == -1);
  CHECK(oriented_length(an, rev, 0.5, 2.0) < 0.0);
  CHECK(oriented_length(an, rev, 0.5, 2.0) ==
        doctest::Approx(-arc_length(e, kTwoPi - 2.0, kTwoPi - 0.5)).epsilon(1e-6));
}

TEST_CASE("projection correspondence onto a nearby curve") {
  const FourierCurve beta = make_ellipse(1.5, 1.0);
  const FourierCurve alpha = perturb_fourier(beta, 0.015, 5, 31);
  const ParamCorrespondence f = projection_correspondence(alpha, beta, 512, "beta");
  CHECK(f.degree() == 1);
  CHECK(f.target_curve_ref == "beta");
  CHECK(f.max_displacement < 0.12);
  CHECK(f.max_displacement > 0.0);
  // Projection actually lands on the nearest point: spot-check a few params.
  for (double s : {0.3, 1.7, 4.0}) {
    const double t = wrap_angle(f.lifted_at(s));
    const auto pr = nearest_point_projection(beta, alpha.position(s));
    CHECK(std::abs(wrap_signed(t - pr.s)) < 1e-3);
  }
}

TEST_CASE("size w.r.t. a correspondence uses image arcs, not source arcs") {
  // On the circle the parameter is arc length, so a double-speed cover
  // doubles every image arc exactly and the size doubles with it.
  const FourierCurve circle = make_circle(1.0);
  const CurveAnalysis an = analyze(circle);
  const SquareCandidate sq =
      make_candidate(circle, {0.2, 0.2 + kPi / 2, 0.2 + kPi, 0.2 + 3 * kPi / 2}, 0.0);
  const ParamCorrespondence doubled =
      make_correspondence(circle, circle, [](double s) { return 2.0 * s; }, 1024, "doubled");
  CHECK(doubled.degree() == 2);
  CHECK(square_size(sq, an, doubled) ==
        doctest::Approx(2.0 * square_size_identity(circle, sq)).epsilon(1e-9));
}

TEST_CASE("square_size validates parameter orientation") {
  const FourierCurve e = make_ellipse(1.5, 1.0);
  const CurveAnalysis an = analyze(e);
  const ParamCorrespondence id = make_identity_correspondence(e);
  SquareCandidate sq = find_all_squares(e).squares[0];
  std::swap(sq.params[1], sq.params[3]);  // reflection: breaks cyclic order
  std::swap(sq.vertices[1], sq.vertices[3]);
  CHECK_THROWS_AS(square_size(sq, an, id), FormatError);
}

TEST_CASE("make_correspondence rejects lift-ambiguous maps") {
  const FourierCurve e = make_ellipse(1.5, 1.0);
  // Jumps by pi between adjacent grid points cannot be lifted.
  CHECK_THROWS_AS(make_correspondence(
                      e, e, [](double s) { return s < kPi ? 0.0 : kPi; }, 512, "jump"),
                  NumericalError);
}

TEST_CASE("lifted_at unrolls periodically") {
  const FourierCurve e = make_ellipse(1.5, 1.0);
  const ParamCorrespondence id = make_identity_correspondence(e);
  const double u = 1.234;
  CHECK(id.lifted_at(u + kTwoPi) == doctest::Approx(id.lifted_at(u) + kTwoPi).epsilon(1e-12));
  CHECK(id.lifted_at(u - kTwoPi) == doctest::Approx(id.lifted_at(u) - kTwoPi).epsilon(1e-12));
}
