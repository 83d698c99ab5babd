#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "isq/continuation.hpp"
#include "isq/curve.hpp"
#include "isq/size_metric.hpp"
#include "isq/squares.hpp"
#include "oracles.hpp"

using namespace isq;

namespace {

Homotopy linear_pair() {
  return build_linear_homotopy(make_ellipse(1.5, 1.0), make_ellipse(2.0, 1.0), 3);
}

Homotopy two_step_pair(double amp, std::uint64_t seed) {
  const FourierCurve beta = make_ellipse(1.5, 1.0);
  const FourierCurve target = perturb_fourier(beta, amp, 5, seed);
  const ParamCorrespondence f = projection_correspondence(target, beta, 512, "beta", true);
  const double eta = 1.0 / (10.0 * max_unsigned_curvature(beta));
  return build_two_step_homotopy(beta, target, f, eta, seed);
}

}  // namespace

TEST_CASE("linear homotopy interpolates its endpoints") {
  const Homotopy h = linear_pair();
  CHECK(h.kind() == Homotopy::Kind::fourier_linear);
  for (double s : {0.0, 1.1, 2.9, 4.6, 6.0}) {
    CHECK(dist(h.eval(s, 0.0), h.start().position(s)) < 1e-12);
    CHECK(dist(h.eval(s, 1.0), h.target().position(s)) < 1e-12);
  }
  // Slices are curves with a consistent length.
  const Homotopy::Slice mid = h.slice(0.5);
  CHECK(mid.total_length() > 0.0);
  CHECK(dist(mid.position(2.0), h.eval(2.0, 0.5)) < 1e-15);
}

TEST_CASE("slice velocity matches finite differences of eval") {
  const Homotopy h = linear_pair();
  for (double t : {0.0, 0.31, 0.77, 1.0}) {
    const Homotopy::Slice sl = h.slice(t);
    for (int i = 0; i < 10; ++i) {
      const double s = kTwoPi * (i + 0.21) / 10.0;
      CHECK(dist(sl.velocity(s), oracle::fd_velocity(sl, s)) < 1e-7);
    }
  }
}

TEST_CASE("every slice of a valid homotopy is regular") {
  const Homotopy h = two_step_pair(0.01, 4);
  for (double t : {0.0, 0.2, 0.45, 0.5, 0.55, 0.8, 1.0}) {
    const Homotopy::Slice sl = h.slice(t);
    double min_speed = 1e300;
    for (int i = 0; i < 512; ++i) {
      min_speed = std::min(min_speed, sl.speed(kTwoPi * i / 512.0));
    }
    CHECK(min_speed > 1e-5 * sl.total_length() / kTwoPi);
  }
}

TEST_CASE("two-step homotopy: endpoints, stage boundary, tube invariant") {
  const Homotopy h = two_step_pair(0.012, 7);
  CHECK(h.kind() == Homotopy::Kind::two_step);
  CHECK(h.eta() > 0.0);

  for (double s : {0.0, 0.9, 2.2, 3.8, 5.5}) {
    CHECK(dist(h.eval(s, 0.0), h.start().position(s)) < 1e-10);
    CHECK(dist(h.eval(s, 1.0), h.target().position(s)) < 1e-10);
    // C0 across the stage boundary.
    CHECK(dist(h.eval(s, h.stage_boundary() - 1e-9), h.eval(s, h.stage_boundary() + 1e-9)) <
          1e-6);
  }

  // The tube invariant: every homotopy point stays within eta of its
  // reference point beta(p_of(s, t)).
  const FourierCurve& beta = h.reference();
  for (int it = 0; it <= 16; ++it) {
    const double t = it / 16.0;
    for (int is = 0; is < 64; ++is) {
      const double s = kTwoPi * is / 64.0;
      CHECK(dist(h.eval(s, t), beta.position(h.p_of(s, t))) < h.eta());
    }
  }
}

TEST_CASE("two-step rejects bad inputs") {
  const FourierCurve beta = make_ellipse(1.5, 1.0);
  const FourierCurve target = perturb_fourier(beta, 0.01, 5, 4);
  const ParamCorrespondence f = projection_correspondence(target, beta, 512, "beta", true);
  CHECK_THROWS_AS(build_two_step_homotopy(beta, target, f, 0.0, 1), FormatError);
  // Degree != 1 correspondence.
  const ParamCorrespondence rev =
      make_correspondence(target, beta, [](double s) { return kTwoPi - s; }, 512, "beta");
  CHECK_THROWS_AS(build_two_step_homotopy(beta, target, rev, 0.1, 1), FormatError);
}

TEST_CASE("tracking the golden pair: clean end-to-end trace") {
  const Homotopy h = linear_pair();
  const FindReport start = find_all_squares(h.reference());
  REQUIRE(start.squares.size() == 1);
  const TrackResult tr = track_square(h, start.squares[0]);
  REQUIRE(tr.traces.size() == 1);
  const ContinuationTrace& trace = tr.traces[0];
  CHECK_FALSE(trace.path_lost);
  CHECK(trace.start_event == TraceEvent::reached_t0);
  CHECK(trace.end_event == TraceEvent::reached_t1);
  REQUIRE(trace.samples.size() >= 2);
  CHECK(trace.samples.front().t == doctest::Approx(0.0));
  CHECK(trace.samples.back().t == doctest::Approx(1.0));

  // The t=0 sample is the start square and its size w.r.t. P is the identity
  // size (P(., 0) is the identity on the reference).
  CHECK(same_square(trace.samples.front().square, start.squares[0], 1e-7));
  CHECK(trace.samples.front().size_wrt_p ==
        doctest::Approx(square_size_identity(h.reference(), start.squares[0])).epsilon(1e-6));

  // The t=1 square matches a square of the target curve.
  const FindReport fin = find_all_squares(h.target());
  bool matched = false;
  for (const auto& sq : fin.squares) {
    matched = matched || same_square(trace.samples.back().square, sq,
                                     1e-6 * h.target().total_length());
  }
  CHECK(matched);

  // t increases monotonically in a fold-free trace, and every recorded
  // residual is small on its slice.
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    CHECK(trace.samples[i].t > trace.samples[i - 1].t);
  }
}

TEST_CASE("tracking backward from t = 1 reaches t = 0") {
  const Homotopy h = linear_pair();
  const FindReport fin = find_all_squares(h.slice(1.0));
  REQUIRE(!fin.squares.empty());
  TrackOptions opt;
  opt.start_t = 1.0;
  opt.initial_direction = -1.0;
  const TrackResult tr = track_square(h, fin.squares[0], opt);
  REQUIRE(!tr.traces.empty());
  CHECK(tr.traces.front().start_event == TraceEvent::reached_t0);
  CHECK(tr.traces.back().end_event == TraceEvent::reached_t1);
}

TEST_CASE("census: structure, parity, band bookkeeping") {
  const Homotopy h = linear_pair();
  const CensusReport rep = census(h, {0.0, 0.25, 0.5, 0.75, 1.0});
  REQUIRE(rep.slices.size() == 5);
  for (const auto& s : rep.slices) {
    CHECK(s.count == static_cast<int>(s.sizes_wrt_p.size()));
    CHECK(s.odd == (s.count % 2 == 1));
    CHECK(s.odd);  // both ellipses and everything between carry one square
  }
  CHECK(rep.end_matches_final);
  CHECK(rep.band_center > 0.0);
  CHECK(rep.band_halfwidth > 0.0);
  CHECK(rep.min_band_distance > 0.0);
  CHECK_FALSE(rep.band_crossed);
  REQUIRE(!rep.tracking.traces.empty());
  for (const auto& trace : rep.tracking.traces) {
    CHECK_FALSE(trace.path_lost);
    CHECK(trace.start_event != TraceEvent::none);
    CHECK(trace.end_event != TraceEvent::none);
  }
}

TEST_CASE("census requires times 0 and 1") {
  const Homotopy h = linear_pair();
  CHECK_THROWS_AS(census(h, {0.0, 0.5}), FormatError);
  CHECK_THROWS_AS(census(h, {0.5, 1.0}), FormatError);
  CHECK_THROWS_AS(census(h, {}), FormatError);
}

TEST_CASE("fold partners pair up whenever folds appear") {
  // Structural invariant; holds vacuously on fold-free homotopies.
  for (std::uint64_t seed : {4, 9, 23}) {
    const Homotopy h = two_step_pair(0.012, seed);
    const CensusReport rep = census(h, {0.0, 0.5, 1.0});
    const auto& traces = rep.tracking.traces;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      for (TraceEvent ev : {traces[i].start_event, traces[i].end_event}) {
        if (ev == TraceEvent::fold_merge || ev == TraceEvent::fold_split) {
          REQUIRE(traces[i].fold_partner >= 0);
          REQUIRE(traces[i].fold_partner < static_cast<int>(traces.size()));
          const auto& partner = traces[traces[i].fold_partner];
          CHECK((partner.start_event == ev || partner.end_event == ev));
        }
      }
    }
    CHECK(rep.end_matches_final);
  }
}

TEST_CASE("event labels are always one of the named modes") {
  const std::set<TraceEvent> allowed = {TraceEvent::reached_t0,       TraceEvent::reached_t1,
                                        TraceEvent::fold_merge,       TraceEvent::fold_split,
                                        TraceEvent::zero_square_birth,
                                        TraceEvent::zero_square_death};
  const Homotopy h = two_step_pair(0.015, 12);
  const CensusReport rep = census(h, {0.0, 1.0});
  for (const auto& trace : rep.tracking.traces) {
    if (trace.path_lost) continue;
    CHECK(allowed.count(trace.start_event) == 1);
    CHECK(allowed.count(trace.end_event) == 1);
  }
}
