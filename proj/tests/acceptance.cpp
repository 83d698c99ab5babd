// Integration acceptance run. Each numbered criterion prints exactly one
// PASS/FAIL line with its measured numbers; the exit status is the number of
// failures. Criteria run independently so one failure cannot mask another.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "isq/continuation.hpp"
#include "isq/curve.hpp"
#include "isq/scenarios.hpp"
#include "isq/size_metric.hpp"
#include "isq/squares.hpp"
#include "isq/verify.hpp"
#include "suites.hpp"

using namespace isq;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int g_failures = 0;

void verdict(int criterion, bool pass, const char* fmt, ...) {
  char detail[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(detail, sizeof(detail), fmt, args);
  va_end(args);
  std::printf("criterion %2d: %s — %s\n", criterion, pass ? "PASS" : "FAIL", detail);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void guarded(int criterion, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    verdict(criterion, false, "exception: %s", e.what());
  }
}

// --- 1: golden ellipse ------------------------------------------------------

void criterion1() {
  Timer timer;
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const FindReport fr = find_all_squares(e);
  const double elapsed = timer.seconds();
  const double golden_side = 4.0 / std::sqrt(5.0);
  const double golden_coord = 2.0 / std::sqrt(5.0);
  if (fr.squares.size() != 1) {
    verdict(1, false, "expected exactly 1 square, found %zu", fr.squares.size());
    return;
  }
  const SquareCandidate& sq = fr.squares[0];
  const double side_err = std::abs(sq.sidelength - golden_side);
  double vert_err = 0.0;
  for (const Vec2& v : sq.vertices) {
    vert_err = std::max(vert_err, std::abs(std::abs(v.x) - golden_coord));
    vert_err = std::max(vert_err, std::abs(std::abs(v.y) - golden_coord));
  }
  const bool pass = side_err <= 1e-6 && vert_err <= 1e-6 && elapsed < 5.0;
  verdict(1, pass, "one square, side %.9f (err %.2e), vertex err %.2e, %.2f s", sq.sidelength,
          side_err, vert_err, elapsed);
}

// --- 2: parity over 20 perturbed ellipses ------------------------------------

void criterion2() {
  Timer timer;
  int odd_runs = 0, runs = 0;
  std::vector<std::size_t> counts;
  for (const FourierCurve& c : suites::parity_suite()) {
    const FindReport fr = find_all_squares(c);
    counts.push_back(fr.squares.size());
    odd_runs += (fr.squares.size() % 2 == 1) ? 1 : 0;
    ++runs;
  }
  const double elapsed = timer.seconds();
  std::string list;
  for (std::size_t n : counts) list += std::to_string(n) + " ";
  const bool pass = runs == 20 && odd_runs == 20 && elapsed < 120.0;
  verdict(2, pass, "%d/%d odd square counts [ %s], %.1f s", odd_runs, runs, list.c_str(),
          elapsed);
}

// --- 3: initial size bound across the full suite -----------------------------

void criterion3() {
  const auto suite = suites::full_suite();
  int curves = 0, squares = 0;
  double worst_margin = 1e300;
  bool pass = suite.size() >= 30;
  for (const FourierCurve& c : suite) {
    const double kappa = max_unsigned_curvature(c);
    const FindReport fr = find_all_squares(c);
    ++curves;
    for (const auto& sq : fr.squares) {
      const double margin = square_size_identity(c, sq) - (kPi / kappa - 1e-6);
      worst_margin = std::min(worst_margin, margin);
      pass = pass && margin >= 0.0;
      ++squares;
    }
  }
  verdict(3, pass, "%d squares over %d curves, worst size margin %.6f", squares, curves,
          worst_margin);
}

// --- 4: chord bound on 10^4 subarcs ------------------------------------------

void criterion4() {
  const auto suite = suites::full_suite();
  const int per_curve = static_cast<int>((10000 + suite.size() - 1) / suite.size());
  Rng rng(2026);
  long trials = 0;
  double worst = 1e300;
  bool pass = true;
  for (const FourierCurve& c : suite) {
    const CurveAnalysis an = analyze(c);
    const double kappa = an.max_unsigned_curvature;
    const double ell_max = kPi / (4.0 * kappa);
    for (int i = 0; i < per_curve; ++i) {
      const double ell = rng.uniform(1e-6 * ell_max, ell_max);
      const double a0 = rng.uniform(0.0, an.total_length);
      double a1 = a0 + ell;
      if (a1 >= an.total_length) a1 -= an.total_length;
      const double s0 = an.param_at_arclength(a0);
      const double s1 = an.param_at_arclength(a1);
      const double chord = dist(c.position(s0), c.position(s1));
      const double slack = chord - (ell / std::sqrt(2.0) - 1e-9);
      worst = std::min(worst, slack);
      pass = pass && slack >= 0.0;
      ++trials;
    }
  }
  // Circle boundary case: arc ell = pi/4 on the unit circle.
  const FourierCurve circle = make_circle(1.0);
  const double chord = dist(circle.position(0.0), circle.position(kPi / 4.0));
  const double chord_err = std::abs(chord - 0.7653668647301795);
  const double bound_err = std::abs(kPi / 4.0 / std::sqrt(2.0) - 0.5553603672697958);
  pass = pass && chord_err <= 1e-6 && bound_err <= 1e-6;
  verdict(4, pass, "%ld subarcs, worst slack %.3e; circle chord err %.1e, bound err %.1e",
          trials, worst, chord_err, bound_err);
}

// --- 5: small-square bound on 10 pairs ----------------------------------------

void criterion5() {
  const std::array<std::pair<double, double>, 5> axes = {
      {{1.5, 1.0}, {1.8, 1.2}, {2.0, 1.0}, {1.3, 0.9}, {2.2, 1.5}}};
  int pairs = 0, squares = 0;
  double worst_margin = 1e300;
  bool pass = true;
  for (int i = 0; i < 10; ++i) {
    const auto [a, b] = axes[i % axes.size()];
    const FourierCurve beta = make_ellipse(a, b);
    const FourierCurve alpha = perturb_fourier(beta, 0.008, 5, 301 + i);
    const ParamCorrespondence f = projection_correspondence(alpha, beta, 512, "beta");
    const double kappa = max_unsigned_curvature(beta);
    if (!(f.max_displacement < 1.0 / (10.0 * kappa))) {
      pass = false;
      continue;
    }
    const CurveAnalysis ban = analyze(beta);
    ++pairs;
    for (const auto& sq : find_all_squares(alpha).squares) {
      const double rho = square_size_identity(alpha, sq);
      const double size_f = square_size(sq, ban, f);
      const double bound = std::sqrt(2.0) / (5.0 * kappa) + std::sqrt(2.0) * rho + 1e-6;
      worst_margin = std::min(worst_margin, bound - size_f);
      pass = pass && size_f < bound;
      ++squares;
    }
    // Section-4 arithmetic at this curvature.
    pass = pass && std::sqrt(2.0) / (5.0 * kappa) + 1.0 / (100.0 * kappa) < kPi / (4.0 * kappa);
  }
  pass = pass && pairs == 10 && squares >= 10;
  verdict(5, pass, "%d squares over %d pairs, worst bound margin %.6f", squares, pairs,
          worst_margin);
}

// --- 6: no-intermediate band under two-step homotopies ------------------------

void criterion6() {
  const std::array<std::pair<double, double>, 5> axes = {
      {{1.5, 1.0}, {1.8, 1.2}, {2.0, 1.0}, {1.3, 0.9}, {2.2, 1.5}}};
  int runs = 0;
  double min_distance = 1e300;
  bool pass = true;
  for (int i = 0; i < 10; ++i) {
    const auto [a, b] = axes[i % axes.size()];
    const FourierCurve beta = make_ellipse(a, b);
    const FourierCurve target = perturb_fourier(beta, 0.008, 5, 401 + i);
    const ParamCorrespondence f = projection_correspondence(target, beta, 512, "beta", true);
    const double kappa = max_unsigned_curvature(beta);
    const double eta = 1.0 / (10.0 * kappa);
    const Homotopy h = build_two_step_homotopy(beta, target, f, eta, 401 + i);
    const CensusReport rep = census(h, {0.0, 0.25, 0.5, 0.75, 1.0});
    min_distance = std::min(min_distance, rep.min_band_distance - rep.band_halfwidth);
    pass = pass && !rep.band_crossed && rep.min_band_distance > rep.band_halfwidth;
    // Zero crossings are flagged consistently: a zero event at an endpoint
    // means the terminal square shrank to the zero threshold, and vice versa.
    const double zero_tol = 1e-4 * beta.total_length();
    for (const auto& trace : rep.tracking.traces) {
      if (trace.path_lost) {
        pass = false;
        continue;
      }
      for (bool at_end : {false, true}) {
        const TraceEvent ev = at_end ? trace.end_event : trace.start_event;
        const double side = at_end ? trace.samples.back().square.sidelength
                                   : trace.samples.front().square.sidelength;
        const bool zero_event =
            ev == TraceEvent::zero_square_birth || ev == TraceEvent::zero_square_death;
        if (zero_event != (side <= 2.0 * zero_tol)) pass = false;
      }
    }
    ++runs;
  }
  pass = pass && runs == 10;
  verdict(6, pass, "%d homotopies, min distance beyond band edge %.6f", runs, min_distance);
}

// --- 7: oracle equivalence on the small suite ---------------------------------

void criterion7() {
  int curves = 0;
  bool pass = true;
  std::string detail;
  for (const FourierCurve& c : suites::small_suite()) {
    const FindReport fr = find_all_squares(c);
    const auto oracle_squares = brute_force_oracle(c, 64);
    bool agree = fr.squares.size() == oracle_squares.size();
    if (agree) {
      for (const auto& a : fr.squares) {
        int matches = 0;
        for (const auto& b : oracle_squares) matches += same_square(a, b, 1e-4) ? 1 : 0;
        agree = agree && matches == 1;
      }
      for (const auto& b : oracle_squares) {
        int matches = 0;
        for (const auto& a : fr.squares) matches += same_square(a, b, 1e-4) ? 1 : 0;
        agree = agree && matches == 1;
      }
    }
    detail += std::to_string(fr.squares.size()) + "/" + std::to_string(oracle_squares.size()) +
              " ";
    pass = pass && agree;
    ++curves;
  }
  verdict(7, pass, "%d curves, solver/oracle counts [ %s]", curves, detail.c_str());
}

// --- 8: continuation endpoints, labels, fold pairing ---------------------------

void criterion8() {
  const FourierCurve start = make_ellipse(1.5, 1.0);
  const FourierCurve target = perturb_fourier(make_ellipse(2.0, 1.0), 0.03, 5, 17);
  const Homotopy h = build_linear_homotopy(start, target, 8);
  const FindReport at0 = find_all_squares(h.reference());
  const FindReport at1 = find_all_squares(h.target());
  const double dedup_tol = 1e-6 * h.target().total_length();

  bool pass = !at0.squares.empty() && !at1.squares.empty();
  int endpoint_matches = 0, endpoints_at_t1 = 0;
  for (const auto& sq : at0.squares) {
    const TrackResult tr = track_square(h, sq);
    for (std::size_t i = 0; i < tr.traces.size(); ++i) {
      const auto& trace = tr.traces[i];
      if (trace.path_lost) {
        pass = false;
        continue;
      }
      // Label check: the six named modes only.
      for (TraceEvent ev : {trace.start_event, trace.end_event}) {
        pass = pass && ev != TraceEvent::none;
      }
      // Fold pairing within this result.
      for (TraceEvent ev : {trace.start_event, trace.end_event}) {
        if (ev == TraceEvent::fold_merge || ev == TraceEvent::fold_split) {
          pass = pass && trace.fold_partner >= 0 &&
                 trace.fold_partner < static_cast<int>(tr.traces.size()) &&
                 trace.fold_partner != static_cast<int>(i);
        }
      }
      if (trace.end_event == TraceEvent::reached_t1) {
        ++endpoints_at_t1;
        bool matched = false;
        for (const auto& fin : at1.squares) {
          matched = matched || same_square(trace.samples.back().square, fin, dedup_tol);
        }
        if (matched) ++endpoint_matches;
        pass = pass && matched;
      }
    }
  }
  pass = pass && endpoints_at_t1 > 0 && endpoint_matches == endpoints_at_t1;
  verdict(8, pass, "%d/%d t=1 endpoints matched the finder (%zu start, %zu final squares)",
          endpoint_matches, endpoints_at_t1, at0.squares.size(), at1.squares.size());
}

// --- 9: peanut, small sidelength with large size -------------------------------

void criterion9() {
  const FourierCurve peanut = make_peanut(0.1);
  const double kappa = max_unsigned_curvature(peanut);
  const FindReport fr = find_all_squares(peanut);
  bool pass = false;
  double side = 0.0, size = 0.0;
  for (const auto& sq : fr.squares) {
    const double s = square_size_identity(peanut, sq);
    if (sq.sidelength < 0.2 && s >= kPi / kappa) {
      pass = true;
      side = sq.sidelength;
      size = s;
    }
  }
  verdict(9, pass, "square with side %.6f < 0.2 and size %.6f >= pi/kappa = %.6f (%zu squares)",
          side, size, kPi / kappa, fr.squares.size());
}

// --- 10: end-to-end main theorem -----------------------------------------------

void criterion10() {
  const FourierCurve gamma = make_ellipse(2.0, 1.0);
  bool pass = true;
  double worst_time = 0.0;
  int held = 0;
  for (std::uint64_t seed = 9; seed <= 13; ++seed) {
    Timer timer;
    const PolylineCurve beta = make_noisy_polyline(gamma, 400, 0.02, seed);
    const CheckReport rep = certify_main_theorem(gamma, beta);
    const double elapsed = timer.seconds();
    worst_time = std::max(worst_time, elapsed);
    bool witness = !rep.witness_squares.empty();
    for (const auto& sq : rep.witness_squares) witness = witness && sq.sidelength > 0.0;
    const bool ok = rep.verdict == Verdict::holds && witness && elapsed < 60.0;
    if (ok) ++held;
    pass = pass && ok;
  }
  verdict(10, pass, "%d/5 certified with positive-side witnesses, slowest case %.1f s", held,
          worst_time);
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  guarded(10, criterion10);
  if (g_failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
