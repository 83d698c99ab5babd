#include "isq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isq {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "inapplicable";
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double interior_angle(Vec2 prev, Vec2 at, Vec2 next) {
  const Vec2 u = prev - at;
  const Vec2 v = next - at;
  const double nu = norm(u), nv = norm(v);
  if (nu < 1e-300 || nv < 1e-300) return 0.0;
  return std::acos(std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0));
}

}  // namespace

CheckReport check_initial_size_bound(const FourierCurve& curve) {
  CheckReport rep;
  rep.check_name = "initial_size_bound";
  rep.tolerance = 1e-6;

  const CurveAnalysis an = analyze(curve);
  const double kappa = an.max_unsigned_curvature;
  const double bound = kPi / kappa;
  rep.set("kappa", kappa);
  rep.set("pi_over_kappa", bound);
  rep.set("total_length", an.total_length);

  if (!is_simple(curve)) {
    rep.notes = "curve is not simple; statement hypothesis fails";
    return rep;
  }

  const FindReport fr = find_all_squares(curve);
  rep.set("square_count", static_cast<double>(fr.squares.size()));
  if (fr.squares.empty()) {
    rep.notes = "no inscribed squares found; nothing to measure";
    return rep;
  }

  double worst = std::numeric_limits<double>::infinity();
  const SquareCandidate* witness = nullptr;
  for (const auto& sq : fr.squares) {
    const double size = square_size_identity(curve, sq);
    if (size - bound < worst) {
      worst = size - bound;
      witness = &sq;
    }
  }
  rep.set("min_size_identity", worst + bound);
  rep.margin = worst;
  rep.verdict = (rep.margin >= -rep.tolerance) ? Verdict::holds : Verdict::violated;
  if (witness) rep.witness_squares.push_back(*witness);
  if (fr.continuum_warning) rep.notes = "square continuum: sizes measured on representatives";
  return rep;
}

CheckReport check_chord_bound(const FourierCurve& curve, int trials, std::uint64_t seed) {
  CheckReport rep;
  rep.check_name = "chord_bound";
  rep.tolerance = 1e-9;

  const CurveAnalysis an = analyze(curve);
  const double kappa = an.max_unsigned_curvature;
  const double ell_max = kPi / (4.0 * kappa);
  rep.set("kappa", kappa);
  rep.set("ell_max", ell_max);
  rep.set("trials", static_cast<double>(trials));

  Rng rng(seed);
  double margin = std::numeric_limits<double>::infinity();
  double worst_ell = 0.0, worst_chord = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double s0 = rng.uniform(0.0, kTwoPi);
    const double ell = rng.uniform(1e-3 * ell_max, ell_max);
    double a1 = an.arclength_at(s0) + ell;
    if (a1 >= an.total_length) a1 -= an.total_length;
    const double s1 = an.param_at_arclength(a1);
    const double chord = dist(curve.position(s0), curve.position(s1));
    const double m = chord - ell / kSqrt2;
    if (m < margin) {
      margin = m;
      worst_ell = ell;
      worst_chord = chord;
    }
  }
  rep.set("worst_ell", worst_ell);
  rep.set("worst_chord", worst_chord);
  rep.set("worst_bound", worst_ell / kSqrt2);
  rep.margin = margin;
  rep.verdict = (rep.margin >= -rep.tolerance) ? Verdict::holds : Verdict::violated;
  return rep;
}

CheckReport check_no_intermediate(const FourierCurve& alpha, const FourierCurve& beta,
                                  const ParamCorrespondence& f) {
  CheckReport rep;
  rep.check_name = "no_intermediate";
  rep.tolerance = 0.0;

  const CurveAnalysis beta_an = analyze(beta);
  const double kappa = beta_an.max_unsigned_curvature;
  const double delta_budget = 1.0 / (10.0 * kappa);
  const double target = kPi / (4.0 * kappa);
  const double band = 1e-3 / kappa;
  rep.set("kappa", kappa);
  rep.set("delta", f.max_displacement);
  rep.set("delta_budget", delta_budget);
  rep.set("pi_over_4kappa", target);
  rep.set("band_halfwidth", band);
  // Arithmetic self-test from the excluded-middle step of the proof.
  const double arith = 1.0 - 16.0 * kSqrt2 / (10.0 * kPi);
  rep.set("one_minus_16sqrt2_over_10pi", arith);
  rep.set("one_quarter", 0.25);
  if (arith <= 0.25) {
    rep.verdict = Verdict::violated;
    rep.margin = arith - 0.25;
    rep.notes = "arithmetic self-test failed";
    return rep;
  }

  if (f.max_displacement > delta_budget) {
    rep.notes = "displacement exceeds 1/(10 kappa); hypothesis fails";
    return rep;
  }

  const FindReport fr = find_all_squares(alpha);
  rep.set("square_count", static_cast<double>(fr.squares.size()));
  if (fr.squares.empty()) {
    rep.notes = "no inscribed squares found; nothing to measure";
    return rep;
  }

  double min_dist = std::numeric_limits<double>::infinity();
  const SquareCandidate* worst = nullptr;
  for (const auto& sq : fr.squares) {
    const double size = square_size(sq, beta_an, f);
    const double d = std::abs(size - target);
    if (d < min_dist) {
      min_dist = d;
      worst = &sq;
    }
  }
  rep.set("min_distance_to_target", min_dist);
  rep.margin = min_dist - band;
  rep.verdict = (rep.margin >= -rep.tolerance) ? Verdict::holds : Verdict::violated;
  rep.witness_squares.push_back(*worst);

  // Diagnostics on the closest square: corner angles of its beta-side image
  // quadrilateral at the second and third vertex, plus the minimal chord on
  // each side (the chord step of the statement is reported for both curves).
  std::array<Vec2, 4> image{};
  for (int i = 0; i < 4; ++i) {
    image[i] = beta.position(wrap_angle(f.lifted_at(worst->params[i])));
  }
  rep.set("theta", interior_angle(image[0], image[1], image[2]));
  rep.set("phi", interior_angle(image[1], image[2], image[3]));
  double alpha_chord = std::numeric_limits<double>::infinity();
  double beta_chord = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    alpha_chord = std::min(alpha_chord, dist(worst->vertices[i], worst->vertices[(i + 1) % 4]));
    beta_chord = std::min(beta_chord, dist(image[i], image[(i + 1) % 4]));
  }
  rep.set("alpha_chord_min", alpha_chord);
  rep.set("beta_chord_min", beta_chord);
  return rep;
}

CheckReport check_small_square_bound(const FourierCurve& alpha, const FourierCurve& beta,
                                     const ParamCorrespondence& f,
                                     const SquareCandidate& square) {
  CheckReport rep;
  rep.check_name = "small_square_bound";
  rep.tolerance = 1e-6;

  const CurveAnalysis beta_an = analyze(beta);
  const double kappa = beta_an.max_unsigned_curvature;
  const double delta_budget = 1.0 / (10.0 * kappa);
  rep.set("kappa", kappa);
  rep.set("delta", f.max_displacement);
  rep.set("delta_budget", delta_budget);

  const double rho = square_size_identity(alpha, square);
  const double bound = kSqrt2 / (5.0 * kappa) + kSqrt2 * rho;
  rep.set("rho", rho);
  rep.set("bound", bound);
  // Closing arithmetic of the argument that stitches this bound to the
  // no-intermediate band.
  rep.set("sqrt2_over_5kappa_plus_1_over_100kappa", kSqrt2 / (5.0 * kappa) + 0.01 / kappa);
  rep.set("pi_over_4kappa", kPi / (4.0 * kappa));

  if (f.max_displacement >= delta_budget) {
    rep.notes = "displacement exceeds 1/(10 kappa); hypothesis fails";
    return rep;
  }

  const double size_f = square_size(square, beta_an, f);
  rep.set("size_wrt_f", size_f);
  rep.margin = bound - size_f;
  rep.verdict = (rep.margin >= -rep.tolerance) ? Verdict::holds : Verdict::violated;
  rep.witness_squares.push_back(square);
  return rep;
}

CheckReport certify_main_theorem(const FourierCurve& gamma, const PolylineCurve& beta) {
  CheckReport rep;
  rep.check_name = "main_theorem";
  rep.tolerance = 0.0;
  rep.notes =
      "f maps image(beta) -> image(gamma) as in the theorem statement; the "
      "summary's reversed direction is equivalent here and not used";

  const double kappa = max_unsigned_curvature(gamma);
  const double budget = 1.0 / (10.0 * kappa);
  rep.set("kappa", kappa);
  rep.set("displacement_budget", budget);

  if (!is_simple(gamma)) {
    rep.notes += "; gamma is not simple, hypothesis fails";
    return rep;
  }

  // Throws NumericalError when beta exits the certified tube of gamma.
  const ParamCorrespondence f = projection_correspondence(beta, gamma, 1024, "gamma", true);
  rep.set("delta", f.max_displacement);
  rep.set("winding_degree", static_cast<double>(f.degree()));

  if (f.max_displacement >= budget) {
    rep.notes += "; displacement exceeds 1/(10 kappa), hypothesis fails";
    return rep;
  }
  if (f.degree() != 1) {
    rep.notes += "; winding degree != 1, hypothesis fails";
    return rep;
  }

  const FindReport fr = find_all_squares(beta);
  rep.set("square_count", static_cast<double>(fr.squares.size()));
  if (fr.squares.empty()) {
    rep.verdict = Verdict::violated;
    rep.margin = -1.0;
    rep.notes += "; hypotheses certified but no positive-sidelength square found";
    return rep;
  }
  rep.margin = budget - f.max_displacement;
  rep.verdict = Verdict::holds;
  rep.witness_squares = fr.squares;
  return rep;
}

CheckReport annulus_scenario(double r, double R, const PolylineCurve& beta) {
  if (!(r > 0.0) || !(r <= R)) throw FormatError("annulus_scenario: need 0 < r <= R");
  CheckReport rep;
  rep.check_name = "annulus";
  rep.tolerance = 0.0;

  const double ratio_bound = (1.0 + kSqrt2) * r;
  double max_norm = 0.0;
  double min_edge = std::numeric_limits<double>::infinity();
  const auto& vs = beta.vertices();
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    max_norm = std::max(max_norm, norm(vs[i]));
    min_edge = std::min(min_edge, point_segment_distance({0.0, 0.0}, vs[i], vs[(i + 1) % n]));
  }
  int winding = 0;
  if (min_edge > 0.0) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += wrap_signed(std::atan2(vs[(i + 1) % n].y, vs[(i + 1) % n].x) -
                           std::atan2(vs[i].y, vs[i].x));
    }
    winding = static_cast<int>(std::lround(total / kTwoPi));
  }

  const bool contained = (max_norm <= R + 1e-12) && (min_edge >= r - 1e-12);
  const bool ratio_ok = (R <= ratio_bound + 1e-12);
  rep.set("r", r);
  rep.set("R", R);
  rep.set("ratio_bound", ratio_bound);
  rep.set("max_norm", max_norm);
  rep.set("min_center_distance", min_edge);
  rep.set("winding", static_cast<double>(winding));
  rep.set("contained", contained ? 1.0 : 0.0);

  const FindReport fr = find_all_squares(beta);
  rep.set("square_count", static_cast<double>(fr.squares.size()));

  if (!contained || !ratio_ok || winding != 1) {
    rep.notes = !ratio_ok        ? "ratio bound R <= (1+sqrt(2)) r fails"
                : !contained     ? "curve leaves the annulus"
                                 : "winding about the center is not 1";
    return rep;
  }
  rep.margin = fr.squares.empty() ? -1.0 : ratio_bound - R;
  rep.verdict = fr.squares.empty() ? Verdict::violated : Verdict::holds;
  rep.witness_squares = fr.squares;
  if (fr.squares.empty()) rep.notes = "hypotheses certified but no inscribed square found";
  return rep;
}

}  // namespace isq
