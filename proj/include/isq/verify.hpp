#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "isq/curve.hpp"
#include "isq/size_metric.hpp"
#include "isq/squares.hpp"

namespace isq {

enum class Verdict { holds, violated, inapplicable };

const char* to_string(Verdict v);

/// One quantitative statement, checked. margin is always bound minus
/// measured quantity, so positive means the statement holds; the verdict is
/// holds exactly when margin >= -tolerance (inapplicable when a hypothesis
/// fails, in which case margin is not meaningful).
struct CheckReport {
  std::string check_name;
  /// Every named scalar the checked statement uses (kappa, delta, rho,
  /// bounds, ...), plus diagnostics; insertion order is report order.
  std::vector<std::pair<std::string, double>> hypothesis_values;
  Verdict verdict = Verdict::inapplicable;
  double margin = 0.0;
  double tolerance = 0.0;
  std::vector<SquareCandidate> witness_squares;
  std::string notes;

  void set(const std::string& name, double value) { hypothesis_values.emplace_back(name, value); }
};

/// Every inscribed square of a regular simple curve has identity size at
/// least pi / kappa_max. margin = min over found squares of
/// (size_identity - pi/kappa); no squares found => inapplicable.
CheckReport check_initial_size_bound(const FourierCurve& curve);

/// A subarc of arc length ell <= pi/(4 kappa_max) has chord at least
/// ell/sqrt(2). Samples `trials` random subarcs; margin = min over trials of
/// (chord - ell/sqrt(2)).
CheckReport check_chord_bound(const FourierCurve& curve, int trials, std::uint64_t seed);

/// With f within delta = 1/(10 kappa_max(beta)) of the identity embedding, no
/// square inscribed in alpha has size w.r.t. f inside the band
/// pi/(4 kappa) +- 1e-3/kappa. margin = min distance to the band edge
/// (min over squares of |size - pi/(4 kappa)| minus the band halfwidth).
/// Diagnostics include the proof's arithmetic self-test 1 - 16 sqrt(2)/(10 pi)
/// vs 1/4, the corner angles theta, phi of the beta-side image quadrilateral
/// of the worst square, and both the alpha-side and beta-side minimal chords
/// (the statement's chord step does not name its side; both are reported).
CheckReport check_no_intermediate(const FourierCurve& alpha, const FourierCurve& beta,
                                  const ParamCorrespondence& f);

/// A square inscribed in alpha with identity size rho has size w.r.t. f less
/// than sqrt(2)/(5 kappa) + sqrt(2) rho, provided f stays within
/// 1/(10 kappa) of the identity. margin = bound - size_wrt_f. Also records
/// the closing arithmetic sqrt(2)/(5 kappa) + 1/(100 kappa) < pi/(4 kappa).
CheckReport check_small_square_bound(const FourierCurve& alpha, const FourierCurve& beta,
                                     const ParamCorrespondence& f, const SquareCandidate& square);

/// End-to-end certification: beta within 1/(10 kappa_max(gamma)) of the
/// smooth simple gamma (nearest-point projection, degree 1) inscribes a
/// square of positive sidelength. Throws NumericalError when beta leaves
/// gamma's certified tube (ambiguous projection). The map direction is
/// f: image(beta) -> image(gamma), per the theorem statement; the reversed
/// direction that also circulates is noted in the report.
CheckReport certify_main_theorem(const FourierCurve& gamma, const PolylineCurve& beta);

/// Annulus instance: beta contained in { r <= |p| <= R } around the origin
/// with R <= (1 + sqrt(2)) r and winding number 1 about the center inscribes
/// a square. Reports containment, ratio, winding, and the square search.
CheckReport annulus_scenario(double r, double R, const PolylineCurve& beta);

}  // namespace isq
