#pragma once

#include <array>
#include <vector>

#include "isq/curve.hpp"
#include "isq/numerics.hpp"

namespace isq {

/// Four parameters on the source circle, one per square vertex. The pairing
/// convention everywhere is: (s[0], s[2]) and (s[1], s[3]) are the diagonals.
using Params4 = std::array<double, 4>;

enum class Orientation { counterclockwise, clockwise };

/// A (possibly degenerate) inscribed square: four curve parameters in cyclic
/// order on the parameter circle plus their image points.
struct SquareCandidate {
  Params4 params{};
  std::array<Vec2, 4> vertices{};
  /// Sup-norm of the residual system with the quadratic equations rescaled to
  /// length units (divided by total_length / 2*pi).
  double residual_norm = 0.0;
  double sidelength = 0.0;  // |vertices[2] - vertices[1]|
  Orientation orientation = Orientation::counterclockwise;
};

/// The square system at four parameters s, with p_i = curve(s[i]):
///   F1, F2 = p1 + p3 - p2 - p4   (diagonal midpoints coincide)
///   F3     = (p3 - p1) . (p4 - p2)   (diagonals perpendicular)
///   F4     = |p3 - p1|^2 - |p4 - p2|^2   (diagonals equal)
/// F = 0 exactly when the points are the vertices of a square, the
/// all-coincident case included.
Vec4 square_residual(const PlaneCurve& curve, const Params4& s);

/// Residual and analytic Jacobian with rows 3-4 divided by length_scale, so
/// all entries carry length units and one tolerance fits the whole vector.
struct SquareSystem {
  Vec4 f{};
  Mat4 j{};
};
SquareSystem square_system(const PlaneCurve& curve, const Params4& s, double length_scale);

enum class RefineStatus {
  converged,
  no_convergence,       // residual still above tol after max_iter
  degenerate_jacobian,  // condition number beyond 1e12 and no descent possible
};

struct RefineResult {
  RefineStatus status = RefineStatus::no_convergence;
  SquareCandidate candidate;  // meaningful when converged
  int iterations = 0;
  double condition = 0.0;  // Jacobian condition at the final iterate
};

/// Damped Newton on the scaled square system with a Levenberg-Marquardt
/// fallback near rank-deficient Jacobians (symmetric curves carry square
/// continua, where plain Newton dies). tol <= 0 selects the default
/// 1e-11 * total_length.
RefineResult newton_refine(const PlaneCurve& curve, Params4 seed, double tol = 0.0,
                           int max_iter = 60);

/// Scans diagonal pairs (s1, s3) on a grid_n x grid_n parameter grid, builds
/// the square the diagonal would force, and scores it by squared distance of
/// the two constructed vertices to the curve. Local minima below a loose
/// threshold become seeds; s2, s4 are filled in by nearest-point projection.
std::vector<Params4> diagonal_seed_search(const PlaneCurve& curve, int grid_n);

struct FindConfig {
  int grid_n = 0;             // 0: 64 for smooth curves, 2 x vertex count for polylines
  double tol = 0.0;           // 0: 1e-11 * total_length
  double min_sidelength = 0;  // 0: 1e-6 * total_length; smaller squares are degenerate
};

struct FindReport {
  std::vector<SquareCandidate> squares;  // counterclockwise, deduplicated, sorted by params[0]
  /// Rank-deficient Jacobian at an accepted solution: the curve carries a
  /// square continuum (e.g. a circle) and `squares` holds representatives.
  bool continuum_warning = false;
  /// No square found on a smooth curve; the parity theorem for generic C2
  /// Jordan curves predicts an odd (hence nonzero) count.
  bool empty_warning = false;
  int seeds = 0;
  int converged = 0;
  int degenerate_failures = 0;
};

/// Seeds, refines, filters (counterclockwise labelings, residual, degenerate
/// sidelength), deduplicates cyclic relabelings, and sorts canonically.
FindReport find_all_squares(const PlaneCurve& curve, const FindConfig& config = {});

/// Polyline variant: corners break the Newton Jacobian, so seeds are refined
/// derivative-free over the diagonal (s1, s3) — a trust-region quadratic
/// model of the projection score, exact wherever the nearest-edge assignments
/// are constant — with the other two vertices recovered by projection.
FindReport find_all_squares(const PolylineCurve& curve, const FindConfig& config = {});

/// Independent validation path: exhaustive diagonal scan at full grid density
/// refined by coordinate descent on |F|^2 only — no Newton, no analytic
/// derivatives. Same filters and dedup rule as find_all_squares.
std::vector<SquareCandidate> brute_force_oracle(const PlaneCurve& curve, int grid_n);

/// True when the two candidates describe the same geometric square: some
/// cyclic relabeling matches all four vertices within tol.
bool same_square(const SquareCandidate& a, const SquareCandidate& b, double tol);

/// Canonical candidate from raw parameters: wraps and cyclically sorts the
/// params (diagonal interleaving is preserved for genuine squares), recomputes
/// vertices, sidelength and orientation.
SquareCandidate make_candidate(const PlaneCurve& curve, Params4 s, double residual_norm);

}  // namespace isq
