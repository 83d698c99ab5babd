#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "isq/curve.hpp"
#include "isq/size_metric.hpp"
#include "isq/squares.hpp"

namespace isq {

/// A homotopy H(s, t), t in [0, 1], between two smooth closed curves,
/// together with the correspondence P(., t) onto a smooth reference curve
/// beta that all sizes are measured against.
///
/// kinds:
///   fourier_linear — straight coefficient interpolation; P is the identity
///     (the homotopy never reparametrizes) and beta is the start curve.
///   two_step — the loop-extension construction: stage 1 (t <= 1/2) crawls
///     points along beta toward beta(f(s)); stage 2 moves points on a
///     straight line to the target with P frozen at f. A small normal offset
///     keeps every slice an immersion even where loops extend: it rises
///     through stage 1, peaks at the stage boundary (where beta(f(s)) alone
///     would be singular wherever f is non-monotone), and decays through
///     stage 2. Stage ramps are quintic smoothsteps, so the glue is C2. Here
///     beta is the first endpoint and P(s, 0) = s.
class Homotopy {
 public:
  enum class Kind { fourier_linear, two_step };

  Kind kind() const { return kind_; }
  const FourierCurve& start() const { return *start_; }
  const FourierCurve& target() const { return *target_; }
  /// Smooth reference curve (beta) whose arc length backs the size metric.
  const FourierCurve& reference() const { return *start_; }
  const CurveAnalysis& reference_analysis() const { return ref_analysis_; }

  Vec2 eval(double s, double t) const;
  Vec2 velocity_s(double s, double t) const;  // dH/ds
  /// Correspondence parameter P(s, t) onto the reference curve.
  double p_of(double s, double t) const;

  /// P(., t) discretized onto the reference curve; max_displacement is
  /// max_s |beta(P(s,t)) - H(s,t)|, the eta-bound quantity.
  ParamCorrespondence correspondence(double t, int n = 512) const;

  double eta() const { return eta_; }
  double stage_boundary() const { return stage_boundary_; }

  /// Fixed-t slice as a PlaneCurve (length computed on first use).
  class Slice final : public PlaneCurve {
   public:
    Slice(const Homotopy& h, double t) : h_(&h), t_(t) {}
    Vec2 position(double s) const override { return h_->eval(s, t_); }
    Vec2 velocity(double s) const override { return h_->velocity_s(s, t_); }
    double total_length() const override;
    double t() const { return t_; }

   private:
    const Homotopy* h_;
    double t_ = 0.0;
    mutable double length_ = -1.0;  // lazy; not safe for a concurrent first call
  };
  Slice slice(double t) const { return Slice(*this, t); }

  friend Homotopy build_linear_homotopy(const FourierCurve& start, const FourierCurve& target,
                                        std::uint64_t seed);
  friend Homotopy build_two_step_homotopy(const FourierCurve& beta, const FourierCurve& target,
                                          const ParamCorrespondence& f, double eta,
                                          std::uint64_t seed);

 private:
  Homotopy() = default;

  Kind kind_ = Kind::fourier_linear;
  std::shared_ptr<const FourierCurve> start_;
  std::shared_ptr<const FourierCurve> target_;
  CurveAnalysis ref_analysis_;

  // fourier_linear: optional genericity perturbation with envelope 4t(1-t)
  TrigSeries pert_x_, pert_y_;
  bool perturbed_ = false;

  // two_step: smooth displacement fit dhat with f(s) = s + dhat(s), plus the
  // normal-offset field A e(t) (1 + 0.3 sin(3s + phi)), with envelope e
  // rising 0 -> 1 over stage 1 and falling 1 -> 0 over stage 2
  TrigSeries dhat_;
  double offset_amp_ = 0.0;
  double offset_phase_ = 0.0;
  double eta_ = 0.0;
  double stage_boundary_ = 1.0;
};

/// Linear coefficient interpolation. Every slice is checked for regularity on
/// an (s, t) grid; on failure a tiny seeded mid-path perturbation is applied
/// and rechecked, up to 5 retries, then NumericalError.
Homotopy build_linear_homotopy(const FourierCurve& start, const FourierCurve& target,
                               std::uint64_t seed = 2026);

/// Two-step construction. f maps the target's parameters onto beta (source
/// grid = target circle) and must have degree 1; the smoothed displacement
/// must stay below eta, and beta must have a positive tubular radius, else
/// NumericalError. The displacement invariant |beta(P(s,t)) - H(s,t)| < eta
/// is validated on a grid after construction.
Homotopy build_two_step_homotopy(const FourierCurve& beta, const FourierCurve& target,
                                 const ParamCorrespondence& f, double eta,
                                 std::uint64_t seed = 2026);

enum class TraceEvent {
  reached_t0,
  reached_t1,
  fold_merge,         // two branches meet as t increases and annihilate
  fold_split,         // two branches appear as t increases
  zero_square_birth,  // sidelength grows from the zero-square threshold
  zero_square_death,  // sidelength shrinks to the zero-square threshold
  none,               // error endpoint (path lost); never on a clean trace
};

const char* to_string(TraceEvent e);

struct TraceSample {
  double t = 0.0;
  SquareCandidate square;
  double size_wrt_p = 0.0;
};

/// One monotone-in-t branch of a tracked square path.
struct ContinuationTrace {
  std::vector<TraceSample> samples;  // t strictly increasing
  TraceEvent start_event = TraceEvent::none;
  TraceEvent end_event = TraceEvent::none;
  int fold_partner = -1;  // index of the sibling branch in TrackResult::traces
  bool path_lost = false;
  std::string note;
};

struct TrackOptions {
  double sigma_init = 2e-2;  // pseudo-arclength step
  double sigma_min = 1e-7;
  double sigma_max = 8e-2;
  int max_steps = 8000;
  int corr_samples = 256;  // grid for P(., t) at recorded samples
  double tol = 0.0;        // corrector residual tolerance; 0: 1e-10 * L_ref
  double size_rate = 0.0;  // size continuity budget per unit step; 0: 16 * L_ref
  double start_t = 0.0;    // square0 must solve the system at this time
  double initial_direction = 1.0;  // +1 walks toward t=1 first, -1 toward t=0
};

/// A tracked path, split at folds into monotone-t branches. traces[0]
/// contains the start state; fold partners are adjacent.
struct TrackResult {
  std::vector<ContinuationTrace> traces;
};

/// Pseudo-arclength predictor-corrector on square_residual(H(., t), s) = 0.
/// Walks from (square0, t = 0) toward t = 1, through folds, until the path
/// reaches a time boundary, shrinks below the zero-square threshold
/// (1e-4 * reference length), or the step floor is hit (path lost, reported
/// with the last good state).
TrackResult track_square(const Homotopy& h, const SquareCandidate& square0,
                         const TrackOptions& options = {});

struct CensusSlice {
  double t = 0.0;
  int count = 0;
  std::vector<double> sizes_wrt_p;
  bool odd = false;
};

struct CensusReport {
  std::vector<CensusSlice> slices;
  /// Traces started from every square of the t=0 slice, plus backward walks
  /// from any final-slice square no forward trace reached.
  TrackResult tracking;
  double kappa_ref = 0.0;
  double band_center = 0.0;     // pi / (4 kappa)
  double band_halfwidth = 0.0;  // 1e-3 / kappa
  /// min over tracked samples of |size - band_center|.
  double min_band_distance = 0.0;
  bool band_crossed = false;
  /// Every reached_t1 trace endpoint matches a square of the final slice.
  bool end_matches_final = true;
};

/// Square censuses of the slices at the given times (must include 0 and 1),
/// plus tracking of every t=0 square and the pi/(4 kappa) band bookkeeping.
CensusReport census(const Homotopy& h, const std::vector<double>& times,
                    const FindConfig& config = {});

}  // namespace isq
