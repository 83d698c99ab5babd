#include "isq/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace isq {

namespace {

double linear_envelope(double t) { return 4.0 * t * (1.0 - t); }

Vec2 series_eval(const TrigSeries& x, const TrigSeries& y, double s) {
  return {x.eval(s), y.eval(s)};
}

Vec2 series_derivative(const TrigSeries& x, const TrigSeries& y, double s) {
  return {x.derivative(s), y.derivative(s)};
}

constexpr double kOffsetWobble = 0.3;  // s-dependence of the normal offset field
constexpr int kOffsetHarmonic = 3;

double offset_profile(double s, double phase) {
  return 1.0 + kOffsetWobble * std::sin(kOffsetHarmonic * s + phase);
}

double offset_profile_derivative(double s, double phase) {
  return kOffsetWobble * kOffsetHarmonic * std::cos(kOffsetHarmonic * s + phase);
}

}  // namespace

// ---------------------------------------------------------------------------
// Homotopy evaluation

Vec2 Homotopy::eval(double s, double t) const {
  if (kind_ == Kind::fourier_linear) {
    Vec2 p = (1.0 - t) * start_->position(s) + t * target_->position(s);
    if (perturbed_) p += linear_envelope(t) * series_eval(pert_x_, pert_y_, s);
    return p;
  }
  const double tb = stage_boundary_;
  // The normal offset rises through stage 1 and decays through stage 2, so it
  // is at full strength exactly at the stage boundary, where the base curve
  // beta(fhat(s)) alone would lose regularity wherever fhat is non-monotone.
  if (t <= tb) {
    const double r = smoothstep5(t / tb);
    const double g = s + r * dhat_.eval(s);
    const double off = offset_amp_ * r * offset_profile(s, offset_phase_);
    return start_->position(g) + off * start_->unit_normal(g);
  }
  const double r2 = smoothstep5((t - tb) / (1.0 - tb));
  const double g = s + dhat_.eval(s);
  const Vec2 x1 = start_->position(g);
  const double off = offset_amp_ * (1.0 - r2) * offset_profile(s, offset_phase_);
  return x1 + r2 * (target_->position(s) - x1) + off * start_->unit_normal(g);
}

Vec2 Homotopy::velocity_s(double s, double t) const {
  if (kind_ == Kind::fourier_linear) {
    Vec2 v = (1.0 - t) * start_->velocity(s) + t * target_->velocity(s);
    if (perturbed_) v += linear_envelope(t) * series_derivative(pert_x_, pert_y_, s);
    return v;
  }
  const double tb = stage_boundary_;
  if (t <= tb) {
    const double r = smoothstep5(t / tb);
    const double g = s + r * dhat_.eval(s);
    const double gs = 1.0 + r * dhat_.derivative(s);
    const double env = offset_amp_ * r;
    const double off = env * offset_profile(s, offset_phase_);
    const double off_s = env * offset_profile_derivative(s, offset_phase_);
    return start_->velocity(g) * gs + off_s * start_->unit_normal(g) +
           off * start_->unit_normal_derivative(g) * gs;
  }
  const double r2 = smoothstep5((t - tb) / (1.0 - tb));
  const double g = s + dhat_.eval(s);
  const double gs = 1.0 + dhat_.derivative(s);
  const Vec2 x1s = start_->velocity(g) * gs;
  const double env = offset_amp_ * (1.0 - r2);
  const double off = env * offset_profile(s, offset_phase_);
  const double off_s = env * offset_profile_derivative(s, offset_phase_);
  return x1s + r2 * (target_->velocity(s) - x1s) + off_s * start_->unit_normal(g) +
         off * start_->unit_normal_derivative(g) * gs;
}

double Homotopy::p_of(double s, double t) const {
  if (kind_ == Kind::fourier_linear) return s;
  const double tb = stage_boundary_;
  if (t <= tb) return s + smoothstep5(t / tb) * dhat_.eval(s);
  return s + dhat_.eval(s);  // frozen at the stage-1 terminal correspondence
}

ParamCorrespondence Homotopy::correspondence(double t, int n) const {
  const Slice sl = slice(t);
  return make_correspondence(
      sl, reference(), [this, t](double s) { return p_of(s, t); }, n, "reference");
}

double Homotopy::Slice::total_length() const {
  if (length_ < 0.0) {
    const int panels = 512;
    const double h = kTwoPi / panels;
    double len = 0.0;
    for (int i = 0; i < panels; ++i) {
      len += integrate_gl8([this](double s) { return norm(velocity(s)); }, i * h, (i + 1) * h);
    }
    length_ = len;
  }
  return length_;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

/// min |dH/ds| over [0, 2pi] x [0, 1]. Sampled local minima are refined by
/// golden section in s and then polished in both variables, because an exact
/// interior velocity zero (a non-immersed slice) can otherwise slip between
/// grid nodes and masquerade as a small positive sample.
double refined_min_speed(const Homotopy& h, int nt, int ns) {
  const auto speed = [&h](double s, double t) { return norm(h.velocity_s(s, t)); };
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0, best_t = 0.0;
  const double hs = kTwoPi / ns;
  std::vector<double> row(ns);
  for (int i = 0; i <= nt; ++i) {
    const double t = static_cast<double>(i) / nt;
    for (int j = 0; j < ns; ++j) row[j] = speed(hs * j, t);
    for (int j = 0; j < ns; ++j) {
      if (row[j] > row[(j + ns - 1) % ns] || row[j] > row[(j + 1) % ns]) continue;
      const double s0 = hs * j;
      const auto r = minimize_golden([&](double s) { return speed(s, t); }, s0 - hs, s0 + hs,
                                     1e-10);
      if (r.value < best) {
        best = r.value;
        best_s = r.x;
        best_t = t;
      }
    }
  }
  double wt = 1.0 / nt, ws = hs;
  for (int round = 0; round < 4; ++round) {
    const auto rt = minimize_golden([&](double t) { return speed(best_s, t); },
                                    std::max(0.0, best_t - wt), std::min(1.0, best_t + wt), 1e-12);
    best_t = rt.x;
    const auto rs = minimize_golden([&](double s) { return speed(s, best_t); }, best_s - ws,
                                    best_s + ws, 1e-12);
    best_s = rs.x;
    best = std::min(best, rs.value);
    wt *= 0.35;
    ws *= 0.35;
  }
  return best;
}

TrigSeries random_series(Rng& rng, double amplitude, int max_harmonic) {
  TrigSeries out;
  out.cos_coef.assign(max_harmonic + 1, 0.0);
  out.sin_coef.assign(max_harmonic + 1, 0.0);
  for (int k = 2; k <= max_harmonic; ++k) {
    out.cos_coef[k] = rng.uniform(-amplitude, amplitude);
    out.sin_coef[k] = rng.uniform(-amplitude, amplitude);
  }
  return out;
}

}  // namespace

Homotopy build_linear_homotopy(const FourierCurve& start, const FourierCurve& target,
                               std::uint64_t seed) {
  Homotopy h;
  h.kind_ = Homotopy::Kind::fourier_linear;
  h.start_ = std::make_shared<FourierCurve>(start);
  h.target_ = std::make_shared<FourierCurve>(target);
  h.stage_boundary_ = 1.0;

  const double speed_floor = 1e-8 * start.total_length() / kTwoPi;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    if (attempt > 0) {
      // Genericity surrogate: a tiny seeded mid-path wiggle, zero at both
      // endpoints, applied when some intermediate slice loses regularity.
      Rng rng(seed + attempt);
      const double amp = 1e-3 * start.total_length() / kTwoPi;
      h.pert_x_ = random_series(rng, amp, 6);
      h.pert_y_ = random_series(rng, amp, 6);
      h.perturbed_ = true;
    }
    if (refined_min_speed(h, 32, 256) > speed_floor) {
      h.ref_analysis_ = analyze(*h.start_);
      return h;
    }
  }
  throw NumericalError("linear homotopy: irregular slice persists after 5 perturbation retries");
}

Homotopy build_two_step_homotopy(const FourierCurve& beta, const FourierCurve& target,
                                 const ParamCorrespondence& f, double eta, std::uint64_t seed) {
  if (!(eta > 0.0)) throw FormatError("two-step homotopy: eta must be positive");
  if (f.degree() != 1) {
    throw FormatError("two-step homotopy: correspondence must have degree 1");
  }

  Homotopy h;
  h.kind_ = Homotopy::Kind::two_step;
  h.start_ = std::make_shared<FourierCurve>(beta);
  h.target_ = std::make_shared<FourierCurve>(target);
  h.eta_ = eta;
  h.stage_boundary_ = 0.5;

  // Smooth the sampled correspondence: f(s) = s + dhat(s) with dhat a
  // trigonometric fit of the periodic lift displacement.
  const int n = f.size();
  std::vector<double> disp(n);
  for (int i = 0; i < n; ++i) disp[i] = f.lift[i] - f.source_params[i];
  h.dhat_ = fit_trig_series(disp, std::min(64, n / 4));
  double fit_err = 0.0;
  for (int i = 0; i < n; ++i) {
    fit_err = std::max(fit_err, std::abs(h.dhat_.eval(f.source_params[i]) - disp[i]));
  }
  if (fit_err > 0.05) {
    throw NumericalError("two-step homotopy: correspondence too rough for a smooth fit");
  }

  // Displacement budget with the smoothed map.
  double smoothed_disp = 0.0;
  const int m = std::max(1024, 4 * n);
  for (int i = 0; i < m; ++i) {
    const double s = kTwoPi * i / m;
    smoothed_disp =
        std::max(smoothed_disp, dist(target.position(s), beta.position(s + h.dhat_.eval(s))));
  }
  if (smoothed_disp >= eta) {
    throw NumericalError("two-step homotopy: displacement budget exceeded (smoothed map)");
  }

  const double reach = estimate_reach(beta);
  if (!(reach > 1e-9 * beta.total_length())) {
    throw NumericalError("two-step homotopy: tubular neighborhood too small");
  }
  // The offset peaks at 1.3 * amp (profile max), and stage 2 adds it on top
  // of the remaining displacement, so cap the amplitude to keep
  // |beta(P) - H| strictly inside eta.
  h.offset_amp_ = std::min(0.25 * std::min(eta, reach), (eta - smoothed_disp) / 2.6);

  // The normal offset keeps slices immersed where loops extend, provided its
  // derivative does not vanish at the same spot where the base speed does.
  // The phase is picked by a deterministic search maximizing the refined
  // minimum slice speed; a seeded jitter decorrelates repeat builds.
  const double scale = beta.total_length() / kTwoPi;
  const double jitter = kTwoPi * Rng(seed).uniform() / 48.0;
  double best_speed = -1.0, best_phase = 0.7;
  for (int k = -1; k < 24; ++k) {
    h.offset_phase_ = (k < 0) ? 0.7 : kTwoPi * k / 24.0 + jitter;
    const double ms = refined_min_speed(h, 32, 256);
    if (ms > best_speed) {
      best_speed = ms;
      best_phase = h.offset_phase_;
    }
    if (ms > 1e-4 * scale) break;  // comfortably immersed; stop searching
  }
  h.offset_phase_ = best_phase;
  if (best_speed <= 1e-7 * scale) {
    throw NumericalError("two-step homotopy: no offset phase keeps every slice immersed");
  }

  // Validate the advertised invariant |beta(P(s,t)) - H(s,t)| < eta.
  for (int i = 0; i <= 32; ++i) {
    const double t = i / 32.0;
    for (int j = 0; j < 256; ++j) {
      const double s = kTwoPi * j / 256;
      if (dist(beta.position(h.p_of(s, t)), h.eval(s, t)) >= eta) {
        throw NumericalError("two-step homotopy: displacement budget exceeded on the grid");
      }
    }
  }
  h.ref_analysis_ = analyze(*h.start_);
  return h;
}

// ---------------------------------------------------------------------------
// Tracking

const char* to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::reached_t0: return "reached_t0";
    case TraceEvent::reached_t1: return "reached_t1";
    case TraceEvent::fold_merge: return "fold_merge";
    case TraceEvent::fold_split: return "fold_split";
    case TraceEvent::zero_square_birth: return "zero_square_birth";
    case TraceEvent::zero_square_death: return "zero_square_death";
    case TraceEvent::none: return "none";
  }
  return "none";
}

namespace {

Vec4 residual_at(const Homotopy& h, const Params4& s, double t, double scale) {
  const Homotopy::Slice sl = h.slice(t);
  Vec4 f = square_residual(sl, s);
  f[2] /= scale;
  f[3] /= scale;
  return f;
}

Vec4 dfdt_at(const Homotopy& h, const Params4& s, double t, double scale) {
  const double d = 1e-6;
  const double t0 = std::max(0.0, t - d);
  const double t1 = std::min(1.0, t + d);
  const Vec4 f0 = residual_at(h, s, t0, scale);
  const Vec4 f1 = residual_at(h, s, t1, scale);
  Vec4 out;
  for (int k = 0; k < 4; ++k) out[k] = (f1[k] - f0[k]) / (t1 - t0);
  return out;
}

struct Tangent {
  Params4 vs{};
  double vt = 1.0;
};

double tangent_dot(const Tangent& a, const Tangent& b) {
  double acc = a.vt * b.vt;
  for (int i = 0; i < 4; ++i) acc += a.vs[i] * b.vs[i];
  return acc;
}

/// Unit tangent of the solution path, oriented along prev. Near folds the
/// Newton solve blows up in the s-components and the normalized tangent
/// correctly turns perpendicular to t.
Tangent path_tangent(const Homotopy& h, const Params4& s, double t, double scale,
                     const Tangent& prev) {
  const Homotopy::Slice sl = h.slice(t);
  const SquareSystem sys = square_system(sl, s, scale);
  const Vec4 ft = dfdt_at(h, s, t, scale);
  Vec4 rhs;
  for (int k = 0; k < 4; ++k) rhs[k] = -ft[k];
  const auto sol = solve4(sys.j, rhs);
  if (!sol.ok) return prev;
  double n2 = 1.0;
  for (int i = 0; i < 4; ++i) n2 += sol.x[i] * sol.x[i];
  const double inv = 1.0 / std::sqrt(n2);
  Tangent tau;
  tau.vt = inv;
  for (int i = 0; i < 4; ++i) tau.vs[i] = sol.x[i] * inv;
  if (tangent_dot(tau, prev) < 0.0) {
    tau.vt = -tau.vt;
    for (int i = 0; i < 4; ++i) tau.vs[i] = -tau.vs[i];
  }
  return tau;
}

/// Bordered Newton corrector: F(s, t) = 0 plus the pseudo-arclength plane
/// tau . ((s,t) - (s_pred, t_pred)) = 0.
bool arclength_corrector(const Homotopy& h, Params4& s, double& t, const Tangent& tau,
                         const Params4& s_pred, double t_pred, double scale, double tol,
                         int* iters_out) {
  for (int iter = 0; iter < 12; ++iter) {
    const Vec4 f = residual_at(h, s, t, scale);
    double g = tau.vt * (t - t_pred);
    for (int i = 0; i < 4; ++i) g += tau.vs[i] * (s[i] - s_pred[i]);
    if (norm_inf(f) <= tol && std::abs(g) <= 1e-10) {
      if (iters_out) *iters_out = iter;
      return true;
    }
    const Homotopy::Slice sl = h.slice(t);
    const SquareSystem sys = square_system(sl, s, scale);
    Vec4 rhs_f, rhs_t;
    const Vec4 ft = dfdt_at(h, s, t, scale);
    for (int k = 0; k < 4; ++k) {
      rhs_f[k] = -f[k];
      rhs_t[k] = -ft[k];
    }
    const auto a = solve4(sys.j, rhs_f);
    const auto b = solve4(sys.j, rhs_t);
    if (!a.ok || !b.ok) return false;
    double denom = tau.vt;
    for (int i = 0; i < 4; ++i) denom += tau.vs[i] * b.x[i];
    if (std::abs(denom) < 1e-14) return false;
    double num = -g;
    for (int i = 0; i < 4; ++i) num -= tau.vs[i] * a.x[i];
    const double dt = num / denom;
    for (int i = 0; i < 4; ++i) s[i] += a.x[i] + dt * b.x[i];
    t += dt;
    if (t < -0.25 || t > 1.25) return false;
  }
  return false;
}

/// Plain Newton at a fixed time (boundary polish / start verification).
bool fixed_t_newton(const Homotopy& h, Params4& s, double t, double scale, double tol) {
  double fn = norm_inf(residual_at(h, s, t, scale));
  for (int iter = 0; iter < 30; ++iter) {
    if (fn <= tol) return true;
    const Homotopy::Slice sl = h.slice(t);
    const SquareSystem sys = square_system(sl, s, scale);
    Vec4 rhs;
    for (int k = 0; k < 4; ++k) rhs[k] = -sys.f[k];
    const auto sol = solve4(sys.j, rhs);
    if (!sol.ok) return false;
    bool stepped = false;
    double damp = 1.0;
    for (int k = 0; k < 8 && !stepped; ++k, damp *= 0.5) {
      Params4 trial = s;
      for (int i = 0; i < 4; ++i) trial[i] = s[i] + damp * sol.x[i];
      const double fnt = norm_inf(residual_at(h, trial, t, scale));
      if (fnt < fn) {
        s = trial;
        fn = fnt;
        stepped = true;
      }
    }
    if (!stepped) return false;
  }
  return fn <= tol;
}

struct WalkPoint {
  Params4 s{};
  double t = 0.0;
  TraceSample sample;
};

enum class StopReason { t1, t0, zero, lost };

}  // namespace

TrackResult track_square(const Homotopy& h, const SquareCandidate& square0,
                         const TrackOptions& options) {
  const double L = h.reference().total_length();
  const double scale = L / kTwoPi;
  const double tol = (options.tol > 0.0) ? options.tol : 1e-10 * L;
  const double size_rate = (options.size_rate > 0.0) ? options.size_rate : 16.0 * L;
  const double zero_thresh = 1e-4 * L;
  const double t_begin = options.start_t;

  Params4 s = square0.params;
  if (!fixed_t_newton(h, s, t_begin, scale, tol)) {
    throw NumericalError("track_square: start square does not solve the system at the start time");
  }

  const auto measure = [&](const Params4& sp, double tp) {
    WalkPoint wp;
    wp.s = sp;
    wp.t = tp;
    const Homotopy::Slice sl = h.slice(tp);
    wp.sample.t = tp;
    wp.sample.square = make_candidate(sl, sp, norm_inf(residual_at(h, sp, tp, scale)));
    wp.sample.size_wrt_p = square_size(wp.sample.square, h.reference_analysis(),
                                       h.correspondence(tp, options.corr_samples));
    return wp;
  };

  std::vector<WalkPoint> walk;
  walk.push_back(measure(s, t_begin));

  double t = t_begin;
  Tangent tau = path_tangent(h, s, t, scale, Tangent{{}, options.initial_direction});
  double sigma = options.sigma_init;
  StopReason stop = StopReason::lost;
  std::string note;

  for (int step = 0; step < options.max_steps; ++step) {
    Params4 s_pred = s;
    for (int i = 0; i < 4; ++i) s_pred[i] += sigma * tau.vs[i];
    const double t_pred = t + sigma * tau.vt;

    Params4 sc = s_pred;
    double tc = t_pred;
    int iters = 0;
    bool ok = arclength_corrector(h, sc, tc, tau, s_pred, t_pred, scale, tol, &iters);

    if (ok && (tc >= 1.0 - 1e-12 || tc <= 1e-12)) {
      const double t_edge = (tc >= 1.0 - 1e-12) ? 1.0 : 0.0;
      Params4 se = sc;
      if (fixed_t_newton(h, se, t_edge, scale, tol)) {
        const WalkPoint wp = measure(se, t_edge);
        if (std::abs(wp.sample.size_wrt_p - walk.back().sample.size_wrt_p) <=
            size_rate * (sigma + std::abs(t_edge - t)) + 1e-6) {
          walk.push_back(wp);
          stop = (t_edge == 1.0) ? StopReason::t1 : StopReason::t0;
          break;
        }
      }
      ok = false;  // boundary polish failed; retreat
    }

    if (ok) {
      const WalkPoint wp = measure(sc, tc);
      if (std::abs(wp.sample.size_wrt_p - walk.back().sample.size_wrt_p) >
          size_rate * sigma + 1e-6) {
        ok = false;  // continuity budget violated: likely branch hop
      } else if (wp.sample.square.sidelength < zero_thresh) {
        walk.push_back(wp);
        stop = StopReason::zero;
        break;
      } else {
        walk.push_back(wp);
        s = sc;
        t = tc;
        tau = path_tangent(h, s, t, scale, tau);
        if (iters <= 3) sigma = std::min(sigma * 1.3, options.sigma_max);
        continue;
      }
    }
    sigma *= 0.5;
    if (sigma < options.sigma_min) {
      note = "path lost: step floor reached at t = " + std::to_string(t);
      stop = StopReason::lost;
      break;
    }
  }
  if (walk.size() >= 2 && stop == StopReason::lost && note.empty()) {
    note = "path lost: step budget exhausted at t = " + std::to_string(t);
  }

  // Split the walk into monotone-t branches at interior t-extrema (folds).
  TrackResult result;
  const int last = static_cast<int>(walk.size()) - 1;
  std::vector<int> breaks;  // indices where a new run starts
  breaks.push_back(0);
  int dir = 0;
  for (int i = 0; i < last; ++i) {
    const double dt = walk[i + 1].t - walk[i].t;
    const int d = (dt > 0.0) ? 1 : (dt < 0.0 ? -1 : 0);
    if (d == 0) continue;
    if (dir != 0 && d != dir) breaks.push_back(i);  // fold between runs
    dir = d;
  }

  const auto boundary_event = [&](bool at_low_t_end, int walk_index) {
    // Interior boundaries are folds; walk endpoints are labeled by the stop
    // reason (or by construction for index 0).
    const bool is_walk_start = (walk_index == 0);
    const bool is_walk_end = (walk_index == last);
    if (!is_walk_start && !is_walk_end) {
      return at_low_t_end ? TraceEvent::fold_split : TraceEvent::fold_merge;
    }
    if (is_walk_start) return walk[0].t <= 1e-12 ? TraceEvent::reached_t0 : TraceEvent::reached_t1;
    switch (stop) {
      case StopReason::t1: return TraceEvent::reached_t1;
      case StopReason::t0: return TraceEvent::reached_t0;
      case StopReason::zero:
        return at_low_t_end ? TraceEvent::zero_square_birth : TraceEvent::zero_square_death;
      case StopReason::lost: return TraceEvent::none;
    }
    return TraceEvent::none;
  };

  for (std::size_t r = 0; r < breaks.size(); ++r) {
    const int b = breaks[r];
    const int e = (r + 1 < breaks.size()) ? breaks[r + 1] : last;
    if (e <= b) continue;
    ContinuationTrace trace;
    const bool increasing = walk[e].t >= walk[b].t;
    for (int i = b; i <= e; ++i) trace.samples.push_back(walk[i].sample);
    if (!increasing) std::reverse(trace.samples.begin(), trace.samples.end());
    // Low-t end of this run maps to walk index b when increasing, e otherwise.
    const int low_idx = increasing ? b : e;
    const int high_idx = increasing ? e : b;
    trace.start_event = boundary_event(/*at_low_t_end=*/true, low_idx);
    trace.end_event = boundary_event(/*at_low_t_end=*/false, high_idx);
    if (stop == StopReason::lost &&
        (low_idx == last || high_idx == last)) {
      trace.path_lost = true;
      trace.note = note;
    }
    result.traces.push_back(std::move(trace));
  }
  // Fold partners are adjacent runs sharing the break sample.
  for (std::size_t r = 0; r + 1 < result.traces.size(); ++r) {
    result.traces[r].fold_partner = static_cast<int>(r + 1);
    result.traces[r + 1].fold_partner = static_cast<int>(r);
  }
  if (result.traces.empty()) {
    ContinuationTrace trace;
    trace.samples.push_back(walk[0].sample);
    trace.start_event = boundary_event(true, 0);
    trace.end_event = boundary_event(false, last);
    trace.path_lost = (stop == StopReason::lost);
    trace.note = note;
    result.traces.push_back(std::move(trace));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Census

CensusReport census(const Homotopy& h, const std::vector<double>& times,
                    const FindConfig& config) {
  std::vector<double> ts = times;
  std::sort(ts.begin(), ts.end());
  if (ts.empty() || std::abs(ts.front()) > 1e-9 || std::abs(ts.back() - 1.0) > 1e-9) {
    throw FormatError("census: times must include 0 and 1");
  }

  const CurveAnalysis& ref = h.reference_analysis();
  const double L = ref.total_length;
  CensusReport rep;
  rep.kappa_ref = ref.max_unsigned_curvature;
  rep.band_center = kPi / (4.0 * rep.kappa_ref);
  rep.band_halfwidth = 1e-3 / rep.kappa_ref;
  rep.min_band_distance = std::numeric_limits<double>::infinity();

  std::vector<SquareCandidate> initial, finals;
  for (double t : ts) {
    const Homotopy::Slice sl = h.slice(t);
    const FindReport fr = find_all_squares(sl, config);
    const ParamCorrespondence corr = h.correspondence(t);
    CensusSlice cs;
    cs.t = t;
    cs.count = static_cast<int>(fr.squares.size());
    cs.odd = (cs.count % 2) == 1;
    for (const auto& sq : fr.squares) {
      cs.sizes_wrt_p.push_back(square_size(sq, ref, corr));
    }
    if (std::abs(t) <= 1e-9) initial = fr.squares;
    if (std::abs(t - 1.0) <= 1e-9) finals = fr.squares;
    rep.slices.push_back(std::move(cs));
  }

  const auto absorb = [&rep](TrackResult tr) {
    const int base = static_cast<int>(rep.tracking.traces.size());
    for (auto& trace : tr.traces) {
      if (trace.fold_partner >= 0) trace.fold_partner += base;
      for (const auto& sample : trace.samples) {
        const double d = std::abs(sample.size_wrt_p - rep.band_center);
        rep.min_band_distance = std::min(rep.min_band_distance, d);
        if (d < rep.band_halfwidth) rep.band_crossed = true;
      }
      rep.tracking.traces.push_back(std::move(trace));
    }
  };

  // Track forward from every initial square, skipping squares already visited
  // by an earlier walk that folded back to t = 0.
  const double match_tol = 1e-6 * L;
  const auto visited_at = [&](double t_edge, const SquareCandidate& sq) {
    for (const auto& trace : rep.tracking.traces) {
      for (const auto* sample : {&trace.samples.front(), &trace.samples.back()}) {
        if (std::abs(sample->t - t_edge) <= 1e-9 &&
            same_square(sample->square, sq, match_tol)) {
          return true;
        }
      }
    }
    return false;
  };

  for (const auto& sq : initial) {
    if (visited_at(0.0, sq)) continue;
    absorb(track_square(h, sq));
  }
  // Squares of the final slice not reached by any forward trace are tracked
  // backward so the census still explains where they came from.
  for (const auto& sq : finals) {
    if (visited_at(1.0, sq)) continue;
    TrackOptions back;
    back.start_t = 1.0;
    back.initial_direction = -1.0;
    absorb(track_square(h, sq, back));
  }

  // Endpoint consistency at t = 1.
  for (const auto& trace : rep.tracking.traces) {
    if (trace.end_event != TraceEvent::reached_t1) continue;
    const SquareCandidate& endpoint = trace.samples.back().square;
    bool matched = false;
    for (const auto& fin : finals) {
      if (same_square(endpoint, fin, match_tol)) {
        matched = true;
        break;
      }
    }
    if (!matched) rep.end_matches_final = false;
  }
  for (const auto& fin : finals) {
    if (!visited_at(1.0, fin)) rep.end_matches_final = false;
  }
  return rep;
}

}  // namespace isq
