#include "isq/squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace isq {

namespace {

constexpr double kDegenerateCondition = 1e12;

std::array<Vec2, 4> positions(const PlaneCurve& curve, const Params4& s) {
  return {curve.position(s[0]), curve.position(s[1]), curve.position(s[2]),
          curve.position(s[3])};
}

Vec4 residual_from_points(const std::array<Vec2, 4>& p) {
  const Vec2 mid = p[0] + p[2] - p[1] - p[3];
  const Vec2 d13 = p[2] - p[0];
  const Vec2 d24 = p[3] - p[1];
  return {mid.x, mid.y, dot(d13, d24), norm2(d13) - norm2(d24)};
}

double scaled_norm(const PlaneCurve& curve, const Params4& s, double scale) {
  Vec4 f = residual_from_points(positions(curve, s));
  f[2] /= scale;
  f[3] /= scale;
  return norm_inf(f);
}

Params4 wrapped(const Params4& s) {
  return {wrap_angle(s[0]), wrap_angle(s[1]), wrap_angle(s[2]), wrap_angle(s[3])};
}

}  // namespace

Vec4 square_residual(const PlaneCurve& curve, const Params4& s) {
  return residual_from_points(positions(curve, s));
}

SquareSystem square_system(const PlaneCurve& curve, const Params4& s, double length_scale) {
  SquareSystem out;
  const auto p = positions(curve, s);
  const std::array<Vec2, 4> v = {curve.velocity(s[0]), curve.velocity(s[1]),
                                 curve.velocity(s[2]), curve.velocity(s[3])};
  const double inv = 1.0 / length_scale;
  out.f = residual_from_points(p);
  out.f[2] *= inv;
  out.f[3] *= inv;
  const Vec2 d13 = p[2] - p[0];
  const Vec2 d24 = p[3] - p[1];
  out.j[0] = {v[0].x, -v[1].x, v[2].x, -v[3].x};
  out.j[1] = {v[0].y, -v[1].y, v[2].y, -v[3].y};
  out.j[2] = {-dot(v[0], d24) * inv, -dot(d13, v[1]) * inv, dot(v[2], d24) * inv,
              dot(d13, v[3]) * inv};
  out.j[3] = {-2.0 * dot(d13, v[0]) * inv, 2.0 * dot(d24, v[1]) * inv,
              2.0 * dot(d13, v[2]) * inv, -2.0 * dot(d24, v[3]) * inv};
  return out;
}

SquareCandidate make_candidate(const PlaneCurve& curve, Params4 s, double residual_norm) {
  s = wrapped(s);
  std::array<std::pair<double, int>, 4> order;
  for (int i = 0; i < 4; ++i) order[i] = {s[i], i};
  std::sort(order.begin(), order.end());
  // Diagonal pairs (0,2) and (1,3) interleave along a Jordan curve (crossing
  // chords have interleaved endpoints); keep the raw labeling if numerics
  // broke the alternation (degenerate squares).
  bool alternates = true;
  for (int k = 0; k < 3; ++k) {
    if (order[k].second % 2 == order[k + 1].second % 2) alternates = false;
  }
  SquareCandidate c;
  if (alternates) {
    for (int k = 0; k < 4; ++k) c.params[k] = order[k].first;
  } else {
    c.params = s;
  }
  for (int k = 0; k < 4; ++k) c.vertices[k] = curve.position(c.params[k]);
  c.residual_norm = residual_norm;
  c.sidelength = dist(c.vertices[2], c.vertices[1]);
  double area2 = 0.0;
  for (int k = 0; k < 4; ++k) area2 += cross(c.vertices[k], c.vertices[(k + 1) % 4]);
  c.orientation = (area2 >= 0.0) ? Orientation::counterclockwise : Orientation::clockwise;
  return c;
}

bool same_square(const SquareCandidate& a, const SquareCandidate& b, double tol) {
  for (int shift = 0; shift < 4; ++shift) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
      worst = std::max(worst, dist(a.vertices[i], b.vertices[(i + shift) % 4]));
    }
    if (worst <= tol) return true;
  }
  return false;
}

RefineResult newton_refine(const PlaneCurve& curve, Params4 seed, double tol, int max_iter) {
  const double L = curve.total_length();
  if (tol <= 0.0) tol = 1e-11 * L;
  const double scale = L / kTwoPi;
  Params4 s = wrapped(seed);

  RefineResult out;
  double fn = scaled_norm(curve, s, scale);
  double last_condition = 0.0;

  for (int iter = 0; iter <= max_iter; ++iter) {
    if (fn <= tol) {
      out.status = RefineStatus::converged;
      out.iterations = iter;
      const SquareSystem sys = square_system(curve, s, scale);
      const auto probe = solve4(sys.j, Vec4{});
      out.condition = probe.ok ? probe.condition : std::numeric_limits<double>::infinity();
      out.candidate = make_candidate(curve, s, fn);
      return out;
    }
    if (iter == max_iter) break;

    const SquareSystem sys = square_system(curve, s, scale);
    Vec4 rhs;
    for (int k = 0; k < 4; ++k) rhs[k] = -sys.f[k];
    const auto newton = solve4(sys.j, rhs);
    last_condition = newton.ok ? newton.condition : std::numeric_limits<double>::infinity();

    bool stepped = false;
    if (newton.ok && newton.condition <= kDegenerateCondition) {
      double damp = 1.0;
      for (int k = 0; k < 14 && !stepped; ++k, damp *= 0.5) {
        Params4 trial;
        for (int i = 0; i < 4; ++i) trial[i] = wrap_angle(s[i] + damp * newton.x[i]);
        const double fnt = scaled_norm(curve, trial, scale);
        if (fnt < fn * (1.0 - 1e-4 * damp)) {
          s = trial;
          fn = fnt;
          stepped = true;
        }
      }
    }
    if (!stepped) {
      // Levenberg-Marquardt rescue: (J^T J + lambda mu I) d = -J^T f. Handles
      // the rank-deficient Jacobians of square continua where Newton fails.
      Mat4 jtj{};
      Vec4 jtf{};
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          double acc = 0.0;
          for (int k = 0; k < 4; ++k) acc += sys.j[k][r] * sys.j[k][c];
          jtj[r][c] = acc;
        }
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += sys.j[k][r] * sys.f[k];
        jtf[r] = acc;
      }
      double mu = (jtj[0][0] + jtj[1][1] + jtj[2][2] + jtj[3][3]) / 4.0;
      if (!(mu > 0.0)) mu = 1.0;
      for (double lam : {1e-8, 1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4, 1e6}) {
        Mat4 a = jtj;
        for (int d = 0; d < 4; ++d) a[d][d] += lam * mu;
        Vec4 b;
        for (int k = 0; k < 4; ++k) b[k] = -jtf[k];
        const auto lm = solve4(a, b);
        if (!lm.ok) continue;
        Params4 trial;
        for (int i = 0; i < 4; ++i) trial[i] = wrap_angle(s[i] + lm.x[i]);
        const double fnt = scaled_norm(curve, trial, scale);
        if (fnt < fn * (1.0 - 1e-9)) {
          s = trial;
          fn = fnt;
          stepped = true;
          break;
        }
      }
    }
    if (!stepped) {
      out.status = (last_condition > kDegenerateCondition) ? RefineStatus::degenerate_jacobian
                                                           : RefineStatus::no_convergence;
      out.iterations = iter;
      out.condition = last_condition;
      return out;
    }
  }
  out.status = RefineStatus::no_convergence;
  out.iterations = max_iter;
  out.condition = last_condition;
  return out;
}

// ---------------------------------------------------------------------------
// Seeding

namespace {

struct DiagonalGrid {
  int n = 0;
  std::vector<Vec2> pts;
  std::vector<double> score;  // n*n, infinity where excluded

  double at(int i, int j) const { return score[static_cast<std::size_t>(i) * n + j]; }

  bool local_min(int i, int j) const {
    const double v = at(i, j);
    if (!std::isfinite(v)) return false;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        if (at((i + di + n) % n, (j + dj + n) % n) < v) return false;
      }
    }
    return true;
  }
};

/// Constructed far vertices of the square whose diagonal is (p1, p3):
/// p2 = c + R(-90)(p3 - c), p4 = c + R(+90)(p3 - c). On a counterclockwise
/// curve this labeling comes out counterclockwise.
std::pair<Vec2, Vec2> diagonal_square(Vec2 p1, Vec2 p3) {
  const Vec2 c = 0.5 * (p1 + p3);
  const Vec2 h = p3 - c;
  return {c + rot90cw(h), c + rot90ccw(h)};
}

/// dist_cap truncates the two distance queries. Any cell where either query
/// hits the cap scores at least cap^2, so with cap >= sqrt(score_thresh) the
/// sub-threshold cells and their local-minimum status come out exactly as
/// with unbounded queries, while far cells stop paying for the full ring walk.
DiagonalGrid score_diagonals(const PlaneCurve& curve, int n, const SampledCurve& dense,
                             double dist_cap) {
  DiagonalGrid g;
  g.n = n;
  g.pts.resize(n);
  for (int i = 0; i < n; ++i) g.pts[i] = curve.position(kTwoPi * i / n);
  g.score.assign(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int d = std::abs(i - j);
      if (std::min(d, n - d) < 2) continue;  // segment-degenerate diagonal
      const auto [p2, p4] = diagonal_square(g.pts[i], g.pts[j]);
      const double d2 = dense.distance(p2, dist_cap);
      const double d4 = dense.distance(p4, dist_cap);
      g.score[static_cast<std::size_t>(i) * n + j] = d2 * d2 + d4 * d4;
    }
  }
  return g;
}

}  // namespace

std::vector<Params4> diagonal_seed_search(const PlaneCurve& curve, int grid_n) {
  if (grid_n < 16) throw FormatError("diagonal_seed_search: grid_n must be >= 16");
  const double L = curve.total_length();
  const SampledCurve dense(curve, std::max(512, 8 * grid_n));
  const double thresh = 1.5 * L / grid_n;
  const DiagonalGrid g = score_diagonals(curve, grid_n, dense, 2.0 * thresh);
  const double score_thresh = 2.0 * thresh * thresh;

  std::vector<Params4> seeds;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      if (g.at(i, j) > score_thresh || !g.local_min(i, j)) continue;
      const auto [p2, p4] = diagonal_square(g.pts[i], g.pts[j]);
      seeds.push_back({kTwoPi * i / grid_n, dense.nearest_param(p2), kTwoPi * j / grid_n,
                       dense.nearest_param(p4)});
    }
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// find_all_squares

namespace {

struct Accepted {
  SquareCandidate cand;
  double condition = 0.0;
};

FindReport assemble_report(std::vector<Accepted> found, double L, double min_sidelength,
                           bool warn_when_empty) {
  FindReport rep;
  const double dedup_tol = 1e-6 * L;
  std::vector<Accepted> kept;
  for (auto& a : found) {
    if (a.cand.orientation != Orientation::counterclockwise) continue;
    if (a.cand.sidelength < min_sidelength) continue;
    bool dup = false;
    for (auto& k : kept) {
      if (same_square(a.cand, k.cand, dedup_tol)) {
        if (a.cand.residual_norm < k.cand.residual_norm) k = a;
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(a);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Accepted& a, const Accepted& b) { return a.cand.params[0] < b.cand.params[0]; });
  for (const auto& k : kept) {
    rep.squares.push_back(k.cand);
    if (k.condition > kDegenerateCondition) rep.continuum_warning = true;
  }
  rep.empty_warning = warn_when_empty && rep.squares.empty();
  return rep;
}

}  // namespace

FindReport find_all_squares(const PlaneCurve& curve, const FindConfig& config) {
  const double L = curve.total_length();
  const int grid = (config.grid_n > 0) ? config.grid_n : 64;
  const double tol = (config.tol > 0.0) ? config.tol : 1e-11 * L;
  const double min_side = (config.min_sidelength > 0.0) ? config.min_sidelength : 1e-6 * L;

  const auto seeds = diagonal_seed_search(curve, grid);
  std::vector<Accepted> found;
  int converged = 0, degenerate = 0;
  for (const auto& seed : seeds) {
    const RefineResult r = newton_refine(curve, seed, tol);
    if (r.status == RefineStatus::converged) {
      ++converged;
      found.push_back({r.candidate, r.condition});
    } else if (r.status == RefineStatus::degenerate_jacobian) {
      ++degenerate;
    }
  }
  FindReport rep = assemble_report(std::move(found), L, min_side, /*warn_when_empty=*/true);
  rep.seeds = static_cast<int>(seeds.size());
  rep.converged = converged;
  rep.degenerate_failures = degenerate;
  return rep;
}

FindReport find_all_squares(const PolylineCurve& curve, const FindConfig& config) {
  const double L = curve.total_length();
  const int grid =
      (config.grid_n > 0) ? config.grid_n : std::max<int>(16, 2 * static_cast<int>(curve.size()));
  const double tol = (config.tol > 0.0) ? config.tol : 1e-9 * L;
  const double min_side = (config.min_sidelength > 0.0) ? config.min_sidelength : 1e-6 * L;
  const double scale = L / kTwoPi;

  const auto seeds = diagonal_seed_search(curve, grid);

  // Derivative-free refinement over the diagonal (u1, u3): score the two
  // constructed vertices by squared distance to the polygon; no curve
  // derivative enters (corners break the Newton Jacobian). Wherever the
  // nearest-edge assignments of all four points are constant the objective is
  // exactly quadratic, so a six-point interpolated model recovers it exactly
  // and the trust-region step lands on the in-piece minimum directly. A plain
  // compass search stalls at the creases between pieces on jagged polygons.
  const auto objective = [&curve](double u1, double u3) {
    const auto [p2, p4] = diagonal_square(curve.position(wrap_angle(u1)),
                                          curve.position(wrap_angle(u3)));
    const auto pr2 = curve.project(p2);
    const auto pr4 = curve.project(p4);
    return pr2.distance * pr2.distance + pr4.distance * pr4.distance;
  };

  std::vector<Accepted> found;
  int converged = 0;
  for (const auto& seed : seeds) {
    double u1 = seed[0], u3 = seed[2];
    double g = objective(u1, u3);
    double delta = 0.25 * kTwoPi / grid;
    for (int iter = 0; iter < 120 && delta > 1e-14 && g > 1e-4 * tol * tol; ++iter) {
      const double f_px = objective(u1 + delta, u3);
      const double f_mx = objective(u1 - delta, u3);
      const double f_py = objective(u1, u3 + delta);
      const double f_my = objective(u1, u3 - delta);
      const double f_xy = objective(u1 + delta, u3 + delta);
      const double gx = (f_px - f_mx) / (2.0 * delta);
      const double gy = (f_py - f_my) / (2.0 * delta);
      const double hxx = (f_px - 2.0 * g + f_mx) / (delta * delta);
      const double hyy = (f_py - 2.0 * g + f_my) / (delta * delta);
      const double hxy = (f_xy - f_px - f_py + g) / (delta * delta);
      const double det = hxx * hyy - hxy * hxy;
      double sx = 0.0, sy = 0.0;
      if (det > 0.0 && hxx > 0.0) {
        sx = -(hyy * gx - hxy * gy) / det;
        sy = -(hxx * gy - hxy * gx) / det;
      } else {
        const double gn = std::hypot(gx, gy);
        if (gn > 0.0) {
          sx = -gx / gn * delta;
          sy = -gy / gn * delta;
        }
      }
      const double sn = std::hypot(sx, sy);
      const double cap = 8.0 * delta;  // don't trust the model past the samples
      if (sn > cap) {
        sx *= cap / sn;
        sy *= cap / sn;
      }
      bool accepted = false;
      if (sn > 0.0) {
        const double trial = objective(u1 + sx, u3 + sy);
        if (trial < g) {
          u1 = wrap_angle(u1 + sx);
          u3 = wrap_angle(u3 + sy);
          g = trial;
          accepted = true;
        }
      }
      if (!accepted) {
        const double best = std::min({f_px, f_mx, f_py, f_my});
        if (best < g) {
          if (best == f_px) {
            u1 = wrap_angle(u1 + delta);
          } else if (best == f_mx) {
            u1 = wrap_angle(u1 - delta);
          } else if (best == f_py) {
            u3 = wrap_angle(u3 + delta);
          } else {
            u3 = wrap_angle(u3 - delta);
          }
          g = best;
        } else {
          delta *= 0.5;
        }
      }
    }
    const auto [p2, p4] = diagonal_square(curve.position(u1), curve.position(u3));
    const Params4 s = {u1, curve.project(p2).u, u3, curve.project(p4).u};
    const double rn = scaled_norm(curve, s, scale);
    if (rn <= tol) {
      ++converged;
      found.push_back({make_candidate(curve, s, rn), 0.0});
    }
  }
  FindReport rep = assemble_report(std::move(found), L, min_side, /*warn_when_empty=*/false);
  rep.seeds = static_cast<int>(seeds.size());
  rep.converged = converged;
  return rep;
}

std::vector<SquareCandidate> brute_force_oracle(const PlaneCurve& curve, int grid_n) {
  if (grid_n < 16) throw FormatError("brute_force_oracle: grid_n must be >= 16");
  const double L = curve.total_length();
  const double scale = L / kTwoPi;
  const SampledCurve dense(curve, std::max(512, 8 * grid_n));
  const double thresh = 3.0 * L / grid_n;  // looser than the seed search
  const DiagonalGrid g = score_diagonals(curve, grid_n, dense, 2.0 * thresh);
  const double score_thresh = 2.0 * thresh * thresh;

  const auto q_value = [&](const Params4& s) {
    Vec4 f = residual_from_points(positions(curve, s));
    f[2] /= scale;
    f[3] /= scale;
    double q = 0.0;
    for (double c : f) q += c * c;
    return q;
  };

  std::vector<Accepted> found;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      if (g.at(i, j) > score_thresh || !g.local_min(i, j)) continue;
      const auto [p2, p4] = diagonal_square(g.pts[i], g.pts[j]);
      Params4 s = {kTwoPi * i / grid_n, dense.nearest_param(p2), kTwoPi * j / grid_n,
                   dense.nearest_param(p4)};
      // Cyclic coordinate descent with a shrinking step; positions only.
      double q = q_value(s);
      double h = 0.5 * kTwoPi / grid_n;
      int sweeps = 0;
      while (h > 1e-11 && sweeps < 500) {
        ++sweeps;
        bool improved = false;
        for (int k = 0; k < 4; ++k) {
          for (int sign = -1; sign <= 1; sign += 2) {
            Params4 trial = s;
            trial[k] = wrap_angle(s[k] + sign * h);
            const double qt = q_value(trial);
            if (qt < q) {
              s = trial;
              q = qt;
              improved = true;
            }
          }
        }
        if (!improved) h *= 0.5;
      }
      const double rn = scaled_norm(curve, s, scale);
      if (rn <= 1e-8 * L) found.push_back({make_candidate(curve, s, rn), 0.0});
    }
  }
  return assemble_report(std::move(found), L, 1e-6 * L, /*warn_when_empty=*/false).squares;
}

}  // namespace isq
