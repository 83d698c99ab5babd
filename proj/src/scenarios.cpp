#include "isq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "isq/numerics.hpp"

namespace isq {

namespace {

// Peanut geometry: lobe centers (+-d, 0), junction at polar angle pi - psi on
// the right lobe. psi = 1 keeps the bridge half-width monotone down to necks
// well below 0.1 and the bridge curvature at the junction value 1.
constexpr double kLobeOffset = 2.2;
constexpr double kJunctionAngle = 1.0;

/// Even sextic bridge half-width p(x) = c0 + c2 x^2 + c4 x^4 + c6 x^6.
struct BridgePoly {
  double c0 = 0.0, c2 = 0.0, c4 = 0.0, c6 = 0.0;
  double eval(double x) const {
    const double x2 = x * x;
    return c0 + x2 * (c2 + x2 * (c4 + x2 * c6));
  }
  double deriv(double x) const {
    const double x2 = x * x;
    return x * (2.0 * c2 + x2 * (4.0 * c4 + 6.0 * c6 * x2));
  }
};

/// c0 = neck/2 given; c2, c4, c6 from the C2 junction conditions (value,
/// slope, second derivative of the circle graph at x_j).
BridgePoly solve_bridge(double neck, double xj, double yj, double slope, double second) {
  const double x2 = xj * xj, x4 = x2 * x2, x6 = x4 * x2;
  double a[3][4] = {{x2, x4, x6, yj - neck / 2.0},
                    {2.0 * xj, 4.0 * xj * x2, 6.0 * xj * x4, slope},
                    {2.0, 12.0 * x2, 30.0 * x4, second}};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    for (int k = 0; k < 4; ++k) std::swap(a[c][k], a[piv][k]);
    for (int r = c + 1; r < 3; ++r) {
      const double m = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= m * a[c][k];
    }
  }
  double s[3];
  for (int r = 2; r >= 0; --r) {
    s[r] = a[r][3];
    for (int k = r + 1; k < 3; ++k) s[r] -= a[r][k] * s[k];
    s[r] /= a[r][r];
  }
  return {neck / 2.0, s[0], s[1], s[2]};
}

FourierCurve fit_closed_chain(const std::vector<Vec2>& chain, int samples, int harmonics,
                              double* max_fit_error = nullptr) {
  const std::size_t n = chain.size();
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + dist(chain[i], chain[(i + 1) % n]);
  const double total = cum[n];
  std::vector<double> xs(samples), ys(samples);
  std::size_t j = 0;
  for (int i = 0; i < samples; ++i) {
    const double target = total * i / samples;
    while (j + 1 <= n && cum[j + 1] < target) ++j;
    const double seg = std::max(1e-300, cum[j + 1] - cum[j]);
    const double w = (target - cum[j]) / seg;
    const Vec2 p = (1.0 - w) * chain[j] + w * chain[(j + 1) % n];
    xs[i] = p.x;
    ys[i] = p.y;
  }
  const TrigSeries fx = fit_trig_series(xs, harmonics);
  const TrigSeries fy = fit_trig_series(ys, harmonics);
  std::vector<Vec2> cos_c(harmonics + 1), sin_c(harmonics + 1);
  for (int k = 0; k <= harmonics; ++k) {
    cos_c[k] = {fx.cos_coef[k], fy.cos_coef[k]};
    sin_c[k] = {fx.sin_coef[k], fy.sin_coef[k]};
  }
  FourierCurve out(cos_c, sin_c);
  if (max_fit_error) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      worst = std::max(worst, dist(out.position(kTwoPi * i / samples), {xs[i], ys[i]}));
    }
    *max_fit_error = worst;
  }
  return out;
}

}  // namespace

FourierCurve make_peanut(double neck, int harmonics) {
  const double d = kLobeOffset, psi = kJunctionAngle;
  const double xj = d - std::cos(psi), yj = std::sin(psi);
  if (!(neck > 0.0) || neck / 2.0 >= yj) {
    throw FormatError("make_peanut: neck must lie in (0, 2 sin(junction angle))");
  }
  const double slope = std::cos(psi) / std::sin(psi);
  const double second = -1.0 / std::pow(std::sin(psi), 3);
  const BridgePoly br = solve_bridge(neck, xj, yj, slope, second);

  for (int i = 0; i <= 2000; ++i) {
    const double x = xj * i / 2000.0;
    if (br.eval(x) <= 0.0 || (i > 0 && br.deriv(x) < -1e-9)) {
      throw NumericalError("make_peanut: bridge half-width not positive and monotone");
    }
  }

  std::vector<Vec2> chain;
  const int ml = 6000, mb = 6000;
  const double thj = kPi - psi;
  chain.reserve(5 * static_cast<std::size_t>(ml) + 2 * mb);
  for (int i = 0; i < ml; ++i) {  // right lobe, theta in [0, pi - psi)
    const double th = thj * i / ml;
    chain.push_back({d + std::cos(th), std::sin(th)});
  }
  for (int i = 0; i < mb; ++i) {  // top bridge, x_j -> -x_j
    const double x = xj - 2.0 * xj * i / mb;
    chain.push_back({x, br.eval(x)});
  }
  for (int i = 0; i < 2 * ml; ++i) {  // left lobe, angle psi -> 2 pi - psi
    const double th = psi + (kTwoPi - 2.0 * psi) * i / (2 * ml);
    chain.push_back({-d + std::cos(th), std::sin(th)});
  }
  for (int i = 0; i < mb; ++i) {  // bottom bridge, -x_j -> x_j
    const double x = -xj + 2.0 * xj * i / mb;
    chain.push_back({x, -br.eval(x)});
  }
  for (int i = 0; i < ml; ++i) {  // right lobe, pi + psi -> 2 pi
    const double th = kPi + psi + thj * i / ml;
    chain.push_back({d + std::cos(th), std::sin(th)});
  }

  double fit_error = 0.0;
  FourierCurve peanut = fit_closed_chain(chain, 4096, harmonics, &fit_error);
  // The neck is the tightest feature; a truncated fit quietly fills it in and
  // changes the square census, so reject rather than return an approximation.
  if (fit_error > 0.02 * neck) {
    throw NumericalError("make_peanut: " + std::to_string(harmonics) +
                         " harmonics leave fit error " + std::to_string(fit_error) +
                         "; raise the harmonic budget");
  }
  if (!is_simple(peanut, 1024)) {
    throw NumericalError("make_peanut: fitted curve is not simple");
  }
  return peanut;
}

PolylineCurve make_annulus_star(double r, double R, int points, std::uint64_t seed) {
  if (!(r > 0.0) || !(R > r)) throw FormatError("make_annulus_star: need 0 < r < R");
  if (points < 8) throw FormatError("make_annulus_star: need at least 8 points");
  Rng rng(seed);
  const double phase = rng.uniform(0.0, kTwoPi);
  const double c = 0.5 * (r + R);
  const double a = 0.38 * (R - r);
  std::vector<Vec2> vs(points);
  for (int k = 0; k < points; ++k) {
    const double th = kTwoPi * k / points;
    const double rad = c + a * std::cos(5.0 * th + phase);
    vs[k] = {rad * std::cos(th), rad * std::sin(th)};
  }
  return PolylineCurve(std::move(vs));
}

PolylineCurve make_noisy_polyline(const FourierCurve& base, int points, double amplitude,
                                  std::uint64_t seed) {
  if (points < 3) throw FormatError("make_noisy_polyline: need at least 3 points");
  Rng rng(seed);
  std::vector<Vec2> vs(points);
  for (int k = 0; k < points; ++k) {
    const double s = kTwoPi * k / points;
    const Vec2 p = base.position(s);
    const double pn = norm(p);
    // Radial noise; a point too close to the origin falls back to the normal.
    const Vec2 dir = (pn > 1e-9) ? (1.0 / pn) * p : base.unit_normal(s);
    vs[k] = p + rng.uniform(-amplitude, amplitude) * dir;
  }
  PolylineCurve poly(std::move(vs));
  if (!is_simple(poly)) {
    throw NumericalError("make_noisy_polyline: generated polyline is not simple");
  }
  return poly;
}

}  // namespace isq
