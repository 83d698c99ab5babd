#include "isq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace isq {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
  if (a == b) return 0.0;
  // Seed with 8 panels so symmetric integrands do not fool the error estimate.
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double x0 = a + i * h;
    const double x1 = x0 + h;
    const double xm = 0.5 * (x0 + x1);
    const double f0 = f(x0), f1 = f(x1), fm = f(xm);
    const double whole = simpson(x0, f0, x1, f1, fm);
    total += adaptive_step(f, x0, f0, x1, f1, xm, fm, whole, abs_tol / kPanels, 48);
  }
  return total;
}

double integrate_gl8(const std::function<double(double)>& f, double a, double b) {
  static constexpr double kNodes[8] = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr double kWeights[8] = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) sum += kWeights[i] * f(c + hw * kNodes[i]);
  return hw * sum;
}

MinimizeResult minimize_golden(const std::function<double(double)>& f, double a, double b,
                               double x_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

LinearSolve4 solve4(const Mat4& a, const Vec4& b) {
  LinearSolve4 out;
  // Augment with the identity so the inverse falls out of the elimination.
  double m[4][8];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      m[i][j] = a[i][j];
      m[i][4 + j] = (i == j) ? 1.0 : 0.0;
    }
  }
  Vec4 rhs = b;

  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (m[piv][col] == 0.0) {
      out.ok = false;
      out.condition = std::numeric_limits<double>::infinity();
      return out;
    }
    if (piv != col) {
      for (int j = 0; j < 8; ++j) std::swap(m[piv][j], m[col][j]);
      std::swap(rhs[piv], rhs[col]);
    }
    const double inv_p = 1.0 / m[col][col];
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double factor = m[r][col] * inv_p;
      if (factor == 0.0) continue;
      for (int j = col; j < 8; ++j) m[r][j] -= factor * m[col][j];
      rhs[r] -= factor * rhs[col];
    }
  }
  double norm_a = 0.0, norm_inv = 0.0;
  for (int i = 0; i < 4; ++i) {
    double ra = 0.0, ri = 0.0;
    for (int j = 0; j < 4; ++j) {
      ra += std::abs(a[i][j]);
      ri += std::abs(m[i][4 + j] / m[i][i]);
    }
    norm_a = std::max(norm_a, ra);
    norm_inv = std::max(norm_inv, ri);
  }
  for (int i = 0; i < 4; ++i) out.x[i] = rhs[i] / m[i][i];
  out.condition = norm_a * norm_inv;
  out.ok = std::isfinite(out.condition);
  return out;
}

double TrigSeries::eval(double s) const {
  double v = cos_coef.empty() ? 0.0 : cos_coef[0];
  for (std::size_t k = 1; k < cos_coef.size(); ++k) {
    v += cos_coef[k] * std::cos(k * s) + sin_coef[k] * std::sin(k * s);
  }
  return v;
}

double TrigSeries::derivative(double s) const {
  double v = 0.0;
  for (std::size_t k = 1; k < cos_coef.size(); ++k) {
    v += k * (-cos_coef[k] * std::sin(k * s) + sin_coef[k] * std::cos(k * s));
  }
  return v;
}

TrigSeries fit_trig_series(const std::vector<double>& values, int max_harmonic) {
  const int n = static_cast<int>(values.size());
  TrigSeries out;
  out.cos_coef.assign(max_harmonic + 1, 0.0);
  out.sin_coef.assign(max_harmonic + 1, 0.0);
  for (int k = 0; k <= max_harmonic; ++k) {
    double ck = 0.0, sk = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = kTwoPi * i / n;
      ck += values[i] * std::cos(k * s);
      sk += values[i] * std::sin(k * s);
    }
    const double scale = (k == 0) ? 1.0 / n : 2.0 / n;
    out.cos_coef[k] = ck * scale;
    out.sin_coef[k] = (k == 0) ? 0.0 : sk * scale;
  }
  return out;
}

}  // namespace isq
