#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "isq/geometry.hpp"

namespace isq {

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol);

/// 8-point Gauss-Legendre quadrature over [a, b].
double integrate_gl8(const std::function<double(double)>& f, double a, double b);

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3, clamped to [0,1]; first and
/// second derivatives vanish at both ends (C2 glue for homotopy stages).
inline double smoothstep5(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

struct MinimizeResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section minimization of f over [a, b] down to interval width x_tol.
MinimizeResult minimize_golden(const std::function<double(double)>& f, double a, double b,
                               double x_tol);

/// Small dense linear algebra for the 4-equation square system.
using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

struct LinearSolve4 {
  Vec4 x{};
  bool ok = false;
  double condition = 0.0;  // infinity-norm condition estimate
};

/// Solves A x = b by partial-pivot LU; reports an infinity-norm condition
/// estimate computed from the explicit inverse.
LinearSolve4 solve4(const Mat4& a, const Vec4& b);

inline double norm_inf(const Vec4& v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

inline double norm2_vec4(const Vec4& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

/// Least-squares trigonometric polynomial fit on uniformly sampled periodic
/// data: values[i] = f(2*pi*i/N). Returns cosine/sine coefficients for
/// harmonics 0..K (discrete Fourier projection; exact when f is a trig
/// polynomial of degree <= K and N > 2K).
struct TrigSeries {
  std::vector<double> cos_coef;  // index k
  std::vector<double> sin_coef;  // sin_coef[0] unused

  double eval(double s) const;
  double derivative(double s) const;
};

TrigSeries fit_trig_series(const std::vector<double>& values, int max_harmonic);

}  // namespace isq
