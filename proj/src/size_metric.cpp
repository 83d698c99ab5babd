#include "isq/size_metric.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace isq {

namespace {

constexpr double kGapLimit = kPi - 1e-6;

std::vector<double> lift_with_closure(const std::vector<double>& target_params) {
  std::vector<double> lift = lift_circle_samples(target_params);
  const std::size_t n = target_params.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(lift[i] - lift[i - 1]) >= kGapLimit) {
      throw NumericalError("correspondence: successive target parameters too far apart to lift");
    }
  }
  const double closing = wrap_signed(target_params[0] - target_params[n - 1]);
  if (std::abs(closing) >= kGapLimit) {
    throw NumericalError("correspondence: closing target gap too large to lift");
  }
  lift.push_back(lift[n - 1] + closing);
  return lift;
}

double displacement_of(const PlaneCurve& source, const PlaneCurve& target,
                       const std::vector<double>& source_params,
                       const std::vector<double>& target_params) {
  double worst = 0.0;
  for (std::size_t i = 0; i < source_params.size(); ++i) {
    worst = std::max(worst, dist(source.position(source_params[i]),
                                 target.position(target_params[i])));
  }
  return worst;
}

ParamCorrespondence build_from_samples(std::vector<double> source_params,
                                       std::vector<double> target_params, std::string label,
                                       double max_displacement) {
  ParamCorrespondence corr;
  corr.lift = lift_with_closure(target_params);
  corr.source_params = std::move(source_params);
  corr.target_params = std::move(target_params);
  corr.target_curve_ref = std::move(label);
  corr.max_displacement = max_displacement;
  return corr;
}

/// Target arc-length position of a lifted target parameter.
double arclength_position(const CurveAnalysis& target, double lifted_param) {
  const double winds = std::floor(lifted_param / kTwoPi);
  const double rem = lifted_param - winds * kTwoPi;
  return winds * target.total_length + target.arclength_at(rem);
}

}  // namespace

int ParamCorrespondence::degree() const {
  return static_cast<int>(std::llround((lift.back() - lift.front()) / kTwoPi));
}

double ParamCorrespondence::lifted_at(double u) const {
  const int n = size();
  const double winds = std::floor(u / kTwoPi);
  const double rem = u - winds * kTwoPi;
  const double h = kTwoPi / n;
  int i = std::min(static_cast<int>(rem / h), n - 1);
  const double frac = (rem - i * h) / h;
  const double base = lift[i] + frac * (lift[i + 1] - lift[i]);
  return base + winds * (lift[n] - lift[0]);
}

ParamCorrespondence make_identity_correspondence(const PlaneCurve& curve, int n,
                                                 std::string label) {
  (void)curve;
  if (n < 8) throw FormatError("correspondence grid must have at least 8 samples");
  std::vector<double> params(n);
  for (int i = 0; i < n; ++i) params[i] = kTwoPi * i / n;
  return build_from_samples(params, params, std::move(label), 0.0);
}

ParamCorrespondence make_correspondence(const PlaneCurve& source, const PlaneCurve& target,
                                        const std::function<double(double)>& f, int n,
                                        std::string label) {
  if (n < 8) throw FormatError("correspondence grid must have at least 8 samples");
  auto sample = [&f](int m) {
    std::vector<double> out(m);
    for (int i = 0; i < m; ++i) out[i] = wrap_angle(f(kTwoPi * i / m));
    return out;
  };
  std::vector<double> targets = sample(n);
  ParamCorrespondence corr = build_from_samples(
      [n] {
        std::vector<double> s(n);
        for (int i = 0; i < n; ++i) s[i] = kTwoPi * i / n;
        return s;
      }(),
      targets, label, 0.0);
  // Refine until the interpolated lift stops moving; guards against grids too
  // coarse for the map's variation.
  for (int round = 0; round < 3; ++round) {
    const int m = corr.size() * 2;
    std::vector<double> source_params(m);
    for (int i = 0; i < m; ++i) source_params[i] = kTwoPi * i / m;
    ParamCorrespondence finer =
        build_from_samples(source_params, sample(m), label, 0.0);
    double drift = 0.0, span = 1.0;
    for (int i = 0; i <= corr.size(); ++i) {
      drift = std::max(drift, std::abs(finer.lifted_at(kTwoPi * i / corr.size()) -
                                       corr.lift[i]));
      span = std::max(span, std::abs(corr.lift[i]));
    }
    const bool stable = drift <= 1e-8 * span;
    corr = std::move(finer);
    if (stable) break;
  }
  corr.max_displacement =
      displacement_of(source, target, corr.source_params, corr.target_params);
  return corr;
}

ParamCorrespondence projection_correspondence(const PlaneCurve& source,
                                              const FourierCurve& target, int n,
                                              std::string label, bool reject_ambiguous) {
  return make_correspondence(
      source, target,
      [&](double s) {
        const ProjectionResult pr = nearest_point_projection(target, source.position(s));
        if (reject_ambiguous && pr.ambiguous) {
          throw NumericalError(
              "projection correspondence: ambiguous nearest point (source leaves the target "
              "curve's tubular neighborhood)");
        }
        return pr.s;
      },
      n, std::move(label));
}

double oriented_length(const CurveAnalysis& target, const ParamCorrespondence& corr, double s0,
                       double s1) {
  const double gap = forward_gap(s0, s1);
  if (gap == 0.0) return 0.0;
  const double ua = wrap_angle(s0);
  const double ub = ua + gap;
  return arclength_position(target, corr.lifted_at(ub)) -
         arclength_position(target, corr.lifted_at(ua));
}

double oriented_length(const FourierCurve& target, const ParamCorrespondence& corr, double s0,
                       double s1) {
  return oriented_length(analyze(target), corr, s0, s1);
}

double square_size(const SquareCandidate& square, const CurveAnalysis& target,
                   const ParamCorrespondence& corr) {
  const Params4& nu = square.params;
  double arcs = 0.0;
  for (int i = 0; i < 4; ++i) arcs += forward_gap(nu[i], nu[(i + 1) % 4]);
  // A labeling that follows the source orientation partitions the circle:
  // the four forward gaps sum to 2*pi. A reflected labeling sums to 6*pi.
  if (arcs > kTwoPi + 1e-9) {
    throw FormatError("square_size: params must follow the source orientation");
  }
  double total = 0.0, longest = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double lo = std::abs(oriented_length(target, corr, nu[i], nu[(i + 1) % 4]));
    total += lo;
    longest = std::max(longest, lo);
  }
  return total - longest;
}

double square_size(const SquareCandidate& square, const FourierCurve& target,
                   const ParamCorrespondence& corr) {
  return square_size(square, analyze(target), corr);
}

double square_size_identity(const FourierCurve& curve, const SquareCandidate& square) {
  const Params4& nu = square.params;
  double total = 0.0, longest = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double len = arc_length(curve, nu[i], nu[(i + 1) % 4]);
    total += len;
    longest = std::max(longest, len);
  }
  return total - longest;
}

}  // namespace isq
