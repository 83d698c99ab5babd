#pragma once

#include <functional>
#include <string>
#include <vector>

#include "isq/curve.hpp"
#include "isq/squares.hpp"

namespace isq {

/// Discretized correspondence between two parameter circles: a uniform grid
/// on the source circle and the matching target parameters (the map f, or a
/// homotopy's P(., t), pulled back to parameters). Immutable once built.
struct ParamCorrespondence {
  std::vector<double> source_params;  // uniform grid, size n, on [0, 2*pi)
  std::vector<double> target_params;  // wrapped matching parameters, size n
  /// Continuous lift of target_params with the closing increment appended:
  /// size n+1, lift[n] - lift[0] = 2*pi * degree.
  std::vector<double> lift;
  std::string target_curve_ref;
  /// max over the grid of |source point - target point| in the plane,
  /// recomputed by the builders (delta / eta of the displacement bounds).
  double max_displacement = 0.0;

  int size() const { return static_cast<int>(source_params.size()); }
  int degree() const;
  /// Lift interpolated linearly at any real source parameter; unrolls
  /// periodically, so lifted_at(u + 2*pi) = lifted_at(u) + 2*pi*degree.
  double lifted_at(double u) const;
};

/// Identity map s -> s on one curve; displacement 0.
ParamCorrespondence make_identity_correspondence(const PlaneCurve& curve, int n = 512,
                                                 std::string label = "identity");

/// Builds a correspondence from a parameter map f (source param -> target
/// param). The grid starts at n samples and doubles (up to 8x) until the
/// interpolated lift is stable to 1e-8 relative. Throws NumericalError when
/// successive target gaps reach pi (lift ambiguity).
ParamCorrespondence make_correspondence(const PlaneCurve& source, const PlaneCurve& target,
                                        const std::function<double(double)>& f, int n = 512,
                                        std::string label = {});

/// f = nearest-point projection of source points onto the target curve.
/// With reject_ambiguous set, a projection with two competing minima
/// (source leaves the target's tube) throws NumericalError.
ParamCorrespondence projection_correspondence(const PlaneCurve& source,
                                              const FourierCurve& target, int n = 512,
                                              std::string label = {},
                                              bool reject_ambiguous = false);

/// Oriented length L_o of the image of the forward source arc (s0 -> s1)
/// under the correspondence: signed arc-length travel along the target,
/// forward positive, backward negative. Computed as the difference of target
/// arc-length positions at the lifted arc endpoints, which equals the
/// segmentwise signed sum for piecewise-monotone images. s0 == s1 is the
/// empty arc (0).
double oriented_length(const CurveAnalysis& target, const ParamCorrespondence& corr, double s0,
                       double s1);
double oriented_length(const FourierCurve& target, const ParamCorrespondence& corr, double s0,
                       double s1);

/// Size of a quadrilateral inscribed in the source curve, with respect to the
/// correspondence: the source circle splits into four arcs between
/// consecutive params; size = min over the four choices of excluded arc of
/// the sum of the other three |L_o|. Params must follow the source
/// orientation (any cyclic shift accepted, reflections rejected).
double square_size(const SquareCandidate& square, const CurveAnalysis& target,
                   const ParamCorrespondence& corr);
double square_size(const SquareCandidate& square, const FourierCurve& target,
                   const ParamCorrespondence& corr);

/// Identity-map specialization: every |L_o| is the plain arc length on the
/// curve itself, so size = total_length - longest of the four arcs.
double square_size_identity(const FourierCurve& curve, const SquareCandidate& square);

}  // namespace isq
