#pragma once

#include <cstdint>

#include "isq/curve.hpp"

namespace isq {

/// Peanut: two unit-circle lobes centered at (+-2.2, 0) joined by a smooth
/// neck of the given full width, fitted as a trigonometric polynomial over an
/// arc-length-uniform resampling. The bridge is an even sextic matched C2 to
/// the lobes, so the construction (and its fit) is C2 with max curvature
/// barely above the lobes' 1; the neck carries an inscribed square of
/// sidelength roughly the neck width while every square's identity size stays
/// large. Throws NumericalError when the requested neck breaks the bridge
/// (non-positive or non-monotone half-width) or the fit is not simple.
FourierCurve make_peanut(double neck = 0.1, int harmonics = 128);

/// Star-shaped polyline around the origin staying strictly inside the
/// annulus r <= |p| <= R: vertex radii c + a cos(5 theta + phase) with
/// c = (r + R)/2, a = 0.38 (R - r), phase seeded.
PolylineCurve make_annulus_star(double r, double R, int points = 60, std::uint64_t seed = 1);

/// Closed polyline sampling of a smooth base curve with independent radial
/// noise, uniform in [-amplitude, amplitude], at every vertex. Every vertex
/// stays within `amplitude` of the base curve. Throws NumericalError if the
/// result is not simple.
PolylineCurve make_noisy_polyline(const FourierCurve& base, int points, double amplitude,
                                  std::uint64_t seed);

}  // namespace isq
