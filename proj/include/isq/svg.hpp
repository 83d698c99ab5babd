#pragma once

#include <string>
#include <vector>

#include "isq/curve.hpp"
#include "isq/squares.hpp"

namespace isq {

struct SvgOptions {
  int canvas = 800;         // square canvas, px
  int curve_samples = 512;  // polyline resolution per curve
  bool labels = true;       // sidelength labels and annotation lines
};

/// Deterministic SVG document: fixed canvas, one path per curve, one polygon
/// per square, optional annotation lines in the top-left corner. Identical
/// inputs yield identical bytes (fixed-precision formatting, no timestamps).
std::string render_svg(const std::vector<const PlaneCurve*>& curves,
                       const std::vector<SquareCandidate>& squares,
                       const std::vector<std::string>& annotations,
                       const SvgOptions& options = {});

}  // namespace isq
