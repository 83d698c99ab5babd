#include "isq/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace isq {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const char* kCurveColors[] = {"#1a1a1a", "#7a7a7a", "#b0b0b0"};
const char* kSquareColors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085"};

}  // namespace

std::string render_svg(const std::vector<const PlaneCurve*>& curves,
                       const std::vector<SquareCandidate>& squares,
                       const std::vector<std::string>& annotations, const SvgOptions& options) {
  const int n = std::max(16, options.curve_samples);
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  const auto grow = [&](Vec2 p) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  };
  for (const PlaneCurve* c : curves) {
    for (int i = 0; i < n; ++i) grow(c->position(kTwoPi * i / n));
  }
  for (const auto& sq : squares) {
    for (const Vec2& v : sq.vertices) grow(v);
  }
  if (!(lo_x <= hi_x)) {  // nothing to draw
    lo_x = lo_y = -1.0;
    hi_x = hi_y = 1.0;
  }
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double scale = options.canvas / (span * 1.1);
  const double half = options.canvas / 2.0;
  const auto map_x = [&](double x) { return half + (x - cx) * scale; };
  const auto map_y = [&](double y) { return half - (y - cy) * scale; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.canvas) +
         "\" height=\"" + std::to_string(options.canvas) + "\" viewBox=\"0 0 " +
         std::to_string(options.canvas) + " " + std::to_string(options.canvas) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const PlaneCurve* c = curves[ci];
    out += "<path d=\"";
    for (int i = 0; i < n; ++i) {
      const Vec2 p = c->position(kTwoPi * i / n);
      out += (i == 0 ? "M" : " L");
      out += fmt(map_x(p.x)) + " " + fmt(map_y(p.y));
    }
    out += " Z\" fill=\"none\" stroke=\"";
    out += kCurveColors[std::min<std::size_t>(ci, 2)];
    out += "\" stroke-width=\"1.5\"/>\n";
  }

  for (std::size_t si = 0; si < squares.size(); ++si) {
    const auto& sq = squares[si];
    out += "<polygon points=\"";
    for (int i = 0; i < 4; ++i) {
      if (i) out += " ";
      out += fmt(map_x(sq.vertices[i].x)) + "," + fmt(map_y(sq.vertices[i].y));
    }
    out += "\" fill=\"none\" stroke=\"";
    out += kSquareColors[si % 6];
    out += "\" stroke-width=\"1.2\"/>\n";
    if (options.labels) {
      Vec2 centroid{0.0, 0.0};
      for (const Vec2& v : sq.vertices) centroid += 0.25 * v;
      out += "<text x=\"" + fmt(map_x(centroid.x)) + "\" y=\"" + fmt(map_y(centroid.y)) +
             "\" font-size=\"12\" font-family=\"monospace\" fill=\"" + kSquareColors[si % 6] +
             "\" text-anchor=\"middle\">side " + fmt(sq.sidelength) + "</text>\n";
    }
  }

  if (options.labels) {
    double y = 18.0;
    for (const std::string& line : annotations) {
      out += "<text x=\"8\" y=\"" + fmt(y) +
             "\" font-size=\"13\" font-family=\"monospace\" fill=\"#1a1a1a\">" + line +
             "</text>\n";
      y += 16.0;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace isq
