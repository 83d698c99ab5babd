#include "isq/io.hpp"

#include <fstream>

#include "isq/size_metric.hpp"

namespace isq {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

double number_at(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw FormatError(std::string("expected numeric field \"") + key + "\"");
  }
  return j[key].get<double>();
}

}  // namespace

CurveVariant curve_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "fourier") {
      const auto& rows = j.at("coeffs");
      if (!rows.is_array() || rows.empty()) throw FormatError("fourier: coeffs must be an array");
      std::vector<Vec2> cos_c, sin_c;
      for (const auto& row : rows) {
        if (!row.is_array() || row.size() != 4) {
          throw FormatError("fourier: each coeffs row is [a_kx, a_ky, b_kx, b_ky]");
        }
        cos_c.push_back({row[0].get<double>(), row[1].get<double>()});
        sin_c.push_back({row[2].get<double>(), row[3].get<double>()});
      }
      return FourierCurve(cos_c, sin_c);
    }
    if (type == "polyline") {
      const auto& pts = j.at("points");
      if (!pts.is_array()) throw FormatError("polyline: points must be an array");
      std::vector<Vec2> vs;
      for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 2) throw FormatError("polyline: each point is [x, y]");
        vs.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return PolylineCurve(std::move(vs));
    }
    throw FormatError("unknown curve type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw FormatError(std::string("curve json: ") + e.what());
  }
}

CurveVariant read_curve_file(const std::filesystem::path& path) {
  return curve_from_json(parse_file(path));
}

json curve_to_json(const FourierCurve& curve) {
  json rows = json::array();
  const auto& cc = curve.cos_coefficients();
  const auto& sc = curve.sin_coefficients();
  for (std::size_t k = 0; k < cc.size(); ++k) {
    rows.push_back({cc[k].x, cc[k].y, sc[k].x, sc[k].y});
  }
  return json{{"type", "fourier"}, {"coeffs", rows}};
}

json curve_to_json(const PolylineCurve& curve) {
  json pts = json::array();
  for (const Vec2& v : curve.vertices()) pts.push_back({v.x, v.y});
  return json{{"type", "polyline"}, {"points", pts}};
}

void write_curve_file(const std::filesystem::path& path, const json& curve) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << curve.dump(2) << "\n";
}

const FourierCurve& expect_fourier(const CurveVariant& v, const std::string& role) {
  if (const auto* c = std::get_if<FourierCurve>(&v)) return *c;
  throw FormatError(role + " must be a fourier curve");
}

const PolylineCurve& expect_polyline(const CurveVariant& v, const std::string& role) {
  if (const auto* c = std::get_if<PolylineCurve>(&v)) return *c;
  throw FormatError(role + " must be a polyline");
}

const PlaneCurve& as_plane_curve(const CurveVariant& v) {
  return std::visit([](const auto& c) -> const PlaneCurve& { return c; }, v);
}

Homotopy read_homotopy_file(const std::filesystem::path& path) {
  const json j = parse_file(path);
  const auto dir = path.parent_path();
  const auto load = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw FormatError(path.string() + ": expected curve path field \"" + key + "\"");
    }
    return read_curve_file(dir / j[key].get<std::string>());
  };
  const std::uint64_t seed = j.value("seed", 2026);
  const std::string kind = j.value("kind", "");
  if (kind == "linear") {
    const CurveVariant a = load("start"), b = load("target");
    return build_linear_homotopy(expect_fourier(a, "start"), expect_fourier(b, "target"), seed);
  }
  if (kind == "two_step") {
    const CurveVariant a = load("beta"), b = load("target");
    const FourierCurve& beta = expect_fourier(a, "beta");
    const FourierCurve& target = expect_fourier(b, "target");
    const double eta =
        j.contains("eta") ? number_at(j, "eta") : 1.0 / (10.0 * max_unsigned_curvature(beta));
    const ParamCorrespondence f = projection_correspondence(target, beta, 512, "beta", true);
    return build_two_step_homotopy(beta, target, f, eta, seed);
  }
  throw FormatError(path.string() + ": unknown homotopy kind \"" + kind + "\"");
}

json to_json(const SquareCandidate& sq) {
  json verts = json::array();
  for (const Vec2& v : sq.vertices) verts.push_back({v.x, v.y});
  return json{{"params", sq.params},
              {"vertices", verts},
              {"residual_norm", sq.residual_norm},
              {"sidelength", sq.sidelength},
              {"orientation",
               sq.orientation == Orientation::counterclockwise ? "counterclockwise" : "clockwise"}};
}

json to_json(const FindReport& report) {
  json squares = json::array();
  for (const auto& sq : report.squares) squares.push_back(to_json(sq));
  return json{{"squares", squares},
              {"count", report.squares.size()},
              {"continuum_warning", report.continuum_warning},
              {"empty_warning", report.empty_warning},
              {"seeds", report.seeds},
              {"converged", report.converged},
              {"degenerate_failures", report.degenerate_failures}};
}

json to_json(const CheckReport& report) {
  json values = json::object();
  for (const auto& [name, value] : report.hypothesis_values) {
    values[name] = std::isfinite(value) ? json(value) : json(nullptr);
  }
  json witnesses = json::array();
  for (const auto& sq : report.witness_squares) witnesses.push_back(to_json(sq));
  return json{{"check", report.check_name},
              {"verdict", to_string(report.verdict)},
              {"margin", report.margin},
              {"tolerance", report.tolerance},
              {"hypothesis_values", values},
              {"witness_squares", witnesses},
              {"notes", report.notes}};
}

json to_json(const TraceSample& sample) {
  return json{{"t", sample.t}, {"square", to_json(sample.square)},
              {"size_wrt_p", sample.size_wrt_p}};
}

json to_json(const ContinuationTrace& trace) {
  json samples = json::array();
  for (const auto& s : trace.samples) samples.push_back(to_json(s));
  return json{{"samples", samples},
              {"start_event", to_string(trace.start_event)},
              {"end_event", to_string(trace.end_event)},
              {"fold_partner", trace.fold_partner},
              {"path_lost", trace.path_lost},
              {"note", trace.note}};
}

json to_json(const TrackResult& result) {
  json traces = json::array();
  for (const auto& t : result.traces) traces.push_back(to_json(t));
  return json{{"traces", traces}};
}

json to_json(const CensusReport& report) {
  json slices = json::array();
  for (const auto& s : report.slices) {
    slices.push_back(json{
        {"t", s.t}, {"count", s.count}, {"sizes_wrt_p", s.sizes_wrt_p}, {"odd", s.odd}});
  }
  return json{{"slices", slices},
              {"tracking", to_json(report.tracking)},
              {"kappa_ref", report.kappa_ref},
              {"band_center", report.band_center},
              {"band_halfwidth", report.band_halfwidth},
              {"min_band_distance",
               std::isfinite(report.min_band_distance) ? json(report.min_band_distance)
                                                       : json(nullptr)},
              {"band_crossed", report.band_crossed},
              {"end_matches_final", report.end_matches_final}};
}

json analysis_to_json(const CurveAnalysis& analysis) {
  return json{{"total_length", analysis.total_length},
              {"max_unsigned_curvature", analysis.max_unsigned_curvature},
              {"sample_count", analysis.sample_count}};
}

std::vector<CheckReport> run_suite(const std::filesystem::path& path) {
  const json j = parse_file(path);
  if (!j.contains("checks") || !j["checks"].is_array()) {
    throw FormatError(path.string() + ": expected {\"checks\": [...]}");
  }
  const auto dir = path.parent_path();
  const auto load = [&](const json& entry, const char* key) {
    if (!entry.contains(key) || !entry[key].is_string()) {
      throw FormatError(std::string("suite entry: expected curve path field \"") + key + "\"");
    }
    return read_curve_file(dir / entry[key].get<std::string>());
  };

  std::vector<CheckReport> reports;
  for (const auto& entry : j["checks"]) {
    const std::string name = entry.value("check", "");
    if (name == "initial_size_bound") {
      reports.push_back(check_initial_size_bound(expect_fourier(load(entry, "curve"), "curve")));
    } else if (name == "chord_bound") {
      reports.push_back(check_chord_bound(expect_fourier(load(entry, "curve"), "curve"),
                                          entry.value("trials", 1000),
                                          entry.value("seed", 7)));
    } else if (name == "no_intermediate") {
      const CurveVariant a = load(entry, "alpha"), b = load(entry, "beta");
      const FourierCurve& alpha = expect_fourier(a, "alpha");
      const FourierCurve& beta = expect_fourier(b, "beta");
      const ParamCorrespondence f = projection_correspondence(alpha, beta, 512, "beta");
      reports.push_back(check_no_intermediate(alpha, beta, f));
    } else if (name == "small_square_bound") {
      const CurveVariant a = load(entry, "alpha"), b = load(entry, "beta");
      const FourierCurve& alpha = expect_fourier(a, "alpha");
      const FourierCurve& beta = expect_fourier(b, "beta");
      const ParamCorrespondence f = projection_correspondence(alpha, beta, 512, "beta");
      for (const auto& sq : find_all_squares(alpha).squares) {
        reports.push_back(check_small_square_bound(alpha, beta, f, sq));
      }
    } else if (name == "main_theorem") {
      const CurveVariant g = load(entry, "gamma"), b = load(entry, "beta");
      reports.push_back(
          certify_main_theorem(expect_fourier(g, "gamma"), expect_polyline(b, "beta")));
    } else if (name == "annulus") {
      const CurveVariant b = load(entry, "beta");
      reports.push_back(annulus_scenario(number_at(entry, "r"), number_at(entry, "R"),
                                         expect_polyline(b, "beta")));
    } else {
      throw FormatError("suite: unknown check \"" + name + "\"");
    }
  }
  return reports;
}

}  // namespace isq
