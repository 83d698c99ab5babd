#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "isq/continuation.hpp"
#include "isq/curve.hpp"
#include "isq/squares.hpp"
#include "isq/verify.hpp"

namespace isq {

using CurveVariant = std::variant<FourierCurve, PolylineCurve>;

/// Curve files:
///   {"type":"fourier","coeffs":[[a0x,a0y,0,0],[a1x,a1y,b1x,b1y],...]}
///   {"type":"polyline","points":[[x,y],...]}
/// Unknown "type" values, malformed JSON, and structurally invalid payloads
/// raise FormatError. Numbers round-trip exactly (shortest-representation
/// serialization).
CurveVariant read_curve_file(const std::filesystem::path& path);
nlohmann::json curve_to_json(const FourierCurve& curve);
nlohmann::json curve_to_json(const PolylineCurve& curve);
CurveVariant curve_from_json(const nlohmann::json& j);
void write_curve_file(const std::filesystem::path& path, const nlohmann::json& curve);

/// The Fourier alternative of a loaded curve, or FormatError naming `role`.
const FourierCurve& expect_fourier(const CurveVariant& v, const std::string& role);
const PolylineCurve& expect_polyline(const CurveVariant& v, const std::string& role);
const PlaneCurve& as_plane_curve(const CurveVariant& v);

/// Homotopy spec file:
///   {"kind":"linear","start":"a.json","target":"b.json","seed":2026}
///   {"kind":"two_step","beta":"b.json","target":"g.json","eta":0.05,"seed":2026}
/// Curve paths resolve relative to the spec file's directory. Both endpoints
/// must be Fourier curves. two_step builds f by nearest-point projection of
/// the target onto beta (ambiguous projections raise NumericalError); eta
/// defaults to 1/(10 kappa_max(beta)).
Homotopy read_homotopy_file(const std::filesystem::path& path);

nlohmann::json to_json(const SquareCandidate& sq);
nlohmann::json to_json(const FindReport& report);
nlohmann::json to_json(const CheckReport& report);
nlohmann::json to_json(const TraceSample& sample);
nlohmann::json to_json(const ContinuationTrace& trace);
nlohmann::json to_json(const TrackResult& result);
nlohmann::json to_json(const CensusReport& report);
nlohmann::json analysis_to_json(const CurveAnalysis& analysis);

/// Suite file: {"checks":[{"check":"initial_size_bound","curve":"c.json"},
/// {"check":"chord_bound","curve":"c.json","trials":1000,"seed":7},
/// {"check":"no_intermediate","alpha":"a.json","beta":"b.json"},
/// {"check":"small_square_bound","alpha":"a.json","beta":"b.json"},
/// {"check":"main_theorem","gamma":"g.json","beta":"p.json"},
/// {"check":"annulus","beta":"p.json","r":1.0,"R":2.2}]}
/// Curve paths resolve relative to the suite file. no_intermediate and
/// small_square_bound build f by projection of alpha onto beta;
/// small_square_bound runs once per square found on alpha.
std::vector<CheckReport> run_suite(const std::filesystem::path& path);

}  // namespace isq
