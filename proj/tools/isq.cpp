#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "isq/continuation.hpp"
#include "isq/curve.hpp"
#include "isq/io.hpp"
#include "isq/scenarios.hpp"
#include "isq/size_metric.hpp"
#include "isq/squares.hpp"
#include "isq/svg.hpp"
#include "isq/verify.hpp"

namespace {

using namespace isq;

struct Globals {
  double tol = 0.0;
  int grid = 0;
  std::uint64_t seed = 2026;
  bool json = false;
};

FindConfig find_config(const Globals& g) {
  FindConfig cfg;
  cfg.tol = g.tol;
  cfg.grid_n = g.grid;
  return cfg;
}

FindReport find_squares_any(const CurveVariant& curve, const FindConfig& cfg) {
  if (const auto* poly = std::get_if<PolylineCurve>(&curve)) {
    return find_all_squares(*poly, cfg);
  }
  return find_all_squares(std::get<FourierCurve>(curve), cfg);
}

void print_squares(const FindReport& fr) {
  std::printf("%zu square(s); seeds %d, converged %d, degenerate %d\n", fr.squares.size(),
              fr.seeds, fr.converged, fr.degenerate_failures);
  for (std::size_t i = 0; i < fr.squares.size(); ++i) {
    const auto& sq = fr.squares[i];
    std::printf("  [%zu] side %.9f  residual %.3e  params", i, sq.sidelength, sq.residual_norm);
    for (double p : sq.params) std::printf(" %.6f", p);
    std::printf("\n      vertices");
    for (const Vec2& v : sq.vertices) std::printf(" (%.6f, %.6f)", v.x, v.y);
    std::printf("\n");
  }
  if (fr.continuum_warning) {
    std::printf("warning: rank-deficient solutions; curve carries a square continuum, "
                "list holds representatives\n");
  }
  if (fr.empty_warning) {
    std::printf("warning: no squares on a smooth curve; parity predicts an odd count\n");
  }
}

void print_check(const CheckReport& rep) {
  std::printf("%-22s %s  margin % .6e\n", rep.check_name.c_str(), to_string(rep.verdict),
              rep.margin);
  for (const auto& [k, v] : rep.hypothesis_values) std::printf("    %-36s % .9g\n", k.c_str(), v);
  if (!rep.notes.empty()) std::printf("    note: %s\n", rep.notes.c_str());
  for (const auto& sq : rep.witness_squares) {
    std::printf("    witness side %.9f at params", sq.sidelength);
    for (double p : sq.params) std::printf(" %.6f", p);
    std::printf("\n");
  }
}

void print_trace(const ContinuationTrace& tr, int index) {
  std::printf("  trace %d: %s -> %s, %zu samples, t [%.4f, %.4f], size [%.6f, %.6f]", index,
              to_string(tr.start_event), to_string(tr.end_event), tr.samples.size(),
              tr.samples.front().t, tr.samples.back().t, tr.samples.front().size_wrt_p,
              tr.samples.back().size_wrt_p);
  if (tr.fold_partner >= 0) std::printf(", fold partner %d", tr.fold_partner);
  if (tr.path_lost) std::printf(", PATH LOST (%s)", tr.note.c_str());
  std::printf("\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

int cmd_analyze(const std::string& path, const Globals& g) {
  const CurveVariant curve = read_curve_file(path);
  if (const auto* f = std::get_if<FourierCurve>(&curve)) {
    const CurveAnalysis an = analyze(*f);
    const bool simple = is_simple(*f);
    if (g.json) {
      nlohmann::json j = analysis_to_json(an);
      j["type"] = "fourier";
      j["max_harmonic"] = f->max_harmonic();
      j["simple"] = simple;
      std::cout << j.dump(2) << "\n";
    } else {
      std::printf("fourier curve, %d harmonics\n", f->max_harmonic());
      std::printf("  total length        %.9f\n", an.total_length);
      std::printf("  max curvature       %.9f\n", an.max_unsigned_curvature);
      std::printf("  pi / kappa          %.9f\n", kPi / an.max_unsigned_curvature);
      std::printf("  simple              %s\n", simple ? "yes" : "no");
    }
  } else {
    const auto& poly = std::get<PolylineCurve>(curve);
    const bool simple = is_simple(poly);
    if (g.json) {
      std::cout << nlohmann::json{{"type", "polyline"},
                                  {"vertices", poly.size()},
                                  {"total_length", poly.total_length()},
                                  {"simple", simple}}
                       .dump(2)
                << "\n";
    } else {
      std::printf("polyline, %zu vertices\n", poly.size());
      std::printf("  total length        %.9f\n", poly.total_length());
      std::printf("  simple              %s\n", simple ? "yes" : "no");
    }
  }
  return 0;
}

int cmd_find_squares(const std::string& path, double min_side, const std::string& svg_out,
                     const Globals& g) {
  const CurveVariant curve = read_curve_file(path);
  FindConfig cfg = find_config(g);
  cfg.min_sidelength = min_side;
  const FindReport fr = find_squares_any(curve, cfg);
  if (g.json) {
    std::cout << to_json(fr).dump(2) << "\n";
  } else {
    print_squares(fr);
  }
  if (!svg_out.empty()) {
    const PlaneCurve& pc = as_plane_curve(curve);
    write_text_file(svg_out, render_svg({&pc}, fr.squares, {}));
  }
  return 0;
}

int cmd_size(const std::string& path, const Globals& g) {
  const CurveVariant curve = read_curve_file(path);
  const FourierCurve& f = expect_fourier(curve, "size: curve");
  const FindReport fr = find_all_squares(f, find_config(g));
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < fr.squares.size(); ++i) {
    const double size = square_size_identity(f, fr.squares[i]);
    if (g.json) {
      out.push_back({{"index", i},
                     {"sidelength", fr.squares[i].sidelength},
                     {"size_identity", size}});
    } else {
      std::printf("  [%zu] side %.9f  size_identity %.9f\n", i, fr.squares[i].sidelength, size);
    }
  }
  if (g.json) std::cout << out.dump(2) << "\n";
  return 0;
}

void render_frames(const Homotopy& h, const std::vector<double>& times,
                   const std::filesystem::path& dir, const Globals& g) {
  std::filesystem::create_directories(dir);
  char name[32], note[160];
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const Homotopy::Slice slice = h.slice(t);
    const FindReport fr = find_all_squares(slice, find_config(g));
    const ParamCorrespondence corr = h.correspondence(t);
    std::vector<std::string> notes;
    std::snprintf(note, sizeof(note), "t = %.4f, %zu square(s)", t, fr.squares.size());
    notes.emplace_back(note);
    for (const auto& sq : fr.squares) {
      const double size = square_size(sq, h.reference_analysis(), corr);
      std::snprintf(note, sizeof(note), "side %.6f  size %.6f", sq.sidelength, size);
      notes.emplace_back(note);
    }
    std::snprintf(name, sizeof(name), "frame_%03zu.svg", i);
    write_text_file(dir / name, render_svg({&slice}, fr.squares, notes));
  }
}

int cmd_track(const std::string& path, const std::string& svg_dir,
              const std::vector<double>& census_times, const Globals& g) {
  const Homotopy h = read_homotopy_file(path);
  if (!census_times.empty()) {
    const CensusReport rep = census(h, census_times, find_config(g));
    if (g.json) {
      std::cout << to_json(rep).dump(2) << "\n";
    } else {
      for (const auto& s : rep.slices) {
        std::printf("t = %.4f: %d square(s)%s, sizes", s.t, s.count, s.odd ? " (odd)" : "");
        for (double z : s.sizes_wrt_p) std::printf(" %.6f", z);
        std::printf("\n");
      }
      for (std::size_t i = 0; i < rep.tracking.traces.size(); ++i) {
        print_trace(rep.tracking.traces[i], static_cast<int>(i));
      }
      std::printf("band pi/(4 kappa) = %.6f +- %.6f: min distance %.6f, %s\n", rep.band_center,
                  rep.band_halfwidth, rep.min_band_distance,
                  rep.band_crossed ? "CROSSED" : "not crossed");
      std::printf("t=1 endpoints match final slice: %s\n", rep.end_matches_final ? "yes" : "no");
    }
    if (!svg_dir.empty()) render_frames(h, census_times, svg_dir, g);
    return 0;
  }

  const FindReport start = find_all_squares(h.reference(), find_config(g));
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < start.squares.size(); ++i) {
    const TrackResult tr = track_square(h, start.squares[i]);
    if (g.json) {
      out.push_back(to_json(tr));
    } else {
      std::printf("square %zu (side %.6f):\n", i, start.squares[i].sidelength);
      for (std::size_t k = 0; k < tr.traces.size(); ++k) {
        print_trace(tr.traces[k], static_cast<int>(k));
      }
    }
  }
  if (g.json) std::cout << out.dump(2) << "\n";
  if (!svg_dir.empty()) {
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) times.push_back(i / 10.0);
    render_frames(h, times, svg_dir, g);
  }
  return 0;
}

int cmd_verify(const std::string& check, const std::vector<std::string>& inputs, int trials,
               double r, double R, const std::string& suite, const Globals& g) {
  std::vector<CheckReport> reports;
  const auto need = [&](std::size_t n) {
    if (inputs.size() != n) {
      throw FormatError("verify " + check + ": expected " + std::to_string(n) +
                        " input file(s)");
    }
  };
  if (check == "all") {
    if (suite.empty()) throw FormatError("verify all: --suite required");
    reports = run_suite(suite);
  } else if (check == "initial-size-bound") {
    need(1);
    const CurveVariant c = read_curve_file(inputs[0]);
    reports.push_back(check_initial_size_bound(expect_fourier(c, "curve")));
  } else if (check == "chord-bound") {
    need(1);
    const CurveVariant c = read_curve_file(inputs[0]);
    reports.push_back(check_chord_bound(expect_fourier(c, "curve"), trials, g.seed));
  } else if (check == "no-intermediate") {
    need(2);
    const CurveVariant a = read_curve_file(inputs[0]), b = read_curve_file(inputs[1]);
    const FourierCurve& alpha = expect_fourier(a, "alpha");
    const FourierCurve& beta = expect_fourier(b, "beta");
    reports.push_back(
        check_no_intermediate(alpha, beta, projection_correspondence(alpha, beta, 512, "beta")));
  } else if (check == "small-square-bound") {
    need(2);
    const CurveVariant a = read_curve_file(inputs[0]), b = read_curve_file(inputs[1]);
    const FourierCurve& alpha = expect_fourier(a, "alpha");
    const FourierCurve& beta = expect_fourier(b, "beta");
    const ParamCorrespondence f = projection_correspondence(alpha, beta, 512, "beta");
    for (const auto& sq : find_all_squares(alpha, find_config(g)).squares) {
      reports.push_back(check_small_square_bound(alpha, beta, f, sq));
    }
  } else if (check == "main-theorem") {
    need(2);
    const CurveVariant gamma = read_curve_file(inputs[0]), beta = read_curve_file(inputs[1]);
    reports.push_back(certify_main_theorem(expect_fourier(gamma, "gamma"),
                                           expect_polyline(beta, "beta")));
  } else if (check == "annulus") {
    need(1);
    const CurveVariant c = read_curve_file(inputs[0]);
    reports.push_back(annulus_scenario(r, R, expect_polyline(c, "beta")));
  } else {
    throw FormatError("unknown check \"" + check + "\"");
  }

  bool violated = false;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& rep : reports) {
    violated = violated || rep.verdict == Verdict::violated;
    if (g.json) {
      out.push_back(to_json(rep));
    } else {
      print_check(rep);
    }
  }
  if (g.json) std::cout << out.dump(2) << "\n";
  return violated ? 1 : 0;
}

int cmd_generate(const std::string& what, const std::string& out_path, double a, double b,
                 double neck, double r, double R, int points, double amp, int harmonics,
                 const std::string& base_path, const Globals& g) {
  nlohmann::json j;
  if (what == "ellipse") {
    j = curve_to_json(make_ellipse(a, b));
  } else if (what == "circle") {
    j = curve_to_json(make_circle(a));
  } else if (what == "peanut") {
    j = curve_to_json(make_peanut(neck, harmonics > 0 ? harmonics : 128));
  } else if (what == "annulus-star") {
    j = curve_to_json(make_annulus_star(r, R, points, g.seed));
  } else if (what == "noisy-polyline") {
    if (base_path.empty()) throw FormatError("generate noisy-polyline: --base required");
    const CurveVariant base = read_curve_file(base_path);
    j = curve_to_json(make_noisy_polyline(expect_fourier(base, "base"), points, amp, g.seed));
  } else if (what == "perturbed-ellipse") {
    j = curve_to_json(perturb_fourier(make_ellipse(a, b), amp, harmonics > 0 ? harmonics : 6,
                                      g.seed));
  } else {
    throw FormatError("unknown scenario \"" + what + "\"");
  }
  write_curve_file(out_path, j);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_render(const std::string& path, const std::string& out_path, bool with_squares,
               const Globals& g) {
  const CurveVariant curve = read_curve_file(path);
  const PlaneCurve& pc = as_plane_curve(curve);
  std::vector<SquareCandidate> squares;
  std::vector<std::string> notes;
  char line[160];
  std::snprintf(line, sizeof(line), "length %.6f", pc.total_length());
  notes.emplace_back(line);
  if (with_squares) {
    const FindReport fr = find_squares_any(curve, find_config(g));
    squares = fr.squares;
    std::snprintf(line, sizeof(line), "%zu square(s)", squares.size());
    notes.emplace_back(line);
  }
  write_text_file(out_path, render_svg({&pc}, squares, notes));
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inscribed-square toolkit: analysis, search, size metric, continuation, checks"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--tol", g.tol, "residual tolerance (0: per-curve default)");
  app.add_option("--grid", g.grid, "seed grid density (0: per-curve default)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_flag("--json", g.json, "machine-readable JSON output");

  std::string curve_path, svg_out, svg_dir, suite, check_name, base_path, out_path, what;
  std::vector<std::string> inputs;
  std::vector<double> census_times;
  double min_side = 0.0, axis_a = 2.0, axis_b = 1.0, neck = 0.1, r = 1.0, R = 2.2, amp = 0.02;
  int trials = 1000, points = 60, harmonics = 0;
  bool with_squares = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "curve measurements");
  analyze_cmd->add_option("curve", curve_path, "curve file")->required();

  auto* find_cmd = app.add_subcommand("find-squares", "find all inscribed squares");
  find_cmd->add_option("curve", curve_path, "curve file")->required();
  find_cmd->add_option("--min-side", min_side, "degenerate-square threshold");
  find_cmd->add_option("--svg", svg_out, "also render curve + squares to this SVG file");

  auto* size_cmd = app.add_subcommand("size", "identity sizes of all inscribed squares");
  size_cmd->add_option("curve", curve_path, "curve file (fourier)")->required();

  auto* track_cmd = app.add_subcommand("track", "continuation along a homotopy");
  track_cmd->add_option("homotopy", curve_path, "homotopy spec file")->required();
  track_cmd->add_option("--svg-dir", svg_dir, "write SVG frames into this directory");
  track_cmd->add_option("--census", census_times, "slice times (must include 0 and 1)")
      ->delimiter(',');

  auto* census_cmd = app.add_subcommand("census", "square census across homotopy slices");
  census_cmd->add_option("homotopy", curve_path, "homotopy spec file")->required();
  census_cmd->add_option("--times", census_times, "slice times (must include 0 and 1)")
      ->delimiter(',');

  auto* verify_cmd = app.add_subcommand("verify", "quantitative statement checks");
  verify_cmd->add_option("check", check_name,
                         "initial-size-bound | chord-bound | no-intermediate | "
                         "small-square-bound | main-theorem | annulus | all")
      ->required();
  verify_cmd->add_option("inputs", inputs, "curve file(s) for the check");
  verify_cmd->add_option("--trials", trials, "subarc samples for chord-bound");
  verify_cmd->add_option("--r", r, "annulus inner radius");
  verify_cmd->add_option("--R", R, "annulus outer radius");
  verify_cmd->add_option("--suite", suite, "suite file for `verify all`");

  auto* gen_cmd = app.add_subcommand("generate", "write a scenario curve file");
  gen_cmd->add_option("what", what,
                      "ellipse | circle | peanut | annulus-star | noisy-polyline | "
                      "perturbed-ellipse")
      ->required();
  gen_cmd->add_option("-o,--out", out_path, "output curve file")->required();
  gen_cmd->add_option("--a", axis_a, "ellipse semi-axis a / circle radius");
  gen_cmd->add_option("--b", axis_b, "ellipse semi-axis b");
  gen_cmd->add_option("--neck", neck, "peanut neck width");
  gen_cmd->add_option("--r", r, "annulus inner radius");
  gen_cmd->add_option("--R", R, "annulus outer radius");
  gen_cmd->add_option("--points", points, "polyline vertex count");
  gen_cmd->add_option("--amp", amp, "noise / perturbation amplitude");
  gen_cmd->add_option("--harmonics", harmonics,
                      "harmonic budget (0: scenario default, 128 peanut / 6 perturbation)");
  gen_cmd->add_option("--base", base_path, "base curve file for noisy-polyline");

  auto* render_cmd = app.add_subcommand("render", "render a curve file to SVG");
  render_cmd->add_option("curve", curve_path, "curve file")->required();
  render_cmd->add_option("-o,--out", out_path, "output SVG file")->required();
  render_cmd->add_flag("--squares", with_squares, "find and draw inscribed squares");

  for (CLI::App* sub : {analyze_cmd, find_cmd, size_cmd, track_cmd, census_cmd, verify_cmd,
                        gen_cmd, render_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(curve_path, g);
    if (find_cmd->parsed()) return cmd_find_squares(curve_path, min_side, svg_out, g);
    if (size_cmd->parsed()) return cmd_size(curve_path, g);
    if (track_cmd->parsed()) return cmd_track(curve_path, svg_dir, census_times, g);
    if (census_cmd->parsed()) {
      if (census_times.empty()) census_times = {0.0, 0.25, 0.5, 0.75, 1.0};
      return cmd_track(curve_path, "", census_times, g);
    }
    if (verify_cmd->parsed()) return cmd_verify(check_name, inputs, trials, r, R, suite, g);
    if (gen_cmd->parsed()) {
      return cmd_generate(what, out_path, axis_a, axis_b, neck, r, R, points, amp, harmonics,
                          base_path, g);
    }
    if (render_cmd->parsed()) return cmd_render(curve_path, out_path, with_squares, g);
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
