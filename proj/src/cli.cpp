// Command line front end.

#include "trigen/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "trigen/driver.hpp"
#include "trigen/io.hpp"

namespace trigen {

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

nlohmann::json report_to_json(const GenReport& report) {
  nlohmann::json doc;
  doc["iterations_run"] = report.iterations_run;
  doc["target_reached"] = report.target_reached;
  doc["wall_time_seconds"] = report.wall_time_seconds;
  auto& arr = doc["iterations"] = nlohmann::json::array();
  for (const IterationStats& s : report.iterations) {
    arr.push_back({{"iteration", s.iteration},
                   {"triangle_count", s.triangle_count},
                   {"vertex_count", s.vertex_count},
                   {"eta_max", s.eta_max},
                   {"average_quality", s.average_quality},
                   {"min_quality", s.min_quality},
                   {"average_min_angle", s.average_min_angle}});
  }
  return doc;
}

struct GenerateOptions {
  std::string input;
  std::string format;  // "", "json", "poly"
  GenConfig cfg;
  double min_angle_deg = 0.0;
  std::string estimator = "paper";
  std::string output;         // empty: stdout
  std::string output_format = "msh2";
  std::string svg;
  std::string color_by = "none";
  std::string snapshots;
  std::string stats;
  bool strict = false;
};

int run_generate(const GenerateOptions& opt) {
  GenConfig cfg = opt.cfg;
  cfg.min_angle_target = opt.min_angle_deg * std::numbers::pi / 180.0;
  cfg.estimator_variant =
      opt.estimator == "classical" ? EstimatorVariant::Classical : EstimatorVariant::Paper;
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw IoError(std::string("invalid option: ") + e.what());
  }

  std::optional<DomainFormat> fmt;
  if (opt.format == "json") fmt = DomainFormat::Json;
  if (opt.format == "poly") fmt = DomainFormat::Poly;
  const PolygonDomain domain = parse_domain_file(opt.input, fmt);

  StageObserver observer;
  if (!opt.snapshots.empty()) {
    std::filesystem::create_directories(opt.snapshots);
    observer = [&opt](int k, PipelineStage stage, const TriMesh& mesh) {
      if (stage != PipelineStage::Initial && stage != PipelineStage::Smoothed) return;
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%03d.svg", k);
      write_text_file((std::filesystem::path(opt.snapshots) / name).string(),
                      render_svg(mesh, ColorBy::Quality));
    };
  }

  const GenResult result = adaptmesh(domain, cfg, observer);

  const MeshFormat mesh_format =
      opt.output_format == "json" ? MeshFormat::Json : MeshFormat::Msh2;
  const std::string mesh_text = write_mesh(result.mesh, mesh_format);
  if (opt.output.empty()) {
    std::cout << mesh_text;
  } else {
    write_text_file(opt.output, mesh_text);
  }

  if (!opt.svg.empty()) {
    ColorBy color = ColorBy::None;
    if (opt.color_by == "quality") color = ColorBy::Quality;
    if (opt.color_by == "eta") color = ColorBy::Eta;
    std::vector<double> scalars;
    if (color == ColorBy::Eta) {
      // The report's indicators describe pre-refinement meshes; color the
      // final mesh with a fresh solve on it.
      scalars.assign(result.mesh.triangles.size(), 0.0);
      const SparseSystem system = assemble(result.mesh);
      if (system.unknowns > 0) {
        const FemSolution solution =
            solve(system, cfg.solver_tol,
                  std::size_t(cfg.solver_max_iter_factor) * system.unknowns);
        scalars = estimate(result.mesh, solution, 1.0, cfg.estimator_variant).eta;
      }
    }
    write_text_file(opt.svg, render_svg(result.mesh, color, scalars));
  }

  if (!opt.stats.empty()) {
    write_text_file(opt.stats, report_to_json(result.report).dump(2) + "\n");
  }

  if (opt.strict && !result.report.target_reached) {
    std::cerr << "trigen: quality target not reached after "
              << result.report.iterations_run << " refinement passes\n";
    return kExitTargetUnmet;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"adaptive triangular mesh generator for polygonal domains"};
  app.require_subcommand(1);

  GenerateOptions opt;
  CLI::App* gen = app.add_subcommand("generate", "generate a mesh for a polygonal domain");
  gen->add_option("input", opt.input, "domain file (JSON, or the .poly dialect)")->required();
  gen->add_option("--format", opt.format, "input format (default: by file extension)")
      ->check(CLI::IsMember({"json", "poly"}));
  gen->add_option("--theta", opt.cfg.theta, "marking threshold factor in (0,1)");
  gen->add_option("--max-refinements", opt.cfg.max_refinements, "refinement pass cap");
  gen->add_option("--quality", opt.cfg.quality_target, "average-quality stop target");
  gen->add_option("--min-angle-target", opt.min_angle_deg,
                  "alternative stop target: average min angle (degrees)");
  gen->add_option("--smooth-iters", opt.cfg.smooth_max_iters, "smoothing iterations per pass");
  gen->add_option("--estimator", opt.estimator, "error indicator variant")
      ->check(CLI::IsMember({"paper", "classical"}));
  gen->add_option("--seed", opt.cfg.seed, "insertion order shuffle seed");
  gen->add_option("--output", opt.output, "mesh output path (default: stdout)");
  gen->add_option("--output-format", opt.output_format, "mesh output format")
      ->check(CLI::IsMember({"msh2", "json"}));
  gen->add_option("--svg", opt.svg, "write an SVG rendering of the final mesh");
  gen->add_option("--color-by", opt.color_by, "SVG fill scalar")
      ->check(CLI::IsMember({"none", "quality", "eta"}));
  gen->add_option("--snapshots", opt.snapshots, "directory for per-iteration SVG snapshots");
  gen->add_option("--stats", opt.stats, "write the generation report as JSON");
  gen->add_flag("--strict", opt.strict, "exit with status 4 when the target is not reached");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    return run_generate(opt);
  } catch (const InvalidPolygonError& e) {
    std::cerr << "trigen: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const IoError& e) {
    std::cerr << "trigen: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const SolverError& e) {
    std::cerr << "trigen: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "trigen: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace trigen
