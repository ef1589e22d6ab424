// The adaptive generation loop tying the pipeline together.

#include "trigen/driver.hpp"

#include <chrono>

#include "trigen/refine.hpp"
#include "trigen/smooth.hpp"

namespace trigen {

void validate(const GenConfig& cfg) {
  if (!(cfg.theta > 0.0) || !(cfg.theta < 1.0)) {
    throw Error("config: theta must lie strictly between 0 and 1");
  }
  if (cfg.max_refinements < 0) throw Error("config: max_refinements must be >= 0");
  if (!(cfg.quality_target > 0.0) || !(cfg.quality_target <= 1.0)) {
    throw Error("config: quality_target must lie in (0, 1]");
  }
  if (cfg.min_angle_target < 0.0) throw Error("config: min_angle_target must be >= 0");
  if (cfg.smooth_max_iters < 0) throw Error("config: smooth_max_iters must be >= 0");
  if (!(cfg.smooth_tol > 0.0)) throw Error("config: smooth_tol must be > 0");
  if (cfg.flip_sweep_cap < 0) throw Error("config: flip_sweep_cap must be >= 0");
  if (!(cfg.solver_tol > 0.0)) throw Error("config: solver_tol must be > 0");
  if (cfg.solver_max_iter_factor <= 0) throw Error("config: solver_max_iter_factor must be > 0");
}

namespace {

IterationStats stats_for(const TriMesh& mesh, int iteration, double eta_max) {
  const QualityStats q = quality_stats(mesh);
  IterationStats s;
  s.iteration = iteration;
  s.triangle_count = mesh.triangles.size();
  s.vertex_count = mesh.vertices.size();
  s.eta_max = eta_max;
  s.average_quality = q.average_quality;
  s.min_quality = q.min_quality;
  s.average_min_angle = q.average_min_angle;
  return s;
}

bool target_reached(const IterationStats& s, const GenConfig& cfg) {
  if (s.average_quality >= cfg.quality_target) return true;
  return cfg.min_angle_target > 0.0 && s.average_min_angle >= cfg.min_angle_target;
}

}  // namespace

GenResult adaptmesh(const PolygonDomain& domain, const GenConfig& cfg,
                    const StageObserver& observer) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  GenResult result;
  result.mesh = initial_triangulation(domain, cfg.seed);
  if (observer) observer(0, PipelineStage::Initial, result.mesh);
  result.report.iterations.push_back(stats_for(result.mesh, 0, 0.0));
  result.report.target_reached = target_reached(result.report.iterations.back(), cfg);

  for (int k = 1; k <= cfg.max_refinements && !result.report.target_reached; ++k) {
    const SparseSystem system = assemble(result.mesh);
    double eta_max = 0.0;
    std::vector<std::uint32_t> marked;
    if (system.unknowns == 0) {
      // Nothing to solve yet (all vertices on the boundary): refine
      // everything to create interior unknowns.
      marked.resize(result.mesh.triangles.size());
      for (std::size_t t = 0; t < marked.size(); ++t) marked[t] = std::uint32_t(t);
    } else {
      const FemSolution solution = solve(system, cfg.solver_tol,
                                         std::size_t(cfg.solver_max_iter_factor) *
                                             system.unknowns);
      const ErrorField errors =
          estimate(result.mesh, solution, 1.0, cfg.estimator_variant);
      eta_max = errors.eta_max;
      marked = mark(errors, cfg.theta);
    }

    result.mesh = rgb_refine(std::move(result.mesh), marked);
    if (observer) observer(k, PipelineStage::Refined, result.mesh);

    smooth(result.mesh, cfg);
    if (observer) observer(k, PipelineStage::Smoothed, result.mesh);

    result.report.iterations.push_back(stats_for(result.mesh, k, eta_max));
    result.report.iterations_run = k;
    result.report.target_reached = target_reached(result.report.iterations.back(), cfg);
  }

  result.report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace trigen
