#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "trigen/cdt.hpp"
#include "trigen/config.hpp"
#include "trigen/fem.hpp"
#include "trigen/mesh.hpp"

namespace trigen {

struct IterationStats {
  int iteration = 0;  // 0 is the initial triangulation
  std::size_t triangle_count = 0;
  std::size_t vertex_count = 0;
  /// Largest error indicator of the solve that drove this iteration's
  /// refinement; 0 for the initial record and for iterations without a solve.
  double eta_max = 0.0;
  double average_quality = 0.0;
  double min_quality = 0.0;
  double average_min_angle = 0.0;  // radians
};

struct GenReport {
  int iterations_run = 0;
  bool target_reached = false;
  double wall_time_seconds = 0.0;
  std::vector<IterationStats> iterations;  // entry 0 plus one per loop pass
};

enum class PipelineStage { Initial, Refined, Smoothed };

/// Observation hook called with (iteration, stage, mesh) after the initial
/// triangulation and after each refinement / smoothing stage.
using StageObserver = std::function<void(int, PipelineStage, const TriMesh&)>;

struct GenResult {
  TriMesh mesh;
  GenReport report;
};

/// The full mesh generation loop: constrained Delaunay triangulation of the
/// domain, then repeatedly solve -Δu = 1 with zero boundary values, estimate
/// per-triangle error, refine the worst triangles, and smooth, until the
/// average quality target (or optional average min-angle target) is reached
/// or cfg.max_refinements passes have run.
GenResult adaptmesh(const PolygonDomain& domain, const GenConfig& cfg = {},
                    const StageObserver& observer = {});

}  // namespace trigen
