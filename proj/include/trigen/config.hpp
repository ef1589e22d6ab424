#pragma once

#include <cstdint>

#include "trigen/errors.hpp"

namespace trigen {

/// Element residual indicator variant: Paper uses the area-weighted element
/// term h^2 (f A)^2, Classical the textbook scaling h^2 f^2 A. Both keep the
/// same edge-jump term; the ranking they induce differs on graded meshes.
enum class EstimatorVariant { Paper, Classical };

/// Order of the two smoothing sub-steps within one smoothing iteration.
enum class SmoothOrder { FlipFirst, MoveFirst };

struct GenConfig {
  double theta = 0.5;            // marking threshold factor, in (0, 1)
  int max_refinements = 20;      // refinement loop cap M
  double quality_target = 0.9;   // stop when average quality reaches this
  double min_angle_target = 0.0; // radians; > 0 adds an alternative stop rule
  int smooth_max_iters = 20;     // smoothing iterations per refinement step
  double smooth_tol = 1e-3;      // stop when max move < tol * local edge length
  int flip_sweep_cap = 10;       // flip budget = cap * (number of mesh edges)
  double solver_tol = 1e-10;     // CG relative residual target
  int solver_max_iter_factor = 20;  // CG iteration cap = factor * unknowns
  EstimatorVariant estimator_variant = EstimatorVariant::Paper;
  SmoothOrder smooth_order = SmoothOrder::FlipFirst;
  std::uint64_t seed = 1;        // insertion-order shuffle seed
};

/// Throws Error when a field is outside its documented range.
void validate(const GenConfig& cfg);

}  // namespace trigen
