#pragma once

#include <cstdint>

#include "trigen/config.hpp"
#include "trigen/mesh.hpp"

namespace trigen {

struct CptStepResult {
  double max_displacement = 0.0;  // largest vertex move, absolute
  /// Largest move divided by the mean length of the moved vertex's incident
  /// edges; the smoothing loop stops on this.
  double max_relative_displacement = 0.0;
};

/// One synchronous centroidal-patch smoothing step: every interior vertex is
/// pulled to the area-weighted average of its incident triangles' centroids,
/// all computed from the old positions. Moves that would make any incident
/// triangle non-positively oriented are rejected (re-checked to a fixpoint,
/// since rejections restore old positions that other moves depended on).
/// Boundary vertices never move. Target computation is parallel with a
/// deterministic per-vertex reduction; bitwise identical to cpt_step_serial.
CptStepResult cpt_step(TriMesh& mesh);

/// Sequential reference implementation of cpt_step.
CptStepResult cpt_step_serial(TriMesh& mesh);

/// Sweep all interior non-constrained edges in ascending index order and
/// flip each edge whose opposite vertex lies strictly inside the adjacent
/// triangle's circumcircle, provided both replacement triangles are
/// positively oriented. Sweeps repeat until a sweep performs no flip or the
/// total number of flips reaches max_flips (0 selects 10 * edge count).
/// Returns the number of flips performed.
std::size_t flip_edges(TriMesh& mesh, std::size_t max_flips = 0);

/// Full smoothing pass: alternate edge flipping and cpt_step per
/// cfg.smooth_order, at most cfg.smooth_max_iters times, stopping early once
/// the maximum relative displacement falls below cfg.smooth_tol. The flip
/// budget across the whole pass is cfg.flip_sweep_cap * edge count.
void smooth(TriMesh& mesh, const GenConfig& cfg);

}  // namespace trigen
