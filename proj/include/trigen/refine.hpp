#pragma once

#include <cstdint>
#include <vector>

#include "trigen/mesh.hpp"

namespace trigen {

/// Slot of each triangle's reference edge (the longest; ties broken by the
/// lowest opposite-vertex index). Slot i is the edge opposite vertex i.
std::vector<int> reference_edges(const TriMesh& mesh);

/// Close a set of edges slated for bisection: whenever any edge of a
/// triangle is in the set, that triangle's reference edge must be too.
/// Repeated to a fixpoint across neighbors.
EdgeSet closure(const TriMesh& mesh, EdgeSet split_edges);

/// Red-green-blue refinement of the marked triangles. Marked triangles are
/// split into four similar children (red); neighbors receive green (one split
/// edge: two children) or blue (two split edges: three children) patterns so
/// the result is conformal. Midpoint vertices are appended after the existing
/// vertices in ascending edge order; split constrained edges yield two
/// constrained sub-edges. Marked indices must be valid and unique.
TriMesh rgb_refine(TriMesh mesh, const std::vector<std::uint32_t>& marked);

}  // namespace trigen
