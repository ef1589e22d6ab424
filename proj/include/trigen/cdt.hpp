#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "trigen/mesh.hpp"

namespace trigen {

struct PolygonValidation {
  std::vector<std::string> defects;
  /// Outer loop counter-clockwise, holes clockwise, consecutive duplicate
  /// vertices merged. Meaningful only when ok().
  PolygonDomain normalized;
  bool ok() const { return defects.empty(); }
};

/// Check a polygonal domain: enough vertices, finite coordinates, no
/// duplicate vertices, no zero-area or fully collinear loops, no
/// self-intersections or loop-loop intersections, holes strictly inside the
/// outer loop and pairwise disjoint. Collinear consecutive vertices are
/// allowed and kept. Returns defects plus the orientation-normalized domain.
PolygonValidation validate_polygon(const PolygonDomain& domain);

inline constexpr std::uint64_t kDefaultShuffleSeed = 1;

/// Delaunay triangulation of a point set (incremental insertion with exact
/// predicates). The result contains every input point, in input order, and
/// no constrained edges. Exactly cocircular point groups are resolved
/// deterministically: among the two diagonals of a cocircular quad the one
/// with the lower minimum vertex index is kept. Throws CdtError when fewer
/// than 3 points, on duplicate points, or when all points are collinear.
TriMesh delaunay(std::span<const Point2> points,
                 std::uint64_t shuffle_seed = kDefaultShuffleSeed);

/// Force the given vertex-index edges into the triangulation by cavity
/// re-triangulation, marking them constrained. Edges must not pass through
/// any vertex. Throws CdtError otherwise.
TriMesh constrain_edges(TriMesh mesh, const std::vector<std::pair<VertexIndex, VertexIndex>>& edges);

/// Drop triangles outside the domain: a triangle is kept exactly when a path
/// to the convex-hull exterior crosses constrained edges an odd number of
/// times. The constrained edges must form the closed loops of `domain`.
/// Throws CdtError when the parity rule is inconsistent (open or crossing
/// constraint loops).
TriMesh remove_exterior(TriMesh mesh, const PolygonDomain& domain);

/// Full pipeline front end: validate, triangulate the loop vertices,
/// constrain all loop edges, remove exterior and hole triangles. Vertex
/// order is outer loop first, then each hole loop in order.
/// Throws InvalidPolygonError when validation fails.
TriMesh initial_triangulation(const PolygonDomain& domain,
                              std::uint64_t seed = kDefaultShuffleSeed);

}  // namespace trigen
