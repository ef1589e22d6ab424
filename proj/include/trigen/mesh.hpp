#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "trigen/geometry.hpp"

namespace trigen {

using VertexIndex = std::uint32_t;
using Tri = std::array<VertexIndex, 3>;  // counter-clockwise

inline constexpr std::int32_t kNoNeighbor = -1;

/// Set of undirected vertex-index edges with deterministic extraction.
class EdgeSet {
public:
  static std::uint64_t key(VertexIndex u, VertexIndex v) {
    const auto lo = std::uint64_t(u < v ? u : v);
    const auto hi = std::uint64_t(u < v ? v : u);
    return (lo << 32) | hi;
  }

  bool contains(VertexIndex u, VertexIndex v) const { return keys_.count(key(u, v)) != 0; }
  void insert(VertexIndex u, VertexIndex v) { keys_.insert(key(u, v)); }
  bool erase(VertexIndex u, VertexIndex v) { return keys_.erase(key(u, v)) != 0; }
  void clear() { keys_.clear(); }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }

  /// All edges as (lo, hi) pairs in ascending order.
  std::vector<std::pair<VertexIndex, VertexIndex>> sorted() const;

  bool operator==(const EdgeSet& other) const { return keys_ == other.keys_; }

private:
  std::unordered_set<std::uint64_t> keys_;
};

/// Polygonal domain: one outer loop plus zero or more hole loops, each a
/// simple polygon given without a repeated end vertex.
struct PolygonDomain {
  std::vector<Point2> outer;
  std::vector<std::vector<Point2>> holes;
};

/// Triangle mesh. Triangles are counter-clockwise index triples into
/// `vertices`. `neighbors[t][i]` is the triangle sharing the edge opposite
/// vertex i of t (kNoNeighbor on the boundary). `boundary_vertex[v]` marks
/// endpoints of edges with exactly one incident triangle. The adjacency
/// fields are valid only after build_adjacency.
struct TriMesh {
  std::vector<Point2> vertices;
  std::vector<Tri> triangles;
  EdgeSet constrained;

  std::vector<std::array<std::int32_t, 3>> neighbors;
  std::vector<std::uint8_t> boundary_vertex;
  bool adjacency_valid = false;
};

/// Rebuild `neighbors` and `boundary_vertex` from the triangle list.
/// Throws MeshError when an edge has more than two incident triangles.
void build_adjacency(TriMesh& mesh);

struct ConformityReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Structural and geometric mesh checks: positive orientation everywhere,
/// edge incidence at most 2, symmetric neighbor links, constrained edges
/// present in the mesh, boundary flags exact, no vertex strictly inside a
/// boundary edge, no duplicate triangles. With `require_constrained_boundary`
/// every 1-incidence edge must be constrained. Requires built adjacency.
ConformityReport validate_conformity(const TriMesh& mesh,
                                     bool require_constrained_boundary = false);

/// Sum of triangle areas.
double total_area(const TriMesh& mesh);

struct QualityStats {
  double average_quality = 0.0;
  double min_quality = 0.0;
  double average_min_angle = 0.0;             // radians
  std::array<std::uint64_t, 10> histogram{};  // bin i counts quality in [i/10,(i+1)/10), 1.0 in bin 9
};

/// Mesh quality summary. Parallel over triangles with a deterministic
/// (triangle-order) reduction; bitwise identical to quality_stats_serial.
/// Degenerate triangles count as quality 0 / min angle 0.
/// Throws MeshError on an empty mesh.
QualityStats quality_stats(const TriMesh& mesh);

/// Sequential reference implementation of quality_stats.
QualityStats quality_stats_serial(const TriMesh& mesh);

/// Index of the first triangle whose closed region contains p, scanning in
/// triangle order; nullopt when p is outside the mesh.
std::optional<std::uint32_t> locate_point(const TriMesh& mesh, const Point2& p);

/// Low-level diagonal flip: triangles t and neighbors[t][slot] exchange the
/// shared edge for the opposite diagonal, updating the adjacency in place.
/// The caller guarantees the edge is interior, not constrained, and that
/// both replacement triangles are positively oriented.
void flip_edge(TriMesh& mesh, std::uint32_t t, int slot);

}  // namespace trigen
