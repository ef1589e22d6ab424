// Centroidal-patch mesh smoothing with Delaunay edge flipping.

#include "trigen/smooth.hpp"

#include <algorithm>
#include <cmath>

namespace trigen {

namespace {

struct VertexPatches {
  // Incident triangles per vertex, ascending triangle index.
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> tris;
};

VertexPatches build_patches(const TriMesh& mesh) {
  VertexPatches p;
  p.offsets.assign(mesh.vertices.size() + 1, 0);
  for (const Tri& tri : mesh.triangles) {
    for (const VertexIndex v : tri) ++p.offsets[v + 1];
  }
  for (std::size_t v = 1; v < p.offsets.size(); ++v) p.offsets[v] += p.offsets[v - 1];
  p.tris.resize(p.offsets.back());
  std::vector<std::size_t> cursor(p.offsets.begin(), p.offsets.end() - 1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (const VertexIndex v : mesh.triangles[t]) p.tris[cursor[v]++] = std::uint32_t(t);
  }
  return p;
}

// The area-weighted average of incident triangle centroids for one vertex,
// accumulated in ascending triangle order (the shared deterministic kernel).
inline Point2 patch_target(const TriMesh& mesh, const VertexPatches& patches,
                           const std::vector<double>& area,
                           const std::vector<Point2>& wcent, std::size_t v) {
  double wsum = 0.0;
  Point2 acc{0.0, 0.0};
  for (std::size_t k = patches.offsets[v]; k < patches.offsets[v + 1]; ++k) {
    const std::uint32_t t = patches.tris[k];
    wsum += area[t];
    acc.x += wcent[t].x;
    acc.y += wcent[t].y;
  }
  if (wsum <= 0.0) return mesh.vertices[v];
  // wcent carries area * (coordinate sum); the /3 turns sums into centroids.
  return {acc.x / (3.0 * wsum), acc.y / (3.0 * wsum)};
}

template <bool Parallel>
CptStepResult cpt_step_impl(TriMesh& mesh) {
  if (!mesh.adjacency_valid) throw MeshError("cpt_step: adjacency not built");
  const std::size_t nv = mesh.vertices.size();
  const std::size_t nt = mesh.triangles.size();
  const VertexPatches patches = build_patches(mesh);

  // Per-triangle area and area-weighted centroid piece (times 3 to avoid a
  // second rounding; divided out once in patch_target).
  std::vector<double> area(nt);
  std::vector<Point2> wcent(nt);
  const auto triangle_pieces = [&mesh, &area, &wcent](std::size_t t) {
    const Tri& tri = mesh.triangles[t];
    const Point2& a = mesh.vertices[tri[0]];
    const Point2& b = mesh.vertices[tri[1]];
    const Point2& c = mesh.vertices[tri[2]];
    const double A = tri_area(a, b, c);
    area[t] = A;
    wcent[t] = {A * (a.x + b.x + c.x), A * (a.y + b.y + c.y)};
  };

  std::vector<Point2> target(nv);
  const auto vertex_target = [&](std::size_t v) {
    target[v] = mesh.boundary_vertex[v] ? mesh.vertices[v]
                                        : patch_target(mesh, patches, area, wcent, v);
  };

  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < nt; ++t) triangle_pieces(t);
#pragma omp parallel for schedule(static)
    for (std::size_t v = 0; v < nv; ++v) vertex_target(v);
  } else {
    for (std::size_t t = 0; t < nt; ++t) triangle_pieces(t);
    for (std::size_t v = 0; v < nv; ++v) vertex_target(v);
  }

  // Synchronous move with rejection: a vertex whose patch would fold under
  // the tentative configuration keeps its old position. Rejections restore
  // positions other moves were checked against, so re-check to a fixpoint.
  std::vector<std::uint8_t> moving(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    moving[v] = !mesh.boundary_vertex[v] && target[v] != mesh.vertices[v];
  }
  const auto position = [&](VertexIndex v) -> const Point2& {
    return moving[v] ? target[v] : mesh.vertices[v];
  };
  bool rejected = true;
  while (rejected) {
    rejected = false;
    for (std::size_t v = 0; v < nv; ++v) {
      if (!moving[v]) continue;
      for (std::size_t k = patches.offsets[v]; k < patches.offsets[v + 1]; ++k) {
        const Tri& tri = mesh.triangles[patches.tris[k]];
        if (orient2d(position(tri[0]), position(tri[1]), position(tri[2])) != Sign::Positive) {
          moving[v] = 0;
          rejected = true;
          break;
        }
      }
    }
  }

  CptStepResult result;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!moving[v]) continue;
    const double d = norm(target[v] - mesh.vertices[v]);
    result.max_displacement = std::fmax(result.max_displacement, d);

    double edge_sum = 0.0;
    std::size_t edge_count = 0;
    for (std::size_t k = patches.offsets[v]; k < patches.offsets[v + 1]; ++k) {
      const Tri& tri = mesh.triangles[patches.tris[k]];
      for (const VertexIndex w : tri) {
        if (w == v) continue;
        edge_sum += norm(mesh.vertices[w] - mesh.vertices[v]);
        ++edge_count;
      }
    }
    // Each incident edge is visited once per incident triangle (twice for
    // interior vertices), which still averages to the mean edge length scale.
    if (edge_sum > 0.0) {
      result.max_relative_displacement =
          std::fmax(result.max_relative_displacement, d * double(edge_count) / edge_sum);
    }
    mesh.vertices[v] = target[v];
  }
  return result;
}

}  // namespace

CptStepResult cpt_step(TriMesh& mesh) { return cpt_step_impl<true>(mesh); }

CptStepResult cpt_step_serial(TriMesh& mesh) { return cpt_step_impl<false>(mesh); }

std::size_t flip_edges(TriMesh& mesh, std::size_t max_flips) {
  if (!mesh.adjacency_valid) throw MeshError("flip_edges: adjacency not built");

  struct EdgeRef {
    std::uint64_t key;
    std::uint32_t t;
    int slot;
  };
  const auto collect = [&mesh]() {
    std::vector<EdgeRef> edges;
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
      for (int k = 0; k < 3; ++k) {
        const std::int32_t n = mesh.neighbors[t][k];
        if (n < 0 || std::uint32_t(n) < t) continue;  // each interior edge once
        const VertexIndex u = mesh.triangles[t][(k + 1) % 3];
        const VertexIndex v = mesh.triangles[t][(k + 2) % 3];
        edges.push_back({EdgeSet::key(u, v), t, k});
      }
    }
    std::sort(edges.begin(), edges.end(),
              [](const EdgeRef& a, const EdgeRef& b) { return a.key < b.key; });
    return edges;
  };

  if (max_flips == 0) max_flips = 10 * collect().size();

  std::size_t flips = 0;
  bool any = true;
  while (any && flips < max_flips) {
    any = false;
    for (const EdgeRef& e : collect()) {
      if (flips >= max_flips) break;
      // The sweep list goes stale as flips rewrite triangles; skip entries
      // that no longer describe an edge (they reappear next sweep).
      const Tri& tri = mesh.triangles[e.t];
      const VertexIndex a = tri[(e.slot + 1) % 3];
      const VertexIndex b = tri[(e.slot + 2) % 3];
      if (EdgeSet::key(a, b) != e.key) continue;
      const std::int32_t n = mesh.neighbors[e.t][e.slot];
      if (n < 0) continue;
      if (mesh.constrained.contains(a, b)) continue;

      const VertexIndex c = tri[e.slot];
      VertexIndex d = UINT32_MAX;
      for (int s = 0; s < 3; ++s) {
        const Tri& nt = mesh.triangles[std::uint32_t(n)];
        if (nt[(s + 1) % 3] == b && nt[(s + 2) % 3] == a) d = nt[s];
      }
      if (d == UINT32_MAX) continue;

      const Point2& pa = mesh.vertices[a];
      const Point2& pb = mesh.vertices[b];
      const Point2& pc = mesh.vertices[c];
      const Point2& pd = mesh.vertices[d];
      if (in_circumcircle(pa, pb, pc, pd) != Sign::Positive) continue;
      // Both replacement triangles must stay positively oriented (the quad
      // can be non-convex even when the circle test fires).
      if (orient2d(pa, pd, pc) != Sign::Positive) continue;
      if (orient2d(pd, pb, pc) != Sign::Positive) continue;

      flip_edge(mesh, e.t, e.slot);
      ++flips;
      any = true;
    }
  }
  return flips;
}

void smooth(TriMesh& mesh, const GenConfig& cfg) {
  if (!mesh.adjacency_valid) build_adjacency(mesh);

  std::size_t edge_count = 0;
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      if (mesh.neighbors[t][k] < 0 || std::uint32_t(mesh.neighbors[t][k]) > t) ++edge_count;
    }
  }
  std::size_t flip_budget = std::size_t(cfg.flip_sweep_cap) * edge_count;

  for (int it = 0; it < cfg.smooth_max_iters; ++it) {
    CptStepResult step;
    if (cfg.smooth_order == SmoothOrder::FlipFirst) {
      if (flip_budget > 0) flip_budget -= std::min(flip_budget, flip_edges(mesh, flip_budget));
      step = cpt_step(mesh);
    } else {
      step = cpt_step(mesh);
      if (flip_budget > 0) flip_budget -= std::min(flip_budget, flip_edges(mesh, flip_budget));
    }
    if (step.max_relative_displacement < cfg.smooth_tol) break;
  }
}

}  // namespace trigen
