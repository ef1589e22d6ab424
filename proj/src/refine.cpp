// Red-green-blue mesh refinement with reference-edge closure.

#include "trigen/refine.hpp"

#include <algorithm>
#include <unordered_map>

namespace trigen {

std::vector<int> reference_edges(const TriMesh& mesh) {
  std::vector<int> ref(mesh.triangles.size(), 0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Tri& tri = mesh.triangles[t];
    double best_len = -1.0;
    int best_slot = 0;
    for (int k = 0; k < 3; ++k) {
      const Point2 d = mesh.vertices[tri[(k + 2) % 3]] - mesh.vertices[tri[(k + 1) % 3]];
      const double len = dot(d, d);
      // Ties pick the edge whose opposite vertex has the lowest index, so
      // the choice is independent of how the triangle happens to be stored.
      if (len > best_len || (len == best_len && tri[k] < tri[best_slot])) {
        best_len = len;
        best_slot = k;
      }
    }
    ref[std::size_t(t)] = best_slot;
  }
  return ref;
}

EdgeSet closure(const TriMesh& mesh, EdgeSet split_edges) {
  if (!mesh.adjacency_valid) {
    throw MeshError("closure: adjacency not built");
  }
  const std::vector<int> ref = reference_edges(mesh);

  std::vector<std::uint32_t> work(mesh.triangles.size());
  for (std::size_t t = 0; t < work.size(); ++t) work[t] = std::uint32_t(t);

  while (!work.empty()) {
    std::vector<std::uint32_t> next;
    for (const std::uint32_t t : work) {
      const Tri& tri = mesh.triangles[t];
      bool any_split = false;
      for (int k = 0; k < 3; ++k) {
        if (split_edges.contains(tri[(k + 1) % 3], tri[(k + 2) % 3])) any_split = true;
      }
      if (!any_split) continue;
      const int r = ref[t];
      const VertexIndex ru = tri[(r + 1) % 3];
      const VertexIndex rv = tri[(r + 2) % 3];
      if (split_edges.contains(ru, rv)) continue;
      split_edges.insert(ru, rv);
      const std::int32_t n = mesh.neighbors[t][r];
      if (n >= 0) next.push_back(std::uint32_t(n));
    }
    work = std::move(next);
  }
  return split_edges;
}

TriMesh rgb_refine(TriMesh mesh, const std::vector<std::uint32_t>& marked) {
  if (!mesh.adjacency_valid) build_adjacency(mesh);
  {
    std::vector<std::uint8_t> seen(mesh.triangles.size(), 0);
    for (const std::uint32_t t : marked) {
      if (t >= mesh.triangles.size()) throw MeshError("rgb_refine: marked index out of range");
      if (seen[t]++) throw MeshError("rgb_refine: duplicate marked index");
    }
  }

  EdgeSet splits;
  for (const std::uint32_t t : marked) {
    const Tri& tri = mesh.triangles[t];
    splits.insert(tri[0], tri[1]);
    splits.insert(tri[1], tri[2]);
    splits.insert(tri[2], tri[0]);
  }
  splits = closure(mesh, splits);

  // Midpoint vertices, appended in ascending edge order.
  std::unordered_map<std::uint64_t, VertexIndex> midpoint;
  midpoint.reserve(splits.size());
  for (const auto& [u, v] : splits.sorted()) {
    const Point2 m = (mesh.vertices[u] + mesh.vertices[v]) * 0.5;
    midpoint.emplace(EdgeSet::key(u, v), VertexIndex(mesh.vertices.size()));
    mesh.vertices.push_back(m);
    if (mesh.constrained.contains(u, v)) {
      mesh.constrained.erase(u, v);
      mesh.constrained.insert(u, VertexIndex(mesh.vertices.size() - 1));
      mesh.constrained.insert(VertexIndex(mesh.vertices.size() - 1), v);
    }
  }
  const auto mid = [&midpoint](VertexIndex u, VertexIndex v) {
    return midpoint.at(EdgeSet::key(u, v));
  };

  const std::vector<int> ref = reference_edges(mesh);
  std::vector<Tri> out;
  out.reserve(mesh.triangles.size() + 3 * splits.size());

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Tri& tri = mesh.triangles[t];
    const int r = ref[t];
    // Relabel with the reference edge as (A, B): the cyclic order (A, B, C)
    // keeps the parent's orientation.
    const VertexIndex A = tri[(r + 1) % 3];
    const VertexIndex B = tri[(r + 2) % 3];
    const VertexIndex C = tri[r];
    const bool split_ab = splits.contains(A, B);
    const bool split_bc = splits.contains(B, C);
    const bool split_ca = splits.contains(C, A);
    const int count = int(split_ab) + int(split_bc) + int(split_ca);

    if (count == 0) {
      out.push_back(tri);
      continue;
    }
    if (!split_ab) {
      throw MeshError("rgb_refine: closure failed to split a reference edge");
    }
    const VertexIndex M = mid(A, B);
    switch (count) {
      case 1:  // green: bisect the reference edge
        out.push_back({A, M, C});
        out.push_back({M, B, C});
        break;
      case 2:  // blue: reference edge plus one other
        if (split_bc) {
          const VertexIndex N = mid(B, C);
          out.push_back({A, M, C});
          out.push_back({M, B, N});
          out.push_back({M, N, C});
        } else {
          const VertexIndex P = mid(C, A);
          out.push_back({M, B, C});
          out.push_back({A, M, P});
          out.push_back({M, C, P});
        }
        break;
      default: {  // red: four similar children
        const VertexIndex N = mid(B, C);
        const VertexIndex P = mid(C, A);
        out.push_back({A, M, P});
        out.push_back({M, B, N});
        out.push_back({P, N, C});
        out.push_back({M, N, P});
        break;
      }
    }
  }

  mesh.triangles = std::move(out);
  build_adjacency(mesh);
  return mesh;
}

}  // namespace trigen
