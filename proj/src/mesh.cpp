// Triangle mesh container: adjacency construction, validation, measures.

#include "trigen/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

namespace trigen {

std::vector<std::pair<VertexIndex, VertexIndex>> EdgeSet::sorted() const {
  std::vector<std::uint64_t> keys(keys_.begin(), keys_.end());
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<VertexIndex, VertexIndex>> out;
  out.reserve(keys.size());
  for (std::uint64_t k : keys) {
    out.emplace_back(VertexIndex(k >> 32), VertexIndex(k & 0xFFFFFFFFu));
  }
  return out;
}

namespace {

std::string tri_str(std::size_t t, const Tri& tri) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "triangle %zu (%u,%u,%u)", t, tri[0], tri[1], tri[2]);
  return buf;
}

}  // namespace

void build_adjacency(TriMesh& mesh) {
  const std::size_t nt = mesh.triangles.size();
  mesh.neighbors.assign(nt, {kNoNeighbor, kNoNeighbor, kNoNeighbor});
  mesh.boundary_vertex.assign(mesh.vertices.size(), 0);

  // Edge -> (triangle, slot) of the first incident triangle seen.
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, int>> half;
  half.reserve(nt * 3);

  for (std::size_t t = 0; t < nt; ++t) {
    const Tri& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const VertexIndex u = tri[(k + 1) % 3];
      const VertexIndex v = tri[(k + 2) % 3];
      const std::uint64_t key = EdgeSet::key(u, v);
      auto it = half.find(key);
      if (it == half.end()) {
        half.emplace(key, std::make_pair(std::uint32_t(t), k));
        continue;
      }
      if (it->second.first == UINT32_MAX) {
        throw MeshError("build_adjacency: edge (" + std::to_string(u) + "," + std::to_string(v) +
                        ") has more than two incident triangles");
      }
      const auto [other, oslot] = it->second;
      mesh.neighbors[t][k] = std::int32_t(other);
      mesh.neighbors[other][oslot] = std::int32_t(t);
      it->second.first = UINT32_MAX;  // consumed; a third incidence is an error
    }
  }

  for (const auto& [key, rec] : half) {
    if (rec.first == UINT32_MAX) continue;  // interior edge
    mesh.boundary_vertex[VertexIndex(key >> 32)] = 1;
    mesh.boundary_vertex[VertexIndex(key & 0xFFFFFFFFu)] = 1;
  }
  mesh.adjacency_valid = true;
}

ConformityReport validate_conformity(const TriMesh& mesh, bool require_constrained_boundary) {
  ConformityReport report;
  auto fail = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (!mesh.adjacency_valid || mesh.neighbors.size() != mesh.triangles.size()) {
    fail("adjacency not built");
    return report;
  }

  const std::size_t nv = mesh.vertices.size();
  const std::size_t nt = mesh.triangles.size();

  for (std::size_t t = 0; t < nt; ++t) {
    const Tri& tri = mesh.triangles[t];
    bool bad_index = false;
    for (int k = 0; k < 3; ++k) {
      if (tri[k] >= nv) {
        fail(tri_str(t, tri) + ": vertex index out of range");
        bad_index = true;
      }
    }
    if (bad_index) continue;
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0]) {
      fail(tri_str(t, tri) + ": repeated vertex");
      continue;
    }
    if (orient2d(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]) !=
        Sign::Positive) {
      fail(tri_str(t, tri) + ": not positively oriented");
    }
  }
  if (!report.ok()) return report;  // index errors make the rest unreliable

  // Duplicate triangles (same vertex triple in any order).
  {
    std::vector<std::array<VertexIndex, 3>> sorted_tris(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      sorted_tris[t] = mesh.triangles[t];
      std::sort(sorted_tris[t].begin(), sorted_tris[t].end());
    }
    auto order = sorted_tris;
    std::sort(order.begin(), order.end());
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (order[i] == order[i - 1]) {
        fail("duplicate triangle (" + std::to_string(order[i][0]) + "," +
             std::to_string(order[i][1]) + "," + std::to_string(order[i][2]) + ")");
      }
    }
  }

  // Independent edge incidence count.
  std::unordered_map<std::uint64_t, int> incidence;
  incidence.reserve(nt * 3);
  for (std::size_t t = 0; t < nt; ++t) {
    const Tri& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      ++incidence[EdgeSet::key(tri[(k + 1) % 3], tri[(k + 2) % 3])];
    }
  }
  std::vector<std::uint64_t> boundary_edges;
  for (const auto& [key, count] : incidence) {
    if (count > 2) {
      fail("edge (" + std::to_string(key >> 32) + "," + std::to_string(key & 0xFFFFFFFFu) +
           ") has " + std::to_string(count) + " incident triangles");
    } else if (count == 1) {
      boundary_edges.push_back(key);
    }
  }
  std::sort(boundary_edges.begin(), boundary_edges.end());

  // Neighbor table symmetry and edge agreement.
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const std::int32_t n = mesh.neighbors[t][k];
      const VertexIndex u = mesh.triangles[t][(k + 1) % 3];
      const VertexIndex v = mesh.triangles[t][(k + 2) % 3];
      if (n == kNoNeighbor) {
        if (incidence[EdgeSet::key(u, v)] != 1) {
          fail(tri_str(t, mesh.triangles[t]) + ": slot " + std::to_string(k) +
               " marked boundary but edge is interior");
        }
        continue;
      }
      if (n < 0 || std::size_t(n) >= nt) {
        fail(tri_str(t, mesh.triangles[t]) + ": neighbor index out of range");
        continue;
      }
      bool linked_back = false;
      for (int j = 0; j < 3; ++j) {
        const VertexIndex nu = mesh.triangles[std::size_t(n)][(j + 1) % 3];
        const VertexIndex nv = mesh.triangles[std::size_t(n)][(j + 2) % 3];
        if (EdgeSet::key(nu, nv) == EdgeSet::key(u, v)) {
          linked_back = (mesh.neighbors[std::size_t(n)][j] == std::int32_t(t));
          break;
        }
      }
      if (!linked_back) {
        fail(tri_str(t, mesh.triangles[t]) + ": asymmetric neighbor link across edge (" +
             std::to_string(u) + "," + std::to_string(v) + ")");
      }
    }
  }

  // Constrained edges must exist as mesh edges.
  for (const auto& [u, v] : mesh.constrained.sorted()) {
    auto it = incidence.find(EdgeSet::key(u, v));
    if (it == incidence.end()) {
      fail("constrained edge (" + std::to_string(u) + "," + std::to_string(v) +
           ") is not an edge of the mesh");
    }
  }

  // Boundary vertex flags must be exactly the endpoints of 1-incidence edges.
  std::vector<std::uint8_t> expected(nv, 0);
  for (std::uint64_t key : boundary_edges) {
    expected[VertexIndex(key >> 32)] = 1;
    expected[VertexIndex(key & 0xFFFFFFFFu)] = 1;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const std::uint8_t got = v < mesh.boundary_vertex.size() ? mesh.boundary_vertex[v] : 0;
    if (got != expected[v]) {
      fail("vertex " + std::to_string(v) + ": boundary flag " + std::to_string(int(got)) +
           ", expected " + std::to_string(int(expected[v])));
    }
  }

  // No vertex may lie strictly inside a boundary edge (a hanging node that
  // topological conformity alone cannot see).
  for (std::uint64_t key : boundary_edges) {
    const Point2& a = mesh.vertices[VertexIndex(key >> 32)];
    const Point2& b = mesh.vertices[VertexIndex(key & 0xFFFFFFFFu)];
    for (std::size_t v = 0; v < nv; ++v) {
      const Point2& p = mesh.vertices[v];
      if (p == a || p == b) continue;
      if (orient2d(a, b, p) != Sign::Zero) continue;
      const bool inside = std::fabs(b.x - a.x) >= std::fabs(b.y - a.y)
                              ? (std::fmin(a.x, b.x) < p.x && p.x < std::fmax(a.x, b.x))
                              : (std::fmin(a.y, b.y) < p.y && p.y < std::fmax(a.y, b.y));
      if (inside) {
        fail("vertex " + std::to_string(v) + " lies inside boundary edge (" +
             std::to_string(key >> 32) + "," + std::to_string(key & 0xFFFFFFFFu) + ")");
      }
    }
  }

  if (require_constrained_boundary) {
    for (std::uint64_t key : boundary_edges) {
      const VertexIndex u(key >> 32);
      const VertexIndex v(key & 0xFFFFFFFFu);
      if (!mesh.constrained.contains(u, v)) {
        fail("boundary edge (" + std::to_string(u) + "," + std::to_string(v) +
             ") is not constrained");
      }
    }
  }

  return report;
}

double total_area(const TriMesh& mesh) {
  double sum = 0.0;
  for (const Tri& tri : mesh.triangles) {
    sum += tri_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
  }
  return sum;
}

namespace {

// Shared per-triangle kernel so the parallel and serial paths compute
// bit-identical values.
inline void quality_of(const TriMesh& mesh, std::size_t t, double& q, double& angle) {
  const Tri& tri = mesh.triangles[t];
  const auto m = try_tri_metrics(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                 mesh.vertices[tri[2]]);
  q = m ? m->quality : 0.0;
  angle = m ? m->min_angle : 0.0;
}

QualityStats reduce_stats(const std::vector<double>& q, const std::vector<double>& angle) {
  QualityStats stats;
  stats.min_quality = q[0];
  double qsum = 0.0;
  double asum = 0.0;
  for (std::size_t t = 0; t < q.size(); ++t) {
    qsum += q[t];
    asum += angle[t];
    stats.min_quality = std::fmin(stats.min_quality, q[t]);
    const int bin = std::min(int(q[t] * 10.0), 9);
    ++stats.histogram[std::size_t(bin)];
  }
  stats.average_quality = qsum / double(q.size());
  stats.average_min_angle = asum / double(q.size());
  return stats;
}

}  // namespace

QualityStats quality_stats(const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw MeshError("quality_stats: empty mesh");
  const std::size_t nt = mesh.triangles.size();
  std::vector<double> q(nt), angle(nt);
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < nt; ++t) {
    quality_of(mesh, t, q[t], angle[t]);
  }
  return reduce_stats(q, angle);
}

QualityStats quality_stats_serial(const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw MeshError("quality_stats: empty mesh");
  const std::size_t nt = mesh.triangles.size();
  std::vector<double> q(nt), angle(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    quality_of(mesh, t, q[t], angle[t]);
  }
  return reduce_stats(q, angle);
}

void flip_edge(TriMesh& mesh, std::uint32_t t, int slot) {
  const std::int32_t n32 = mesh.neighbors[t][slot];
  if (n32 < 0) throw MeshError("flip_edge: boundary edge");
  const auto n = std::uint32_t(n32);

  const Tri& T = mesh.triangles[t];
  const VertexIndex a = T[(slot + 1) % 3];
  const VertexIndex b = T[(slot + 2) % 3];
  const VertexIndex c = T[slot];

  int j = -1;  // slot of the shared edge in n (n sees it as (b, a))
  for (int s = 0; s < 3; ++s) {
    if (mesh.triangles[n][(s + 1) % 3] == b && mesh.triangles[n][(s + 2) % 3] == a) j = s;
  }
  if (j < 0) throw MeshError("flip_edge: asymmetric adjacency");
  const VertexIndex d = mesh.triangles[n][j];

  const std::int32_t t_bc = mesh.neighbors[t][(slot + 1) % 3];  // across (b,c)
  const std::int32_t t_ca = mesh.neighbors[t][(slot + 2) % 3];  // across (c,a)
  const std::int32_t n_ad = mesh.neighbors[n][(j + 1) % 3];     // across (a,d)
  const std::int32_t n_db = mesh.neighbors[n][(j + 2) % 3];     // across (d,b)

  mesh.triangles[t] = {a, d, c};
  mesh.triangles[n] = {d, b, c};
  mesh.neighbors[t] = {std::int32_t(n), t_ca, n_ad};
  mesh.neighbors[n] = {t_bc, std::int32_t(t), n_db};

  // Moved outer edges point to their new owner; match by edge, not by
  // neighbor id (one outer triangle may border both moved edges).
  const auto relink = [&mesh](std::int32_t outer, VertexIndex u, VertexIndex v,
                              std::uint32_t owner) {
    if (outer < 0) return;
    for (int s = 0; s < 3; ++s) {
      const VertexIndex eu = mesh.triangles[std::size_t(outer)][(s + 1) % 3];
      const VertexIndex ev = mesh.triangles[std::size_t(outer)][(s + 2) % 3];
      if (EdgeSet::key(eu, ev) == EdgeSet::key(u, v)) {
        mesh.neighbors[std::size_t(outer)][s] = std::int32_t(owner);
        return;
      }
    }
    throw MeshError("flip_edge: lost outer adjacency");
  };
  relink(n_ad, a, d, t);
  relink(t_bc, b, c, n);
}

std::optional<std::uint32_t> locate_point(const TriMesh& mesh, const Point2& p) {
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Tri& tri = mesh.triangles[t];
    const Point2& a = mesh.vertices[tri[0]];
    const Point2& b = mesh.vertices[tri[1]];
    const Point2& c = mesh.vertices[tri[2]];
    if (orient2d(a, b, p) != Sign::Negative && orient2d(b, c, p) != Sign::Negative &&
        orient2d(c, a, p) != Sign::Negative) {
      return std::uint32_t(t);
    }
  }
  return std::nullopt;
}

}  // namespace trigen
