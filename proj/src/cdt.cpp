// Constrained Delaunay triangulation: polygon validation, incremental
// Delaunay insertion with a ghost-triangle hull layer, segment insertion by
// cavity re-triangulation, and exterior/hole removal by crossing parity.

#include "trigen/cdt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace trigen {

// ---------------------------------------------------------------------------
// Polygon validation
// ---------------------------------------------------------------------------

namespace {

std::string pt_str(const Point2& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

std::string loop_name(std::size_t loop_id) {
  return loop_id == 0 ? std::string("outer loop") : "hole " + std::to_string(loop_id - 1);
}

// Strip consecutive exact duplicates, including across the wrap-around.
std::vector<Point2> merge_consecutive(const std::vector<Point2>& loop) {
  std::vector<Point2> out;
  out.reserve(loop.size());
  for (const Point2& p : loop) {
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

}  // namespace

PolygonValidation validate_polygon(const PolygonDomain& domain) {
  PolygonValidation result;
  auto defect = [&result](std::string msg) { result.defects.push_back(std::move(msg)); };

  std::vector<std::vector<Point2>> loops;
  loops.push_back(merge_consecutive(domain.outer));
  for (const auto& hole : domain.holes) loops.push_back(merge_consecutive(hole));

  for (std::size_t li = 0; li < loops.size(); ++li) {
    for (const Point2& p : loops[li]) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        defect(loop_name(li) + ": non-finite coordinate " + pt_str(p));
        return result;
      }
    }
    if (loops[li].size() < 3) {
      defect(loop_name(li) + ": fewer than 3 distinct vertices");
    }
  }
  if (!result.ok()) return result;

  // Duplicate vertices anywhere (same or different loops): pinch points.
  {
    struct PointHash {
      std::size_t operator()(const Point2& p) const {
        std::uint64_t hx, hy;
        static_assert(sizeof hx == sizeof p.x);
        std::memcpy(&hx, &p.x, sizeof hx);
        std::memcpy(&hy, &p.y, sizeof hy);
        return std::hash<std::uint64_t>()(hx * 0x9E3779B97F4A7C15ull ^ hy);
      }
    };
    struct PointEq {
      bool operator()(const Point2& a, const Point2& b) const { return a == b; }
    };
    std::unordered_set<Point2, PointHash, PointEq> seen;
    for (const auto& loop : loops) {
      for (const Point2& p : loop) {
        if (!seen.insert(p).second) defect("duplicate vertex " + pt_str(p));
      }
    }
  }

  // Loop orientation and degeneracy; normalize outer CCW, holes CW.
  for (std::size_t li = 0; li < loops.size(); ++li) {
    const double area = polygon_area(loops[li]);
    if (area == 0.0) {
      defect(loop_name(li) + ": zero signed area");
      continue;
    }
    const bool want_ccw = (li == 0);
    if ((area > 0.0) != want_ccw) std::reverse(loops[li].begin(), loops[li].end());
  }
  if (!result.ok()) return result;

  // Edge-edge intersections, including collinear overlap (spikes). Edges
  // sharing a declared endpoint intersect only when they overlap beyond it.
  struct EdgeRef {
    std::size_t loop, index;
    Point2 a, b;
  };
  std::vector<EdgeRef> edges;
  for (std::size_t li = 0; li < loops.size(); ++li) {
    const auto& loop = loops[li];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      edges.push_back({li, i, loop[i], loop[(i + 1) % loop.size()]});
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (segments_intersect(edges[i].a, edges[i].b, edges[j].a, edges[j].b)) {
        defect(loop_name(edges[i].loop) + " edge " + std::to_string(edges[i].index) + " and " +
               loop_name(edges[j].loop) + " edge " + std::to_string(edges[j].index) +
               " intersect");
      }
    }
  }
  if (!result.ok()) return result;

  // Containment: holes strictly inside the outer loop, not inside each other.
  // With no edge crossings, testing loop vertices decides whole loops.
  for (std::size_t hi = 1; hi < loops.size(); ++hi) {
    for (const Point2& p : loops[hi]) {
      if (point_in_polygon(loops[0], p) != PointLocation::Inside) {
        defect(loop_name(hi) + ": vertex " + pt_str(p) + " not strictly inside the outer loop");
        break;
      }
    }
    for (std::size_t hj = 1; hj < loops.size(); ++hj) {
      if (hi == hj) continue;
      if (point_in_polygon(loops[hj], loops[hi][0]) == PointLocation::Inside) {
        defect(loop_name(hi) + " lies inside " + loop_name(hj));
      }
    }
  }
  if (!result.ok()) return result;

  result.normalized.outer = std::move(loops[0]);
  for (std::size_t li = 1; li < loops.size(); ++li) {
    result.normalized.holes.push_back(std::move(loops[li]));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Delaunay triangulation (incremental insertion, ghost hull layer)
// ---------------------------------------------------------------------------

namespace {

constexpr VertexIndex kGhost = std::numeric_limits<VertexIndex>::max();

// "d strictly inside the circumcircle of (a,b,c)" with the correct sign for
// either orientation of (a,b,c); collinear (a,b,c) counts as never inside.
Sign in_circle_any_orientation(const Point2& a, const Point2& b, const Point2& c,
                               const Point2& d) {
  switch (orient2d(a, b, c)) {
    case Sign::Positive:
      return in_circumcircle(a, b, c, d);
    case Sign::Negative:
      return in_circumcircle(a, c, b, d);
    default:
      return Sign::Negative;
  }
}

struct BwTriangulator {
  std::span<const Point2> pts;
  std::vector<Tri> tris;
  std::vector<std::array<std::int32_t, 3>> adj;  // slot i opposite vertex i
  std::vector<std::uint8_t> alive;
  std::vector<std::uint32_t> visit_mark;
  std::uint32_t epoch = 0;
  std::uint32_t walk_start = 0;  // an alive real triangle

  explicit BwTriangulator(std::span<const Point2> points) : pts(points) {}

  bool is_ghost(std::uint32_t t) const {
    return tris[t][0] == kGhost || tris[t][1] == kGhost || tris[t][2] == kGhost;
  }

  std::uint32_t add_triangle(const Tri& tri) {
    tris.push_back(tri);
    adj.push_back({-1, -1, -1});
    alive.push_back(1);
    visit_mark.push_back(0);
    return std::uint32_t(tris.size() - 1);
  }

  // The two real vertices of a ghost triangle as a directed edge (x, y) in
  // stored cyclic order; the ghost region is strictly left of (x, y).
  std::pair<VertexIndex, VertexIndex> ghost_edge(std::uint32_t t) const {
    const Tri& tri = tris[t];
    if (tri[2] == kGhost) return {tri[0], tri[1]};
    if (tri[0] == kGhost) return {tri[1], tri[2]};
    return {tri[2], tri[0]};
  }

  // p strictly inside the (generalized) circumdisk of t. For ghosts the disk
  // is the open halfplane left of the hull edge plus the edge's interior.
  bool in_disk(std::uint32_t t, const Point2& p) const {
    if (is_ghost(t)) {
      const auto [x, y] = ghost_edge(t);
      const Sign s = orient2d(pts[x], pts[y], p);
      if (s == Sign::Positive) return true;
      if (s == Sign::Zero) return collinear_point_in_open_segment(pts[x], pts[y], p);
      return false;
    }
    const Tri& tri = tris[t];
    return in_circumcircle(pts[tri[0]], pts[tri[1]], pts[tri[2]], p) == Sign::Positive;
  }

  std::uint32_t ghost_scan(const Point2& p) const {
    for (std::uint32_t t = 0; t < tris.size(); ++t) {
      if (alive[t] && is_ghost(t) && in_disk(t, p)) return t;
    }
    throw CdtError("internal: point outside hull not visible from any hull edge");
  }

  // Seed triangle for the insertion cavity of p: a real triangle whose
  // closed region contains p, or a ghost whose halfplane does.
  std::uint32_t locate(const Point2& p) {
    std::uint32_t cur = walk_start;
    const std::size_t cap = 2 * tris.size() + 16;
    for (std::size_t step = 0; step < cap; ++step) {
      const Tri& tri = tris[cur];
      int exit_slot = -1;
      for (int k = 0; k < 3; ++k) {
        const VertexIndex u = tri[(k + 1) % 3];
        const VertexIndex v = tri[(k + 2) % 3];
        if (orient2d(pts[u], pts[v], p) == Sign::Negative) {
          exit_slot = k;
          break;
        }
      }
      if (exit_slot == -1) return cur;
      const std::int32_t nb = adj[cur][exit_slot];
      if (nb < 0) throw CdtError("internal: walk left the triangulation");
      if (is_ghost(std::uint32_t(nb))) return ghost_scan(p);
      cur = std::uint32_t(nb);
    }
    // Fallback for a (theoretically impossible) walk cycle: any triangle
    // whose disk holds p seeds the same cavity.
    for (std::uint32_t t = 0; t < tris.size(); ++t) {
      if (alive[t] && in_disk(t, p)) return t;
    }
    throw CdtError("internal: no triangle admits the inserted point");
  }

  struct BoundaryEdge {
    VertexIndex u, v;           // directed, cavity on the left
    std::uint32_t outside;      // triangle beyond the edge
    int outside_slot;           // slot of this edge in `outside`
  };

  void insert(VertexIndex p_idx) {
    const Point2& p = pts[p_idx];
    const std::uint32_t seed = locate(p);

    if (!is_ghost(seed)) {
      for (const VertexIndex v : tris[seed]) {
        if (pts[v] == p) {
          throw CdtError("duplicate point " + pt_str(p));
        }
      }
    }

    // Cavity: all triangles whose disk strictly contains p (connected).
    ++epoch;
    std::vector<std::uint32_t> cavity;
    std::vector<BoundaryEdge> boundary;
    std::vector<std::uint32_t> stack{seed};
    visit_mark[seed] = epoch;
    while (!stack.empty()) {
      const std::uint32_t t = stack.back();
      stack.pop_back();
      cavity.push_back(t);
      for (int k = 0; k < 3; ++k) {
        const std::int32_t nb32 = adj[t][k];
        if (nb32 < 0) throw CdtError("internal: open adjacency during insertion");
        const auto nb = std::uint32_t(nb32);
        if (visit_mark[nb] == epoch) continue;
        if (in_disk(nb, p)) {
          visit_mark[nb] = epoch;
          stack.push_back(nb);
        } else {
          int oslot = -1;
          for (int s = 0; s < 3; ++s) {
            if (adj[nb][s] == std::int32_t(t)) oslot = s;
          }
          boundary.push_back({tris[t][(k + 1) % 3], tris[t][(k + 2) % 3], nb, oslot});
        }
      }
    }

    // The cavity boundary is a simple cycle; re-fan it around p starting
    // from its lexicographically smallest directed edge.
    std::unordered_map<VertexIndex, std::size_t> next_from;
    next_from.reserve(boundary.size());
    std::size_t first = 0;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
      next_from[boundary[i].u] = i;
      const auto key = [](const BoundaryEdge& e) {
        return (std::uint64_t(e.u) << 32) | e.v;
      };
      if (key(boundary[i]) < key(boundary[first])) first = i;
    }
    if (next_from.size() != boundary.size()) {
      throw CdtError("internal: cavity boundary is not a simple cycle");
    }

    for (const std::uint32_t t : cavity) alive[t] = 0;

    std::vector<std::uint32_t> fan;
    fan.reserve(boundary.size());
    std::size_t e = first;
    for (std::size_t count = 0; count < boundary.size(); ++count) {
      const BoundaryEdge& be = boundary[e];
      const std::uint32_t nt = add_triangle({be.u, be.v, p_idx});
      adj[nt][2] = std::int32_t(be.outside);  // slot 2 opposite p: edge (u, v)
      adj[be.outside][be.outside_slot] = std::int32_t(nt);
      fan.push_back(nt);
      e = next_from.at(be.v);
    }
    if (e != first) throw CdtError("internal: cavity boundary did not close");

    for (std::size_t i = 0; i < fan.size(); ++i) {
      const std::uint32_t cur = fan[i];
      const std::uint32_t nxt = fan[(i + 1) % fan.size()];
      adj[cur][0] = std::int32_t(nxt);  // edge (v, p) of cur
      adj[nxt][1] = std::int32_t(cur);  // same edge seen as (p, u) in nxt
    }

    for (const std::uint32_t t : fan) {
      if (!is_ghost(t)) {
        walk_start = t;
        break;
      }
    }
  }

  TriMesh finish() const {
    TriMesh mesh;
    mesh.vertices.assign(pts.begin(), pts.end());
    for (std::uint32_t t = 0; t < tris.size(); ++t) {
      if (alive[t] && !is_ghost(t)) mesh.triangles.push_back(tris[t]);
    }
    build_adjacency(mesh);
    return mesh;
  }
};

// Deterministic resolution of exactly cocircular quads: flip interior edges
// of such quads until the kept diagonal is the one whose smaller endpoint
// index is lowest. Each flip strictly lowers that minimum, so this ends.
void canonicalize_cocircular(TriMesh& mesh) {
  bool changed = true;
  std::size_t guard = 0;
  while (changed) {
    if (++guard > mesh.triangles.size() + 16) {
      throw CdtError("internal: cocircular canonicalization did not settle");
    }
    changed = false;
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
      for (int k = 0; k < 3; ++k) {
        const std::int32_t n = mesh.neighbors[t][k];
        if (n < 0 || std::uint32_t(n) < t) continue;
        const VertexIndex a = mesh.triangles[t][(k + 1) % 3];
        const VertexIndex b = mesh.triangles[t][(k + 2) % 3];
        const VertexIndex c = mesh.triangles[t][k];
        VertexIndex d = kGhost;
        for (int s = 0; s < 3; ++s) {
          const Tri& nt = mesh.triangles[std::uint32_t(n)];
          if (nt[(s + 1) % 3] == b && nt[(s + 2) % 3] == a) d = nt[s];
        }
        if (d == kGhost) continue;
        if (std::min(c, d) >= std::min(a, b)) continue;
        const Point2& pa = mesh.vertices[a];
        const Point2& pb = mesh.vertices[b];
        const Point2& pc = mesh.vertices[c];
        const Point2& pd = mesh.vertices[d];
        if (in_circumcircle(pa, pb, pc, pd) != Sign::Zero) continue;
        // Four distinct concyclic points: the quad is strictly convex, so
        // the flipped pair is positively oriented.
        flip_edge(mesh, t, k);
        changed = true;
      }
    }
  }
  build_adjacency(mesh);  // refresh boundary flags (topology-only flips)
}

}  // namespace

TriMesh delaunay(std::span<const Point2> points, std::uint64_t shuffle_seed) {
  if (points.size() < 3) throw CdtError("delaunay: need at least 3 points");

  std::vector<VertexIndex> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = VertexIndex(i);
  std::mt19937_64 rng(shuffle_seed);
  std::shuffle(order.begin(), order.end(), rng);

  const VertexIndex i0 = order[0];
  const VertexIndex i1 = order[1];
  if (points[i0] == points[i1]) {
    throw CdtError("duplicate point " + pt_str(points[i0]));
  }
  std::size_t idx2 = order.size();
  for (std::size_t j = 2; j < order.size(); ++j) {
    if (orient2d(points[i0], points[i1], points[order[j]]) != Sign::Zero) {
      idx2 = j;
      break;
    }
  }
  if (idx2 == order.size()) throw CdtError("delaunay: all points are collinear");
  VertexIndex i2 = order[idx2];

  VertexIndex j1 = i1, j2 = i2;
  if (orient2d(points[i0], points[j1], points[j2]) == Sign::Negative) std::swap(j1, j2);

  BwTriangulator bw(points);
  bw.add_triangle({i0, j1, j2});
  bw.add_triangle({j1, i0, kGhost});
  bw.add_triangle({j2, j1, kGhost});
  bw.add_triangle({i0, j2, kGhost});
  // Link the four seed triangles by matching directed edges.
  for (std::uint32_t t = 0; t < 4; ++t) {
    for (int k = 0; k < 3; ++k) {
      if (bw.adj[t][k] != -1) continue;
      const VertexIndex u = bw.tris[t][(k + 1) % 3];
      const VertexIndex v = bw.tris[t][(k + 2) % 3];
      for (std::uint32_t o = 0; o < 4; ++o) {
        for (int s = 0; s < 3; ++s) {
          if (o == t) continue;
          if (bw.tris[o][(s + 1) % 3] == v && bw.tris[o][(s + 2) % 3] == u) {
            bw.adj[t][k] = std::int32_t(o);
            bw.adj[o][s] = std::int32_t(t);
          }
        }
      }
    }
  }
  bw.walk_start = 0;

  for (std::size_t j = 2; j < order.size(); ++j) {
    if (j == idx2) continue;
    bw.insert(order[j]);
  }

  TriMesh mesh = bw.finish();
  canonicalize_cocircular(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// Constrained edges
// ---------------------------------------------------------------------------

namespace {

// Anglada-style re-triangulation of the pseudo-polygon left of base (u, v)
// with boundary chain `chain` listed from u's side to v's side.
void triangulate_pseudo(const TriMesh& mesh, VertexIndex u, VertexIndex v,
                        std::span<const VertexIndex> chain, std::vector<Tri>& out) {
  if (chain.empty()) return;
  const auto& pts = mesh.vertices;
  std::size_t best = 0;
  for (std::size_t j = 1; j < chain.size(); ++j) {
    const Point2& pc = pts[chain[best]];
    const Point2& pw = pts[chain[j]];
    if (orient2d(pts[u], pts[v], pc) == Sign::Zero) {
      if (orient2d(pts[u], pts[v], pw) != Sign::Zero) best = j;
      continue;
    }
    if (in_circle_any_orientation(pts[u], pts[v], pc, pw) == Sign::Positive) best = j;
  }
  const VertexIndex c = chain[best];
  if (orient2d(pts[u], pts[v], pts[c]) != Sign::Positive) {
    throw CdtError("internal: cavity re-triangulation produced a flipped triangle");
  }
  triangulate_pseudo(mesh, u, c, chain.subspan(0, best), out);
  triangulate_pseudo(mesh, c, v, chain.subspan(best + 1), out);
  out.push_back({u, v, c});
}

// Replace the triangles crossed by segment (a, b) with the re-triangulated
// upper and lower cavities so (a, b) becomes an edge.
void insert_segment(TriMesh& mesh, VertexIndex a, VertexIndex b) {
  const auto& pts = mesh.vertices;

  {
    std::unordered_set<std::uint64_t> edge_keys;
    edge_keys.reserve(mesh.triangles.size() * 3);
    for (const Tri& tri : mesh.triangles) {
      edge_keys.insert(EdgeSet::key(tri[0], tri[1]));
      edge_keys.insert(EdgeSet::key(tri[1], tri[2]));
      edge_keys.insert(EdgeSet::key(tri[2], tri[0]));
    }
    if (edge_keys.count(EdgeSet::key(a, b))) return;  // already an edge
  }

  // First crossed triangle: the one whose corner cone at `a` contains the
  // ray towards b.
  std::uint32_t cur = UINT32_MAX;
  VertexIndex right = 0, left = 0;  // crossed edge, right/left of a->b
  for (std::uint32_t t = 0; t < mesh.triangles.size() && cur == UINT32_MAX; ++t) {
    const Tri& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      if (tri[i] != a) continue;
      const VertexIndex u = tri[(i + 1) % 3];
      const VertexIndex v = tri[(i + 2) % 3];
      const Sign su = orient2d(pts[a], pts[b], pts[u]);
      const Sign sv = orient2d(pts[a], pts[b], pts[v]);
      if (su == Sign::Zero && collinear_point_in_open_segment(pts[a], pts[b], pts[u])) {
        throw CdtError("constraint segment passes through vertex " + std::to_string(u));
      }
      if (sv == Sign::Zero && collinear_point_in_open_segment(pts[a], pts[b], pts[v])) {
        throw CdtError("constraint segment passes through vertex " + std::to_string(v));
      }
      if (su == Sign::Negative && sv == Sign::Positive) {
        cur = t;
        right = u;
        left = v;
      }
      break;
    }
  }
  if (cur == UINT32_MAX) {
    throw CdtError("internal: no triangle at vertex " + std::to_string(a) +
                   " faces the constraint segment");
  }

  std::vector<std::uint32_t> cavity{cur};
  std::vector<VertexIndex> upper{left};   // strictly left of a->b, in order
  std::vector<VertexIndex> lower{right};  // strictly right of a->b, in order

  while (true) {
    if (mesh.constrained.contains(right, left)) {
      throw CdtError("constraint segments cross between vertices " + std::to_string(right) +
                     " and " + std::to_string(left));
    }
    // Step across the crossed edge (right, left).
    std::int32_t nxt = -1;
    const std::uint32_t t = cavity.back();
    for (int k = 0; k < 3; ++k) {
      const VertexIndex eu = mesh.triangles[t][(k + 1) % 3];
      const VertexIndex ev = mesh.triangles[t][(k + 2) % 3];
      if (EdgeSet::key(eu, ev) == EdgeSet::key(right, left)) nxt = mesh.neighbors[t][k];
    }
    if (nxt < 0) throw CdtError("internal: constraint walk left the mesh");
    const auto nt = std::uint32_t(nxt);
    cavity.push_back(nt);

    VertexIndex w = kGhost;
    for (const VertexIndex cand : mesh.triangles[nt]) {
      if (cand != right && cand != left) w = cand;
    }
    if (w == b) break;

    const Sign sw = orient2d(pts[a], pts[b], pts[w]);
    if (sw == Sign::Zero) {
      if (collinear_point_in_open_segment(pts[a], pts[b], pts[w])) {
        throw CdtError("constraint segment passes through vertex " + std::to_string(w));
      }
      throw CdtError("internal: constraint walk hit a collinear vertex outside the segment");
    }
    if (sw == Sign::Positive) {
      upper.push_back(w);
      left = w;
    } else {
      lower.push_back(w);
      right = w;
    }
  }

  std::vector<Tri> fresh;
  fresh.reserve(cavity.size());
  triangulate_pseudo(mesh, a, b, upper, fresh);
  std::reverse(lower.begin(), lower.end());
  triangulate_pseudo(mesh, b, a, lower, fresh);
  if (fresh.size() != cavity.size()) {
    throw CdtError("internal: cavity re-triangulation changed the triangle count");
  }

  std::vector<std::uint8_t> dead(mesh.triangles.size(), 0);
  for (const std::uint32_t t : cavity) dead[t] = 1;
  std::vector<Tri> kept;
  kept.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (!dead[t]) kept.push_back(mesh.triangles[t]);
  }
  kept.insert(kept.end(), fresh.begin(), fresh.end());
  mesh.triangles = std::move(kept);
  build_adjacency(mesh);
}

}  // namespace

TriMesh constrain_edges(TriMesh mesh, const std::vector<std::pair<VertexIndex, VertexIndex>>& edges) {
  if (!mesh.adjacency_valid) build_adjacency(mesh);
  for (const auto& [a, b] : edges) {
    if (a == b || a >= mesh.vertices.size() || b >= mesh.vertices.size()) {
      throw CdtError("constrain_edges: invalid edge (" + std::to_string(a) + "," +
                     std::to_string(b) + ")");
    }
    insert_segment(mesh, a, b);
    mesh.constrained.insert(a, b);
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Exterior / hole removal
// ---------------------------------------------------------------------------

TriMesh remove_exterior(TriMesh mesh, const PolygonDomain& domain) {
  (void)domain;  // the constrained loops already encode the domain
  if (!mesh.adjacency_valid) build_adjacency(mesh);
  const std::size_t nt = mesh.triangles.size();

  // dist[t]: minimum number of constrained edges a path from t to the
  // convex-hull exterior must cross. Triangles at odd depth are inside.
  constexpr int kUnset = -1;
  std::vector<int> dist(nt, kUnset);
  std::deque<std::uint32_t> queue;

  const auto edge_of = [&mesh](std::uint32_t t, int k) {
    return std::make_pair(mesh.triangles[t][(k + 1) % 3], mesh.triangles[t][(k + 2) % 3]);
  };

  for (std::uint32_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      if (mesh.neighbors[t][k] != kNoNeighbor) continue;
      const auto [u, v] = edge_of(t, k);
      const int d = mesh.constrained.contains(u, v) ? 1 : 0;
      if (dist[t] == kUnset || d < dist[t]) {
        dist[t] = d;
      }
    }
    if (dist[t] != kUnset) {
      if (dist[t] == 0) {
        queue.push_front(t);
      } else {
        queue.push_back(t);
      }
    }
  }
  if (queue.empty() && nt > 0) {
    throw CdtError("remove_exterior: triangulation has no boundary");
  }

  std::vector<std::uint8_t> settled(nt, 0);
  while (!queue.empty()) {
    const std::uint32_t t = queue.front();
    queue.pop_front();
    if (settled[t]) continue;
    settled[t] = 1;
    for (int k = 0; k < 3; ++k) {
      const std::int32_t n = mesh.neighbors[t][k];
      if (n < 0) continue;
      const auto [u, v] = edge_of(t, k);
      const int w = mesh.constrained.contains(u, v) ? 1 : 0;
      const int nd = dist[t] + w;
      if (dist[std::uint32_t(n)] == kUnset || nd < dist[std::uint32_t(n)]) {
        dist[std::uint32_t(n)] = nd;
        if (w == 0) {
          queue.push_front(std::uint32_t(n));
        } else {
          queue.push_back(std::uint32_t(n));
        }
      }
    }
  }

  // A constrained interior edge must separate depths of opposite parity;
  // otherwise some constraint loop is open or inconsistent.
  for (std::uint32_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const std::int32_t n = mesh.neighbors[t][k];
      if (n < 0 || std::uint32_t(n) < t) continue;
      const auto [u, v] = edge_of(t, k);
      const bool constrained = mesh.constrained.contains(u, v);
      const bool same_parity = (dist[t] % 2) == (dist[std::uint32_t(n)] % 2);
      if (constrained && same_parity) {
        throw CdtError("remove_exterior: constrained edge (" + std::to_string(u) + "," +
                       std::to_string(v) + ") does not separate interior from exterior");
      }
      if (!constrained && !same_parity) {
        throw CdtError("remove_exterior: interior parity is inconsistent across edge (" +
                       std::to_string(u) + "," + std::to_string(v) + ")");
      }
    }
  }

  std::vector<Tri> kept;
  for (std::uint32_t t = 0; t < nt; ++t) {
    if (dist[t] % 2 == 1) kept.push_back(mesh.triangles[t]);
  }
  if (kept.empty()) {
    throw CdtError("remove_exterior: nothing remains inside the constrained loops");
  }
  mesh.triangles = std::move(kept);
  build_adjacency(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// Pipeline front end
// ---------------------------------------------------------------------------

TriMesh initial_triangulation(const PolygonDomain& domain, std::uint64_t seed) {
  PolygonValidation val = validate_polygon(domain);
  if (!val.ok()) {
    std::string what = "invalid polygon:";
    for (const auto& d : val.defects) what += "\n  - " + d;
    throw InvalidPolygonError(what, val.defects);
  }
  const PolygonDomain& dom = val.normalized;

  std::vector<Point2> points(dom.outer.begin(), dom.outer.end());
  std::vector<std::pair<VertexIndex, VertexIndex>> segments;
  const auto add_loop_edges = [&segments](std::size_t start, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      segments.emplace_back(VertexIndex(start + i), VertexIndex(start + (i + 1) % count));
    }
  };
  add_loop_edges(0, dom.outer.size());
  for (const auto& hole : dom.holes) {
    const std::size_t start = points.size();
    points.insert(points.end(), hole.begin(), hole.end());
    add_loop_edges(start, hole.size());
  }

  TriMesh mesh = delaunay(points, seed);
  mesh = constrain_edges(std::move(mesh), segments);
  mesh = remove_exterior(std::move(mesh), dom);
  return mesh;
}

}  // namespace trigen
