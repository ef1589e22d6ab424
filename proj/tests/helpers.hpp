// Shared test fixtures: deterministic random generators, canonical meshes,
// and brute-force oracles the fast implementations are checked against.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "trigen/cdt.hpp"
#include "trigen/mesh.hpp"
#include "trigen/refine.hpp"

namespace trigen::testing {

inline std::vector<Point2> random_points(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                         double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {dist(rng), dist(rng)};
  return pts;
}

/// Simple star-shaped polygon: vertices at sorted angles with radii in
/// [0.4, 1.0] around the origin.
inline std::vector<Point2> random_star_polygon(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius_dist(0.4, 1.0);
  std::vector<double> angles(n);
  for (auto& a : angles) a = angle_dist(rng);
  std::sort(angles.begin(), angles.end());
  // Collapsing angles would make radial edges overlap; spread them apart.
  for (std::size_t i = 1; i < n; ++i) {
    if (angles[i] - angles[i - 1] < 1e-3) angles[i] = angles[i - 1] + 1e-3;
  }
  if (angles.back() >= 2.0 * std::numbers::pi) return random_star_polygon(n, seed + 1);
  std::vector<Point2> loop(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius_dist(rng);
    loop[i] = {r * std::cos(angles[i]), r * std::sin(angles[i])};
  }
  return loop;
}

/// Convex polygon: points on a circle at sorted distinct angles.
inline std::vector<Point2> random_convex_polygon(std::size_t n, std::uint64_t seed,
                                                 double radius = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);
  std::vector<double> angles(n);
  for (auto& a : angles) a = angle_dist(rng);
  std::sort(angles.begin(), angles.end());
  for (std::size_t i = 1; i < n; ++i) {
    if (angles[i] - angles[i - 1] < 1e-3) angles[i] = angles[i - 1] + 1e-3;
  }
  if (angles.back() >= 2.0 * std::numbers::pi) return random_convex_polygon(n, seed + 1, radius);
  std::vector<Point2> loop(n);
  for (std::size_t i = 0; i < n; ++i) {
    loop[i] = {radius * std::cos(angles[i]), radius * std::sin(angles[i])};
  }
  return loop;
}

inline PolygonDomain square_domain(double side = 1.0) {
  PolygonDomain d;
  d.outer = {{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}};
  return d;
}

inline PolygonDomain lshape_domain() {
  PolygonDomain d;
  d.outer = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  return d;
}

/// Unit square split into 4 triangles around the center vertex; the only
/// interior vertex is index 4. Boundary edges are constrained.
inline TriMesh crisscross_mesh() {
  TriMesh mesh;
  mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}};
  mesh.triangles = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  mesh.constrained.insert(0, 1);
  mesh.constrained.insert(1, 2);
  mesh.constrained.insert(2, 3);
  mesh.constrained.insert(3, 0);
  build_adjacency(mesh);
  return mesh;
}

/// Two-triangle unit square refined uniformly; h = longest edge = sqrt(2)/2^r.
inline TriMesh structured_square(int refinements) {
  TriMesh mesh = initial_triangulation(square_domain());
  for (int r = 0; r < refinements; ++r) {
    std::vector<std::uint32_t> all(mesh.triangles.size());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = std::uint32_t(t);
    mesh = rgb_refine(std::move(mesh), all);
  }
  return mesh;
}

/// O(n^2) Delaunay check: no vertex strictly inside any triangle circumdisk.
inline bool delaunay_property_holds(const TriMesh& mesh) {
  for (const Tri& tri : mesh.triangles) {
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      if (v == tri[0] || v == tri[1] || v == tri[2]) continue;
      if (in_circumcircle(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]],
                          mesh.vertices[v]) == Sign::Positive) {
        return false;
      }
    }
  }
  return true;
}

/// Bitwise mesh equality (vertices, triangles, constrained edges).
inline bool meshes_identical(const TriMesh& a, const TriMesh& b) {
  if (a.vertices.size() != b.vertices.size() || a.triangles.size() != b.triangles.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    if (a.vertices[i] != b.vertices[i]) return false;
  }
  for (std::size_t i = 0; i < a.triangles.size(); ++i) {
    if (a.triangles[i] != b.triangles[i]) return false;
  }
  return a.constrained == b.constrained;
}

}  // namespace trigen::testing
