#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "trigen/cdt.hpp"
#include "trigen/config.hpp"
#include "trigen/mesh.hpp"
#include "trigen/refine.hpp"
#include "trigen/smooth.hpp"

using namespace trigen;
using namespace trigen::testing;

namespace {

// Quad (0,0)-(2,0)-(3,1)-(0,1) triangulated with the diagonal 0-2, which is
// not locally Delaunay: vertex 3 lies strictly inside the circumcircle of
// triangle (0, 1, 2).
TriMesh bad_diagonal_quad(bool constrain_diagonal) {
  TriMesh mesh;
  mesh.vertices = {{0.0, 0.0}, {2.0, 0.0}, {3.0, 1.0}, {0.0, 1.0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  mesh.constrained.insert(0, 1);
  mesh.constrained.insert(1, 2);
  mesh.constrained.insert(2, 3);
  mesh.constrained.insert(3, 0);
  if (constrain_diagonal) mesh.constrained.insert(0, 2);
  build_adjacency(mesh);
  return mesh;
}

EdgeSet triangle_edges(const TriMesh& mesh) {
  EdgeSet edges;
  for (const auto& tri : mesh.triangles) {
    edges.insert(tri[0], tri[1]);
    edges.insert(tri[1], tri[2]);
    edges.insert(tri[2], tri[0]);
  }
  return edges;
}

// A moderately irregular mesh: triangulated star polygon, refined once.
TriMesh star_mesh(std::uint32_t seed) {
  PolygonDomain domain;
  domain.outer = random_star_polygon(14, seed);
  TriMesh mesh = initial_triangulation(domain);
  std::vector<std::uint32_t> all(mesh.triangles.size());
  for (std::uint32_t t = 0; t < all.size(); ++t) all[t] = t;
  return rgb_refine(std::move(mesh), all);
}

}  // namespace

TEST_CASE("cpt step pulls the perturbed criss-cross center home in one move") {
  // The center's patch covers the whole unit square, so its area-weighted
  // centroid target is the square's centroid (0.5, 0.5) no matter where the
  // center currently sits.
  TriMesh mesh = crisscross_mesh();
  mesh.vertices[4] = {0.5 + 1e-3, 0.5 - 2e-3};

  const CptStepResult first = cpt_step(mesh);
  CHECK(mesh.vertices[4].x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(mesh.vertices[4].y == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(first.max_displacement == doctest::Approx(std::hypot(1e-3, 2e-3)).epsilon(1e-9));
  CHECK(first.max_relative_displacement > 0.0);

  const CptStepResult second = cpt_step(mesh);
  CHECK(second.max_displacement <= 1e-14);
}

TEST_CASE("cpt step never moves boundary vertices") {
  TriMesh mesh = star_mesh(7);
  std::vector<Point2> before = mesh.vertices;

  for (int step = 0; step < 5; ++step) cpt_step(mesh);

  REQUIRE(mesh.vertices.size() == before.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.boundary_vertex[v]) continue;
    CHECK(mesh.vertices[v].x == before[v].x);
    CHECK(mesh.vertices[v].y == before[v].y);
  }
}

TEST_CASE("cpt step keeps every triangle positively oriented") {
  for (std::uint32_t seed : {3u, 11u, 29u}) {
    TriMesh mesh = star_mesh(seed);
    for (int step = 0; step < 5; ++step) {
      cpt_step(mesh);
      CHECK(validate_conformity(mesh, false).ok());
    }
  }
}

TEST_CASE("cpt step matches the serial reference bitwise") {
  TriMesh parallel_mesh = star_mesh(13);
  TriMesh serial_mesh = parallel_mesh;

  for (int step = 0; step < 3; ++step) {
    const CptStepResult par = cpt_step(parallel_mesh);
    const CptStepResult ser = cpt_step_serial(serial_mesh);
    CHECK(par.max_displacement == ser.max_displacement);
    CHECK(par.max_relative_displacement == ser.max_relative_displacement);
    CHECK(meshes_identical(parallel_mesh, serial_mesh));
  }
}

TEST_CASE("cpt step is a no-op without interior vertices") {
  TriMesh mesh;
  mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  mesh.constrained.insert(0, 1);
  mesh.constrained.insert(1, 2);
  mesh.constrained.insert(2, 3);
  mesh.constrained.insert(3, 0);
  build_adjacency(mesh);
  const TriMesh before = mesh;

  const CptStepResult result = cpt_step(mesh);
  CHECK(result.max_displacement == 0.0);
  CHECK(result.max_relative_displacement == 0.0);
  CHECK(meshes_identical(mesh, before));
}

TEST_CASE("flip_edges repairs a non-Delaunay diagonal") {
  TriMesh mesh = bad_diagonal_quad(false);
  const double area_before = total_area(mesh);

  const std::size_t flips = flip_edges(mesh);
  CHECK(flips == 1);

  const EdgeSet edges = triangle_edges(mesh);
  CHECK(edges.contains(1, 3));
  CHECK(!edges.contains(0, 2));
  CHECK(delaunay_property_holds(mesh));
  CHECK(validate_conformity(mesh, true).ok());
  CHECK(total_area(mesh) == doctest::Approx(area_before).epsilon(1e-15));
}

TEST_CASE("flip_edges leaves constrained diagonals alone") {
  TriMesh mesh = bad_diagonal_quad(true);
  const TriMesh before = mesh;

  CHECK(flip_edges(mesh) == 0);
  CHECK(meshes_identical(mesh, before));
}

TEST_CASE("flip_edges is a no-op on a mesh that is already Delaunay") {
  TriMesh mesh = structured_square(2);
  const TriMesh before = mesh;

  CHECK(flip_edges(mesh) == 0);
  CHECK(meshes_identical(mesh, before));
}

TEST_CASE("flip_edges restores the Delaunay property after a vertex move") {
  TriMesh mesh = structured_square(2);

  // Find an interior vertex and push it toward a neighbor, invalidating the
  // local Delaunay condition without inverting any triangle.
  std::size_t moved = mesh.vertices.size();
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.boundary_vertex[v]) {
      moved = v;
      break;
    }
  }
  REQUIRE(moved < mesh.vertices.size());
  mesh.vertices[moved].x += 0.07;
  mesh.vertices[moved].y += 0.04;
  CHECK(validate_conformity(mesh, true).ok());
  CHECK(!delaunay_property_holds(mesh));

  flip_edges(mesh);
  CHECK(delaunay_property_holds(mesh));
  CHECK(validate_conformity(mesh, true).ok());
}

TEST_CASE("smooth improves average quality and preserves the mesh fabric") {
  TriMesh mesh = star_mesh(21);
  const double area_before = total_area(mesh);
  const double quality_before = quality_stats(mesh).average_quality;
  const EdgeSet constrained_before = mesh.constrained;
  const std::size_t vertices_before = mesh.vertices.size();

  smooth(mesh, GenConfig{});

  CHECK(quality_stats(mesh).average_quality > quality_before);
  CHECK(mesh.vertices.size() == vertices_before);
  CHECK(mesh.constrained == constrained_before);
  CHECK(total_area(mesh) == doctest::Approx(area_before).epsilon(1e-12));
  CHECK(validate_conformity(mesh, true).ok());
}

TEST_CASE("smooth works in both sub-step orders") {
  for (SmoothOrder order : {SmoothOrder::FlipFirst, SmoothOrder::MoveFirst}) {
    TriMesh mesh = star_mesh(5);
    const double quality_before = quality_stats(mesh).average_quality;

    GenConfig cfg;
    cfg.smooth_order = order;
    smooth(mesh, cfg);

    CHECK(quality_stats(mesh).average_quality > quality_before);
    CHECK(validate_conformity(mesh, true).ok());
  }
}

TEST_CASE("smooth converges to a fixpoint under repeated application") {
  TriMesh mesh = star_mesh(9);
  smooth(mesh, GenConfig{});
  const TriMesh settled = mesh;

  // A second full pass finds the mesh already below tolerance: vertices may
  // shift by strictly less than the stopping threshold, so quality changes
  // stay negligible.
  smooth(mesh, GenConfig{});
  const double drift = std::fabs(quality_stats(mesh).average_quality -
                                 quality_stats(settled).average_quality);
  CHECK(drift < 1e-3);
}
