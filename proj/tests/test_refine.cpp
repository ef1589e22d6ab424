#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "trigen/errors.hpp"
#include "trigen/refine.hpp"

using namespace trigen;
using namespace trigen::testing;

TEST_CASE("reference_edges: longest edge, ties by lowest opposite vertex") {
  TriMesh m;
  // unique longest edge: hypotenuse of the right isoceles, opposite vertex 0
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  build_adjacency(m);
  CHECK(reference_edges(m) == std::vector<int>{0});

  // exact tie: isoceles with legs longer than the base; the two long edges
  // are opposite vertices 0 and 1, so slot 0 wins
  TriMesh t;
  t.vertices = {{0, 0}, {1, 0}, {0.5, 2}};
  t.triangles = {{0, 1, 2}};
  build_adjacency(t);
  CHECK(reference_edges(t) == std::vector<int>{0});
}

TEST_CASE("closure: splitting spreads to reference edges across neighbors") {
  const TriMesh m = crisscross_mesh();
  // seed with one interior edge of triangle 0
  EdgeSet seed;
  seed.insert(1, 4);
  const EdgeSet closed = closure(m, seed);
  // triangle 0 = (0,1,4): has split edge, its reference edge (0,1) joins;
  // triangle 1 = (1,2,4): has split edge (1,4), its reference edge (1,2) joins
  CHECK(closed.contains(1, 4));
  CHECK(closed.contains(0, 1));
  CHECK(closed.contains(1, 2));
  // triangles 2 and 3 never acquire a split edge
  CHECK(!closed.contains(2, 3));
  CHECK(!closed.contains(3, 0));
  CHECK(!closed.contains(2, 4));
  CHECK(!closed.contains(3, 4));
  CHECK(closed.size() == 3);
}

TEST_CASE("rgb_refine: red split of one triangle, green neighbor") {
  TriMesh m;
  m.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  m.constrained.insert(0, 1);
  m.constrained.insert(1, 2);
  m.constrained.insert(2, 3);
  m.constrained.insert(3, 0);
  build_adjacency(m);

  const TriMesh r = rgb_refine(std::move(m), {0});
  // marked triangle -> 4 children; neighbor's reference edge is the shared
  // diagonal, so it splits green into 2
  CHECK(r.triangles.size() == 6);
  CHECK(r.vertices.size() == 7);  // 4 corners + 3 midpoints of triangle 0
  CHECK(validate_conformity(r, true).ok());
  CHECK(total_area(r) == doctest::Approx(1.0).epsilon(1e-15));
  // split constrained edges became two constrained halves
  CHECK(!r.constrained.contains(0, 1));
  CHECK(r.constrained.contains(2, 3));  // untouched boundary edge survives
  // midpoint of (0,1) is (0.5, 0); find it and check the halves
  VertexIndex m01 = UINT32_MAX;
  for (std::size_t v = 4; v < r.vertices.size(); ++v) {
    if (r.vertices[v] == Point2{0.5, 0.0}) m01 = VertexIndex(v);
  }
  REQUIRE(m01 != UINT32_MAX);
  CHECK(r.constrained.contains(0, m01));
  CHECK(r.constrained.contains(m01, 1));
}

TEST_CASE("rgb_refine: blue pattern via criss-cross closure") {
  // Marking triangle 0 of the criss-cross splits its three edges; closure
  // adds the reference (boundary) edges of triangles 1 and 3, which then
  // hold ref + one more split edge each: blue, 3 children. Triangle 2 is
  // untouched.
  const TriMesh r = rgb_refine(crisscross_mesh(), {0});
  CHECK(r.triangles.size() == 4 + 3 + 3 + 1);
  CHECK(r.vertices.size() == 5 + 5);
  CHECK(validate_conformity(r, true).ok());
  CHECK(total_area(r) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rgb_refine: mark-all is uniform red and preserves similarity") {
  TriMesh m = structured_square(3);  // 128 similar right isoceles triangles
  CHECK(m.triangles.size() == 128);
  CHECK(validate_conformity(m, true).ok());
  const QualityStats q = quality_stats(m);
  // all children remain similar to the two original triangles
  CHECK(q.min_quality == doctest::Approx(0.8284271247461903).epsilon(1e-13));
  CHECK(q.average_quality == doctest::Approx(0.8284271247461903).epsilon(1e-13));
  CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("rgb_refine: empty mark leaves the mesh unchanged") {
  TriMesh m = crisscross_mesh();
  const TriMesh r = rgb_refine(crisscross_mesh(), {});
  CHECK(meshes_identical(m, r));
}

TEST_CASE("rgb_refine: invalid and duplicate marks are rejected") {
  CHECK_THROWS_AS((void)rgb_refine(crisscross_mesh(), {4}), MeshError);
  CHECK_THROWS_AS((void)rgb_refine(crisscross_mesh(), {1, 1}), MeshError);
}

TEST_CASE("rgb_refine: deterministic") {
  const TriMesh a = rgb_refine(crisscross_mesh(), {0, 2});
  const TriMesh b = rgb_refine(crisscross_mesh(), {0, 2});
  CHECK(meshes_identical(a, b));
}

TEST_CASE("rgb_refine: repeated marked refinement stays conformal") {
  TriMesh m = initial_triangulation(lshape_domain());
  for (int round = 0; round < 4; ++round) {
    // mark a deterministic pseudo-random subset
    std::vector<std::uint32_t> marked;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
      if ((t * 2654435761u + round) % 3 == 0) marked.push_back(std::uint32_t(t));
    }
    if (marked.empty()) marked.push_back(0);
    m = rgb_refine(std::move(m), marked);
    CHECK(validate_conformity(m, true).ok());
    CHECK(total_area(m) == doctest::Approx(3.0).epsilon(1e-12));
  }
  CHECK(m.triangles.size() > 100);
}

TEST_CASE("rgb_refine: constrained chain length is preserved") {
  TriMesh m = initial_triangulation(lshape_domain());
  auto chain_length = [](const TriMesh& mesh) {
    double len = 0.0;
    for (const auto& [u, v] : mesh.constrained.sorted()) {
      len += norm(mesh.vertices[u] - mesh.vertices[v]);
    }
    return len;
  };
  const double before = chain_length(m);
  std::vector<std::uint32_t> all(m.triangles.size());
  for (std::size_t t = 0; t < all.size(); ++t) all[t] = std::uint32_t(t);
  const TriMesh r = rgb_refine(std::move(m), all);
  CHECK(chain_length(r) == doctest::Approx(before).epsilon(1e-13));
  CHECK(r.constrained.size() > 0);
}
