#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "trigen/config.hpp"
#include "trigen/driver.hpp"
#include "trigen/errors.hpp"
#include "trigen/io.hpp"
#include "trigen/mesh.hpp"

using namespace trigen;
using namespace trigen::testing;

TEST_CASE("config validation rejects out-of-range fields") {
  CHECK_NOTHROW(validate(GenConfig{}));

  auto reject = [](auto&& mutate) {
    GenConfig cfg;
    mutate(cfg);
    CHECK_THROWS_AS(validate(cfg), Error);
  };
  reject([](GenConfig& c) { c.theta = 0.0; });
  reject([](GenConfig& c) { c.theta = 1.0; });
  reject([](GenConfig& c) { c.theta = -0.2; });
  reject([](GenConfig& c) { c.max_refinements = -1; });
  reject([](GenConfig& c) { c.quality_target = 0.0; });
  reject([](GenConfig& c) { c.quality_target = 1.5; });
  reject([](GenConfig& c) { c.min_angle_target = -0.1; });
  reject([](GenConfig& c) { c.smooth_max_iters = -1; });
  reject([](GenConfig& c) { c.smooth_tol = 0.0; });
  reject([](GenConfig& c) { c.flip_sweep_cap = -1; });
  reject([](GenConfig& c) { c.solver_tol = 0.0; });
  reject([](GenConfig& c) { c.solver_max_iter_factor = 0; });
}

TEST_CASE("unit square run reaches the default target with a coherent report") {
  const GenResult result = adaptmesh(square_domain());
  const GenReport& report = result.report;

  CHECK(report.target_reached);
  CHECK(report.iterations_run >= 1);
  CHECK(report.wall_time_seconds >= 0.0);
  REQUIRE(report.iterations.size() == static_cast<std::size_t>(report.iterations_run) + 1);

  for (std::size_t k = 0; k < report.iterations.size(); ++k) {
    const IterationStats& row = report.iterations[k];
    CHECK(row.iteration == static_cast<int>(k));
    CHECK(row.triangle_count > 0);
    CHECK(row.vertex_count > 2);
    CHECK(row.min_quality > 0.0);
    // The average is a rounded sum, so allow one ulp of slack when all
    // triangles share the same quality.
    CHECK(row.min_quality <= row.average_quality * (1.0 + 1e-14));
    CHECK(row.average_quality <= 1.0);
    CHECK(row.average_min_angle > 0.0);
  }

  // Row 0 records the initial triangulation; row 1 follows a mark-all pass,
  // because the square's two-triangle CDT has no interior vertex to solve
  // for. Every later row carries the indicator maximum of a real solve.
  CHECK(report.iterations.front().eta_max == 0.0);
  REQUIRE(report.iterations.size() >= 3);
  CHECK(report.iterations[1].eta_max == 0.0);
  for (std::size_t k = 2; k < report.iterations.size(); ++k) {
    CHECK(report.iterations[k].eta_max > 0.0);
  }

  const IterationStats& last = report.iterations.back();
  CHECK(last.average_quality >= 0.9);
  CHECK(last.triangle_count == result.mesh.triangles.size());
  CHECK(last.vertex_count == result.mesh.vertices.size());
  CHECK(validate_conformity(result.mesh, true).ok());
}

TEST_CASE("observer sees stages in order, every stage conforming") {
  std::vector<std::pair<int, PipelineStage>> seen;
  std::vector<std::size_t> vertex_counts;
  TriMesh last_mesh;
  const StageObserver observer = [&](int iter, PipelineStage stage, const TriMesh& mesh) {
    seen.emplace_back(iter, stage);
    vertex_counts.push_back(mesh.vertices.size());
    CHECK(validate_conformity(mesh, true).ok());
    last_mesh = mesh;
  };

  const GenResult result = adaptmesh(lshape_domain(), GenConfig{}, observer);
  const int runs = result.report.iterations_run;

  REQUIRE(seen.size() == static_cast<std::size_t>(2 * runs) + 1);
  CHECK(seen[0] == std::pair{0, PipelineStage::Initial});
  for (int k = 1; k <= runs; ++k) {
    CHECK(seen[2 * k - 1] == std::pair{k, PipelineStage::Refined});
    CHECK(seen[2 * k] == std::pair{k, PipelineStage::Smoothed});
    // Refinement adds vertices; smoothing preserves the count.
    CHECK(vertex_counts[2 * k - 1] > vertex_counts[2 * k - 2]);
    CHECK(vertex_counts[2 * k] == vertex_counts[2 * k - 1]);
  }

  // The returned mesh is the last smoothed mesh the observer saw.
  CHECK(meshes_identical(result.mesh, last_mesh));
}

TEST_CASE("runs are deterministic") {
  const GenResult a = adaptmesh(lshape_domain());
  const GenResult b = adaptmesh(lshape_domain());

  CHECK(meshes_identical(a.mesh, b.mesh));
  CHECK(a.report.iterations_run == b.report.iterations_run);
  CHECK(a.report.target_reached == b.report.target_reached);
  REQUIRE(a.report.iterations.size() == b.report.iterations.size());
  for (std::size_t k = 0; k < a.report.iterations.size(); ++k) {
    CHECK(a.report.iterations[k].eta_max == b.report.iterations[k].eta_max);
    CHECK(a.report.iterations[k].average_quality == b.report.iterations[k].average_quality);
  }
}

TEST_CASE("average min-angle target offers an alternative stop rule") {
  GenConfig cfg;
  cfg.quality_target = 1.0;  // unreachable on its own
  cfg.min_angle_target = 30.0 * M_PI / 180.0;

  const GenResult result = adaptmesh(square_domain(), cfg);
  CHECK(result.report.target_reached);
  CHECK(result.report.iterations.back().average_min_angle >= cfg.min_angle_target);
  CHECK(result.report.iterations.back().average_quality < 1.0);
}

TEST_CASE("zero refinement budget yields only the initial record") {
  GenConfig cfg;
  cfg.max_refinements = 0;

  const GenResult result = adaptmesh(square_domain(), cfg);
  CHECK(result.report.iterations_run == 0);
  REQUIRE(result.report.iterations.size() == 1);
  CHECK_FALSE(result.report.target_reached);
  CHECK(result.mesh.triangles.size() == 2);
}

TEST_CASE("an unreachable target is reported honestly") {
  GenConfig cfg;
  cfg.quality_target = 1.0;
  cfg.max_refinements = 3;

  const GenResult result = adaptmesh(square_domain(), cfg);
  CHECK_FALSE(result.report.target_reached);
  CHECK(result.report.iterations_run == 3);
  CHECK(result.report.iterations.size() == 4);
}

TEST_CASE("domain with a hole conserves area through every stage") {
  const PolygonDomain domain = parse_domain_file(TRIGEN_INPUT_DIR "/rect_hole.json");
  const double expected_area = 32.0 - 32.0 * std::sin(M_PI / 32.0);

  const StageObserver observer = [&](int, PipelineStage, const TriMesh& mesh) {
    CHECK(total_area(mesh) == doctest::Approx(expected_area).epsilon(1e-12));
  };
  const GenResult result = adaptmesh(domain, GenConfig{}, observer);

  CHECK(result.report.target_reached);
  CHECK(total_area(result.mesh) == doctest::Approx(expected_area).epsilon(1e-12));
  CHECK(validate_conformity(result.mesh, true).ok());
}

TEST_CASE("invalid domains and configs are rejected up front") {
  PolygonDomain bowtie;
  bowtie.outer = {{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(static_cast<void>(adaptmesh(bowtie)), InvalidPolygonError);

  GenConfig bad;
  bad.theta = 2.0;
  CHECK_THROWS_AS(static_cast<void>(adaptmesh(square_domain(), bad)), Error);
}
