#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "quicci/error.hpp"
#include "quicci/intersection.hpp"
#include "quicci/mesh_synth.hpp"

using namespace quicci;

namespace {

// A large quad in the plane x = offset spanning y, z in [-extent, extent].
Mesh quad_plane_x(double offset, double extent) {
  Mesh m;
  m.vertices = {{offset, -extent, -extent},
                {offset, extent, -extent},
                {offset, extent, extent},
                {offset, -extent, extent}};
  m.normals.assign(4, {1, 0, 0});
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

Mesh scattered_triangles(uint64_t seed, int count, double extent) {
  Rng rng(seed);
  Mesh m;
  for (int t = 0; t < count; ++t) {
    const Vec3 center{rng.uniform(-extent, extent), rng.uniform(-extent, extent),
                      rng.uniform(-extent, extent)};
    const uint32_t base = static_cast<uint32_t>(m.vertices.size());
    for (int i = 0; i < 3; ++i) {
      m.vertices.push_back(center + Vec3{rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15),
                                         rng.uniform(-0.15, 0.15)});
      m.normals.push_back({0, 0, 1});
    }
    m.triangles.push_back({base, base + 1, base + 2});
  }
  return m;
}

double grid_oracle_agreement(const Mesh& mesh, const OrientedPoint& origin,
                             const DescriptorConfig& config, const testing::AngleTable& table) {
  const IntersectionCountGrid grid = compute_intersection_grid(mesh, origin, config);
  size_t matches = 0, cells = 0;
  for (uint32_t layer = 0; layer < config.layer_count; ++layer)
    for (uint32_t circle = 0; circle < config.circles_per_layer; ++circle) {
      const CircleGeometry g = circle_geometry(config, origin, layer, circle);
      const int expected =
          testing::sampled_circle_intersections(mesh, g.center, g.radius, g.plane_normal, table);
      ++cells;
      if (static_cast<int>(grid.at(layer, circle)) == expected) ++matches;
    }
  return static_cast<double>(matches) / static_cast<double>(cells);
}

}  // namespace

TEST_CASE("circle_geometry matches the closed-form layout") {
  const DescriptorConfig config{64, 64, 0.3};
  const OrientedPoint origin{{0, 0, 0}, {0, 0, 1}};

  const CircleGeometry g = circle_geometry(config, origin, 31, 0);
  CHECK(g.center.z == doctest::Approx(-0.00234375).epsilon(1e-12));
  CHECK(g.radius == doctest::Approx(0.3 / 64).epsilon(1e-12));
  CHECK(g.plane_normal == origin.normal);

  // Axial span between the first and last layers.
  const CircleGeometry first = circle_geometry(config, origin, 0, 0);
  const CircleGeometry last = circle_geometry(config, origin, 63, 0);
  CHECK((last.center - first.center).norm() == doctest::Approx(0.3 * 63.0 / 64.0).epsilon(1e-12));

  // The outermost circle has radius exactly R.
  CHECK(circle_geometry(config, origin, 0, 63).radius == doctest::Approx(0.3).epsilon(1e-12));

  CHECK_THROWS_AS(circle_geometry(config, origin, 64, 0), Error);
  CHECK_THROWS_AS(circle_geometry(config, origin, 0, 64), Error);
}

TEST_CASE("a plane slab cuts the unit circle twice") {
  const Mesh quad = quad_plane_x(0.5, 2.0);
  CHECK(count_circle_mesh_intersections(quad, {0, 0, 0}, 1.0, {0, 0, 1}) == 2);
  CHECK(count_circle_mesh_intersections(quad_plane_x(2.0, 2.0), {0, 0, 0}, 1.0, {0, 0, 1}) == 0);
}

TEST_CASE("closed surfaces cross circles an even number of times") {
  const testing::AngleTable table(100000);
  Rng rng(17);
  const Mesh sphere = make_unit_icosphere(2);
  for (int trial = 0; trial < 8; ++trial) {
    // Random circle that straddles the sphere surface.
    const Vec3 normal = rng.unit_vector();
    const Vec3 center{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
    const double radius = rng.uniform(0.4, 1.2);
    const int count = count_circle_mesh_intersections(sphere, center, radius, normal);
    CHECK(count % 2 == 0);
    // The watertight-mesh oracle tracks the inside/outside parity around
    // the circle; crossings that graze shared edges are still transitions.
    CHECK(count ==
          testing::sampled_circle_solid_crossings(sphere, center, radius, normal, table));
  }
}

TEST_CASE("grid of an empty mesh is all zero") {
  const DescriptorConfig config = DescriptorConfig::for_image(16, 16, 0.3);
  Mesh empty;
  const auto grid = compute_intersection_grid(empty, {{0, 0, 0}, {0, 0, 1}}, config);
  for (uint32_t c : grid.counts) CHECK(c == 0);
}

TEST_CASE("a plane containing the central axis crosses every circle twice") {
  // Plane y = 0 contains the +z axis through the origin.
  Mesh m;
  m.vertices = {{-2, 0, -2}, {2, 0, -2}, {2, 0, 2}, {-2, 0, 2}};
  m.normals.assign(4, {0, 1, 0});
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  const DescriptorConfig config = DescriptorConfig::for_image(16, 16, 0.3);
  const auto grid = compute_intersection_grid(m, {{0, 0, 0}, {0, 0, 1}}, config);
  for (uint32_t c : grid.counts) CHECK(c == 2);
}

TEST_CASE("grid agrees with the angular-sampling oracle on random scenes") {
  const testing::AngleTable table(100000);
  const DescriptorConfig config = DescriptorConfig::for_image(16, 16, 0.3);
  const OrientedPoint origin{{0, 0, 0}, {0, 0, 1}};
  double worst = 1.0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Mesh mesh = scattered_triangles(seed, 50, 0.35);
    worst = std::min(worst, grid_oracle_agreement(mesh, origin, config, table));
  }
  CHECK(worst >= 0.999);
}

TEST_CASE("grids are invariant under rigid motion of mesh and origin") {
  const DescriptorConfig config = DescriptorConfig::for_image(32, 32, 0.3);
  const Mesh mesh = scattered_triangles(23, 50, 0.35);
  const OrientedPoint origin{{0.05, -0.02, 0.01}, Vec3{0.3, -0.1, 1.0}.normalized()};
  const auto baseline = compute_intersection_grid(mesh, origin, config);

  Rng rng(31);
  RigidPlacement placement;
  placement.rotation = rng.uniform_rotation();
  placement.translation = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const Mesh moved = apply_placement(mesh, placement);
  const auto transformed = compute_intersection_grid(moved, placement.apply(origin), config);

  size_t mismatches = 0;
  for (size_t i = 0; i < baseline.counts.size(); ++i)
    if (baseline.counts[i] != transformed.counts[i]) ++mismatches;
  CHECK(static_cast<double>(mismatches) / baseline.counts.size() < 0.001);
}

TEST_CASE("rotation about the reference normal leaves the grid unchanged") {
  const DescriptorConfig config = DescriptorConfig::for_image(32, 32, 0.3);
  const Mesh mesh = scattered_triangles(29, 50, 0.35);
  const OrientedPoint origin{{0, 0, 0}, {0, 0, 1}};
  const auto baseline = compute_intersection_grid(mesh, origin, config);

  const double angle = 1.234;
  RigidPlacement spin;
  spin.rotation.m = {{{std::cos(angle), -std::sin(angle), 0},
                      {std::sin(angle), std::cos(angle), 0},
                      {0, 0, 1}}};
  const auto rotated = compute_intersection_grid(apply_placement(mesh, spin), origin, config);

  size_t mismatches = 0;
  for (size_t i = 0; i < baseline.counts.size(); ++i)
    if (baseline.counts[i] != rotated.counts[i]) ++mismatches;
  CHECK(static_cast<double>(mismatches) / baseline.counts.size() < 0.001);
}

TEST_CASE("geometry outside the support bounding sphere never changes counts") {
  const DescriptorConfig config = DescriptorConfig::for_image(16, 16, 0.3);
  const OrientedPoint origin{{0, 0, 0}, {0, 0, 1}};
  const Mesh near = scattered_triangles(41, 30, 0.3);
  auto far = scattered_triangles(43, 30, 0.3);
  const double bound = support_cull_radius(config);
  for (Vec3& v : far.vertices) v += Vec3{bound + 1.0, 0, 0};

  std::vector<Mesh> parts{near, far};
  const Mesh combined = concatenate_scene(parts);
  const auto with_far = compute_intersection_grid(combined, origin, config);
  const auto without = compute_intersection_grid(near, origin, config);
  CHECK(with_far.counts == without.counts);
}

TEST_CASE("block-index and plain grids are identical") {
  const DescriptorConfig config = DescriptorConfig::for_image(32, 32, 0.3);
  const Mesh mesh = scattered_triangles(57, 200, 0.5);
  const OrientedPoint origin{{0, 0, 0}, {0, 0, 1}};
  const TriangleBlockIndex blocks = TriangleBlockIndex::build(mesh, 16);
  const auto plain = compute_intersection_grid(mesh, origin, config);
  const auto blocked = compute_intersection_grid(mesh, blocks, origin, config);
  CHECK(plain.counts == blocked.counts);
}
