#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "quicci/error.hpp"
#include "quicci/mesh.hpp"
#include "quicci/mesh_synth.hpp"

using namespace quicci;

namespace {

Mesh single_triangle() {
  Mesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.normals = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
  m.triangles = {{0, 1, 2}};
  return m;
}

}  // namespace

TEST_CASE("fit_unit_sphere scales a cube of corners +-2 onto the unit sphere") {
  Mesh cube = make_cube(4.0);  // corners at (+-2, +-2, +-2)
  const Mesh fitted = fit_unit_sphere(cube);
  double max_distance = 0.0;
  for (const Vec3& v : fitted.vertices) max_distance = std::max(max_distance, v.norm());
  CHECK(max_distance == doctest::Approx(1.0).epsilon(1e-6));
  for (const Vec3& v : fitted.vertices) CHECK(v.norm() <= 1.0 + 1e-6);
  // Scaling factor for a cube is 1/(2*sqrt(3)).
  CHECK(fitted.vertices[0].norm() == doctest::Approx(1.0));
}

TEST_CASE("fit_unit_sphere is idempotent") {
  const Mesh fitted = fit_unit_sphere(make_blob(7, 2));
  const Mesh again = fit_unit_sphere(fitted);
  REQUIRE(again.vertex_count() == fitted.vertex_count());
  for (size_t i = 0; i < fitted.vertex_count(); ++i) {
    CHECK(again.vertices[i].x == doctest::Approx(fitted.vertices[i].x).epsilon(1e-6));
    CHECK(again.vertices[i].y == doctest::Approx(fitted.vertices[i].y).epsilon(1e-6));
    CHECK(again.vertices[i].z == doctest::Approx(fitted.vertices[i].z).epsilon(1e-6));
  }
}

TEST_CASE("fit_unit_sphere rejects a degenerate point cloud") {
  Mesh m;
  m.vertices = {{1, 2, 3}, {1, 2, 3}};
  m.normals = {{0, 0, 1}, {0, 0, 1}};
  m.triangles = {{0, 1, 0}};
  CHECK_THROWS_AS(fit_unit_sphere(m), Error);
}

TEST_CASE("place_in_cube bounds the translation") {
  const Mesh mesh = fit_unit_sphere(make_cube(1.0));
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    auto [placed, placement] = place_in_cube(mesh, 3.0, rng);
    CHECK(std::abs(placement.translation.x) <= 0.5);
    CHECK(std::abs(placement.translation.y) <= 0.5);
    CHECK(std::abs(placement.translation.z) <= 0.5);
    CHECK(placement.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("place_in_cube with edge 2 pins the object at the origin") {
  const Mesh mesh = fit_unit_sphere(make_cube(1.0));
  Rng rng(1);
  auto [placed, placement] = place_in_cube(mesh, 2.0, rng);
  CHECK(placement.translation.x == 0.0);
  CHECK(placement.translation.y == 0.0);
  CHECK(placement.translation.z == 0.0);
}

TEST_CASE("place_in_cube rejects a cube the sphere cannot fit") {
  const Mesh mesh = fit_unit_sphere(make_cube(1.0));
  Rng rng(1);
  CHECK_THROWS_AS(place_in_cube(mesh, 1.9, rng), Error);
}

TEST_CASE("place_in_cube is deterministic and rigid") {
  const Mesh mesh = fit_unit_sphere(make_blob(3, 1));
  Rng rng_a(42), rng_b(42);
  auto [placed_a, placement_a] = place_in_cube(mesh, 3.0, rng_a);
  auto [placed_b, placement_b] = place_in_cube(mesh, 3.0, rng_b);
  REQUIRE(placed_a.vertex_count() == placed_b.vertex_count());
  for (size_t i = 0; i < placed_a.vertex_count(); ++i)
    CHECK(placed_a.vertices[i] == placed_b.vertices[i]);

  // Pairwise distances survive the rigid motion.
  Rng pick(7);
  for (int s = 0; s < 100; ++s) {
    const size_t i = pick.uniform_index(mesh.vertex_count());
    const size_t j = pick.uniform_index(mesh.vertex_count());
    const double before = (mesh.vertices[i] - mesh.vertices[j]).norm();
    const double after = (placed_a.vertices[i] - placed_a.vertices[j]).norm();
    CHECK(after == doctest::Approx(before).epsilon(1e-6));
  }
}

TEST_CASE("unique_oriented_points keeps per-face duplicates of a cube distinct") {
  const Mesh cube = make_cube(1.0);  // 24 stored (position, normal) pairs
  CHECK(unique_oriented_points(cube).size() == 24);
}

TEST_CASE("unique_oriented_points collapses exact duplicates") {
  Mesh doubled = single_triangle();
  const size_t n = doubled.vertex_count();
  doubled.vertices.insert(doubled.vertices.end(), doubled.vertices.begin(), doubled.vertices.end());
  doubled.normals.insert(doubled.normals.end(), doubled.normals.begin(), doubled.normals.end());
  doubled.triangles.push_back({static_cast<uint32_t>(n), static_cast<uint32_t>(n + 1),
                               static_cast<uint32_t>(n + 2)});
  CHECK(unique_oriented_points(doubled).size() == n);
  CHECK(unique_oriented_points(Mesh{}).empty());
}

TEST_CASE("unique point set maps every vertex to its point") {
  const Mesh blob = make_blob(11, 1);
  const UniquePointSet set = unique_oriented_point_set(blob);
  CHECK(set.points.size() <= blob.vertex_count());
  for (size_t v = 0; v < blob.vertex_count(); ++v) {
    const OrientedPoint expected{blob.vertices[v], blob.normals[v]};
    CHECK(set.points[set.point_of_vertex[v]] == expected);
  }
}

TEST_CASE("sample_surface_points stays on a single triangle's plane") {
  const Mesh tri = single_triangle();
  Rng rng(5);
  for (const OrientedPoint& p : sample_surface_points(tri, 500, rng)) {
    CHECK(std::abs(p.position.z) < 1e-6);
    CHECK(p.position.x >= -1e-9);
    CHECK(p.position.y >= -1e-9);
    CHECK(p.position.x + p.position.y <= 1.0 + 1e-9);
  }
  CHECK(sample_surface_points(tri, 0, rng).empty());
}

TEST_CASE("sample_surface_points is area-proportional") {
  // Two triangles with areas 1 and 3.
  Mesh m;
  m.vertices = {{0, 0, 0}, {2, 0, 0}, {0, 1, 0}, {10, 0, 0}, {12, 0, 0}, {10, 3, 0}};
  m.normals.assign(6, {0, 0, 1});
  m.triangles = {{0, 1, 2}, {3, 4, 5}};
  Rng rng(123);
  const auto samples = sample_surface_points(m, 100000, rng);
  const auto second = std::count_if(samples.begin(), samples.end(),
                                    [](const OrientedPoint& p) { return p.position.x > 5.0; });
  CHECK(static_cast<double>(second) / samples.size() == doctest::Approx(0.75).epsilon(0.013));
}

TEST_CASE("add_spheres touches the surface point and preserves the prefix") {
  const Mesh base = single_triangle();
  const OrientedPoint contact{{0.25, 0.25, 0.0}, {0, 0, 1}};
  const double radius = 0.05;
  const Mesh out = add_spheres(base, std::span(&contact, 1), radius, 2);

  for (size_t i = 0; i < base.vertex_count(); ++i) CHECK(out.vertices[i] == base.vertices[i]);
  const Mesh sphere = make_unit_icosphere(2);
  CHECK(out.triangle_count() == base.triangle_count() + sphere.triangle_count());

  // Every sphere vertex sits at distance `radius` from the displaced centre.
  const Vec3 center = contact.position + contact.normal * radius;
  for (size_t i = base.vertex_count(); i < out.vertex_count(); ++i)
    CHECK((out.vertices[i] - center).norm() == doctest::Approx(radius).epsilon(1e-9));

  CHECK(add_spheres(base, {}, radius, 2).triangle_count() == base.triangle_count());
}

TEST_CASE("add_spheres grows triangles linearly in the point count") {
  const Mesh base = single_triangle();
  Rng rng(9);
  std::vector<OrientedPoint> points;
  for (int i = 0; i < 7; ++i) points.push_back({{rng.uniform(), rng.uniform(), 0.0}, {0, 0, 1}});
  const Mesh sphere = make_unit_icosphere(1);
  const Mesh out = add_spheres(base, points, 0.01, 1);
  CHECK(out.triangle_count() == base.triangle_count() + points.size() * sphere.triangle_count());
}

TEST_CASE("concatenate_scene offsets indices and tags provenance") {
  const Mesh a = single_triangle();
  const Mesh b = make_cube(1.0);
  std::vector<Mesh> parts{a, b};
  const Mesh scene = concatenate_scene(parts);
  CHECK(scene.triangle_count() == a.triangle_count() + b.triangle_count());
  CHECK(scene.vertex_count() == a.vertex_count() + b.vertex_count());
  // Second block's indices offset by the first block's vertex count.
  CHECK(scene.triangles[a.triangle_count()][0] ==
        b.triangles[0][0] + static_cast<uint32_t>(a.vertex_count()));
  for (size_t v = 0; v < scene.vertex_count(); ++v)
    CHECK(scene.vertex_object_ids[v] == (v < a.vertex_count() ? 0 : 1));

  const Mesh single = concatenate_scene(std::span(&a, 1));
  CHECK(single.vertices == a.vertices);
  CHECK(single.triangles == a.triangles);
  CHECK(concatenate_scene({}).vertex_count() == 0);
}
