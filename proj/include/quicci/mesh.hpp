#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "quicci/rng.hpp"
#include "quicci/vec3.hpp"

namespace quicci {

/// A surface point with a unit normal. Anchors a descriptor: the point is
/// the support-region centre and the normal defines the central axis.
struct OrientedPoint {
  Vec3 position;
  Vec3 normal;
  constexpr bool operator==(const OrientedPoint&) const = default;
};

/// Rotation + translation; rotation is orthonormal with determinant +1.
struct RigidPlacement {
  Mat3 rotation = Mat3::identity();
  Vec3 translation;

  Vec3 apply(const Vec3& p) const { return rotation.apply(p) + translation; }
  Vec3 apply_direction(const Vec3& d) const { return rotation.apply(d); }
  OrientedPoint apply(const OrientedPoint& p) const {
    return {apply(p.position), apply_direction(p.normal)};
  }
};

/// Indexed triangle mesh with per-vertex unit normals.
///
/// `vertex_object_ids` is an optional in-memory provenance tag (one entry
/// per vertex, the id of the source mesh in a concatenated scene). It is
/// never serialized.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<uint32_t, 3>> triangles;
  std::vector<uint32_t> vertex_object_ids;

  size_t vertex_count() const { return vertices.size(); }
  size_t triangle_count() const { return triangles.size(); }
  bool has_provenance() const { return !vertex_object_ids.empty(); }

  std::array<Vec3, 3> triangle_vertices(size_t t) const {
    return {vertices[triangles[t][0]], vertices[triangles[t][1]], vertices[triangles[t][2]]};
  }
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double mesh_surface_area(const Mesh& mesh);

/// Uniformly scale and translate so the bounding sphere (AABB centre,
/// max-vertex-distance radius) becomes the unit sphere at the origin.
/// Throws if all vertices coincide. Normals are unchanged.
Mesh fit_unit_sphere(const Mesh& mesh);

/// Rigidly transform every vertex and normal.
Mesh apply_placement(const Mesh& mesh, const RigidPlacement& placement);

/// Rotate by a uniform random rotation and translate to a uniform random
/// position such that the unit bounding sphere stays inside the axis-aligned
/// cube of edge `cube_edge` centred at the origin. Requires cube_edge >= 2.
std::pair<Mesh, RigidPlacement> place_in_cube(const Mesh& mesh, double cube_edge, Rng& rng);

/// One point per distinct (position, normal) pair, exact bitwise
/// deduplication, first-occurrence order.
std::vector<OrientedPoint> unique_oriented_points(const Mesh& mesh);

struct UniquePointSet {
  std::vector<OrientedPoint> points;
  /// First vertex index that produced each point.
  std::vector<uint32_t> source_vertex;
  /// Unique-point id assigned to every vertex of the source mesh.
  std::vector<uint32_t> point_of_vertex;
};
UniquePointSet unique_oriented_point_set(const Mesh& mesh);

/// Area-uniform surface samples; normals interpolated barycentrically from
/// vertex normals and renormalized. Throws on zero total area.
std::vector<OrientedPoint> sample_surface_points(const Mesh& mesh, size_t count, Rng& rng);

/// Append one icosphere per point, each centred `radius` along the point
/// normal so the sphere touches the surface at the point. The input mesh's
/// vertices and triangles are preserved as a prefix of the output.
Mesh add_spheres(const Mesh& mesh, std::span<const OrientedPoint> points, double radius,
                 int subdivisions);

/// Concatenate into one mesh with index offsets; every vertex is tagged
/// with the index of its source mesh.
Mesh concatenate_scene(std::span<const Mesh> meshes);

}  // namespace quicci
