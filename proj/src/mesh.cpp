#include "quicci/mesh.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "quicci/error.hpp"
#include "quicci/mesh_synth.hpp"

namespace quicci {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double mesh_surface_area(const Mesh& mesh) {
  double total = 0.0;
  for (size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    total += triangle_area(v[0], v[1], v[2]);
  }
  return total;
}

Mesh fit_unit_sphere(const Mesh& mesh) {
  if (mesh.vertices.empty()) throw Error("fit_unit_sphere: empty mesh");
  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  Vec3 hi{-std::numeric_limits<double>::max(), -std::numeric_limits<double>::max(),
          -std::numeric_limits<double>::max()};
  for (const Vec3& v : mesh.vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  const Vec3 center = (lo + hi) * 0.5;
  double radius_sq = 0.0;
  for (const Vec3& v : mesh.vertices) radius_sq = std::max(radius_sq, (v - center).squared_norm());
  const double radius = std::sqrt(radius_sq);
  if (radius <= 0.0) throw Error("fit_unit_sphere: all vertices coincide (zero radius)");

  Mesh out = mesh;
  const double inv = 1.0 / radius;
  for (Vec3& v : out.vertices) v = (v - center) * inv;
  return out;
}

Mesh apply_placement(const Mesh& mesh, const RigidPlacement& placement) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = placement.apply(v);
  for (Vec3& n : out.normals) n = placement.apply_direction(n);
  return out;
}

std::pair<Mesh, RigidPlacement> place_in_cube(const Mesh& mesh, double cube_edge, Rng& rng) {
  if (cube_edge < 2.0)
    throw Error("place_in_cube: cube edge < 2, unit bounding sphere cannot fit");
  RigidPlacement placement;
  placement.rotation = rng.uniform_rotation();
  const double half_range = cube_edge / 2.0 - 1.0;
  placement.translation = {rng.uniform(-half_range, half_range),
                           rng.uniform(-half_range, half_range),
                           rng.uniform(-half_range, half_range)};
  return {apply_placement(mesh, placement), placement};
}

namespace {

struct PointKey {
  std::array<uint64_t, 6> bits;
  bool operator==(const PointKey&) const = default;
};

PointKey make_key(const OrientedPoint& p) {
  PointKey k;
  std::memcpy(k.bits.data(), &p, sizeof(k.bits));
  return k;
}

struct PointKeyHash {
  size_t operator()(const PointKey& k) const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint64_t w : k.bits) {
      h ^= w;
      h *= 0x100000001b3ull;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace

UniquePointSet unique_oriented_point_set(const Mesh& mesh) {
  UniquePointSet out;
  out.point_of_vertex.resize(mesh.vertex_count());
  std::unordered_map<PointKey, uint32_t, PointKeyHash> seen;
  seen.reserve(mesh.vertex_count());
  for (size_t i = 0; i < mesh.vertex_count(); ++i) {
    const OrientedPoint p{mesh.vertices[i], mesh.normals[i]};
    auto [it, inserted] = seen.emplace(make_key(p), static_cast<uint32_t>(out.points.size()));
    if (inserted) {
      out.points.push_back(p);
      out.source_vertex.push_back(static_cast<uint32_t>(i));
    }
    out.point_of_vertex[i] = it->second;
  }
  return out;
}

std::vector<OrientedPoint> unique_oriented_points(const Mesh& mesh) {
  return unique_oriented_point_set(mesh).points;
}

std::vector<OrientedPoint> sample_surface_points(const Mesh& mesh, size_t count, Rng& rng) {
  std::vector<OrientedPoint> out;
  if (count == 0) return out;
  std::vector<double> cumulative(mesh.triangle_count());
  double total = 0.0;
  for (size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    total += triangle_area(v[0], v[1], v[2]);
    cumulative[t] = total;
  }
  if (total <= 0.0) throw Error("sample_surface_points: mesh has zero total area");

  out.reserve(count);
  for (size_t s = 0; s < count; ++s) {
    const double pick = rng.uniform() * total;
    const size_t t = std::lower_bound(cumulative.begin(), cumulative.end(), pick) -
                     cumulative.begin();
    const auto& tri = mesh.triangles[std::min(t, mesh.triangle_count() - 1)];
    // Square-root trick gives uniform barycentric coordinates.
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const double wa = 1.0 - r1, wb = r1 * (1.0 - r2), wc = r1 * r2;
    const Vec3 position = mesh.vertices[tri[0]] * wa + mesh.vertices[tri[1]] * wb +
                          mesh.vertices[tri[2]] * wc;
    Vec3 normal = mesh.normals[tri[0]] * wa + mesh.normals[tri[1]] * wb + mesh.normals[tri[2]] * wc;
    if (normal.squared_norm() < 1e-24) {
      const auto v = mesh.triangle_vertices(std::min(t, mesh.triangle_count() - 1));
      normal = (v[1] - v[0]).cross(v[2] - v[0]);
    }
    out.push_back({position, normal.normalized()});
  }
  return out;
}

Mesh add_spheres(const Mesh& mesh, std::span<const OrientedPoint> points, double radius,
                 int subdivisions) {
  if (radius <= 0.0) throw Error("add_spheres: radius must be positive");
  const Mesh sphere = make_unit_icosphere(subdivisions);

  Mesh out = mesh;
  const uint32_t next_tag =
      mesh.has_provenance()
          ? 1 + *std::max_element(mesh.vertex_object_ids.begin(), mesh.vertex_object_ids.end())
          : 0;
  for (const OrientedPoint& p : points) {
    const Vec3 center = p.position + p.normal * radius;
    const uint32_t base = static_cast<uint32_t>(out.vertex_count());
    for (const Vec3& v : sphere.vertices) out.vertices.push_back(center + v * radius);
    for (const Vec3& n : sphere.normals) out.normals.push_back(n);
    if (mesh.has_provenance())
      out.vertex_object_ids.resize(out.vertex_count(), next_tag);
    for (const auto& t : sphere.triangles)
      out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
  return out;
}

Mesh concatenate_scene(std::span<const Mesh> meshes) {
  Mesh out;
  size_t vertex_total = 0, triangle_total = 0;
  for (const Mesh& m : meshes) {
    vertex_total += m.vertex_count();
    triangle_total += m.triangle_count();
  }
  out.vertices.reserve(vertex_total);
  out.normals.reserve(vertex_total);
  out.triangles.reserve(triangle_total);
  out.vertex_object_ids.reserve(vertex_total);
  uint32_t object_id = 0;
  for (const Mesh& m : meshes) {
    const uint32_t base = static_cast<uint32_t>(out.vertex_count());
    out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
    out.normals.insert(out.normals.end(), m.normals.begin(), m.normals.end());
    out.vertex_object_ids.resize(out.vertex_count(), object_id);
    for (const auto& t : m.triangles)
      out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    ++object_id;
  }
  return out;
}

}  // namespace quicci
