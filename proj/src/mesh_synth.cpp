#include "quicci/mesh_synth.hpp"

#include <cmath>
#include <map>

#include "quicci/rng.hpp"

namespace quicci {

namespace {

Mesh icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh m;
  m.vertices = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& v : m.vertices) v = v.normalized();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

}  // namespace

Mesh make_unit_icosphere(int subdivisions) {
  Mesh m = icosahedron();
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> midpoints;
    auto midpoint = [&](uint32_t a, uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      const uint32_t idx = static_cast<uint32_t>(m.vertices.size());
      m.vertices.push_back(((m.vertices[a] + m.vertices[b]) * 0.5).normalized());
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<uint32_t, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& t : m.triangles) {
      const uint32_t ab = midpoint(t[0], t[1]);
      const uint32_t bc = midpoint(t[1], t[2]);
      const uint32_t ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  m.normals = m.vertices;  // radial
  return m;
}

Mesh make_cube(double edge) {
  const double h = edge / 2.0;
  Mesh m;
  const Vec3 axes[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (const Vec3& n : axes) {
    // Build an orthonormal frame (u, v, n) per face.
    const Vec3 u = (std::abs(n.x) < 0.5 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}).cross(n).normalized();
    const Vec3 v = n.cross(u);
    const uint32_t base = static_cast<uint32_t>(m.vertices.size());
    m.vertices.push_back(n * h - u * h - v * h);
    m.vertices.push_back(n * h + u * h - v * h);
    m.vertices.push_back(n * h + u * h + v * h);
    m.vertices.push_back(n * h - u * h + v * h);
    for (int i = 0; i < 4; ++i) m.normals.push_back(n);
    m.triangles.push_back({base, base + 1, base + 2});
    m.triangles.push_back({base, base + 2, base + 3});
  }
  return m;
}

Mesh make_blob(uint64_t seed, int subdivisions, double amplitude) {
  Mesh m = make_unit_icosphere(subdivisions);
  Rng rng(seed);
  struct Wave {
    Vec3 direction;
    double frequency, phase, weight;
  };
  Wave waves[4];
  double weight_total = 0.0;
  for (Wave& w : waves) {
    w.direction = rng.unit_vector();
    w.frequency = rng.uniform(1.0, 4.0);
    w.phase = rng.uniform(0.0, 6.283185307179586);
    w.weight = rng.uniform(0.3, 1.0);
    weight_total += w.weight;
  }
  for (Vec3& v : m.vertices) {
    double field = 0.0;
    for (const Wave& w : waves)
      field += w.weight * std::sin(w.frequency * v.dot(w.direction) + w.phase);
    v = v * (1.0 + amplitude * field / weight_total);
  }
  // Recompute smooth normals from the deformed surface.
  std::vector<Vec3> accum(m.vertices.size());
  for (const auto& t : m.triangles) {
    const Vec3 fn = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
    for (uint32_t i : t) accum[i] += fn;
  }
  m.normals.resize(m.vertices.size());
  for (size_t i = 0; i < accum.size(); ++i)
    m.normals[i] = accum[i].squared_norm() > 0 ? accum[i].normalized() : Vec3{0, 0, 1};
  return m;
}

}  // namespace quicci
