#include "quicci/intersection.hpp"

#include <algorithm>
#include <cmath>

#include "quicci/error.hpp"

namespace quicci {

namespace {

// Snap width for distance comparisons against circle radii. A clipped
// segment endpoint this close to a radius is treated as exactly on the
// circle, which makes the half-open counting rule resolve identically for
// both triangles of a shared edge.
constexpr double kRadiusEpsilon = 1e-6;
constexpr double kDegenerateArea = 1e-12;

/// A maximal monotone span of the distance-from-axis function along a
/// clipped triangle segment. The circle at radius r is crossed once by the
/// piece iff lo <= r < hi (half-open, epsilon-snapped).
struct DistancePiece {
  double lo = 0.0, hi = 0.0;
};

/// Clip the triangle to the plane through `plane_point` with unit normal
/// `normal` and decompose the resulting segment into monotone distance
/// pieces (distance measured within the plane from `plane_point`).
/// Returns the number of pieces written (0, 1, or 2).
int triangle_distance_pieces(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& plane_point,
                             const Vec3& normal, DistancePiece pieces[2]) {
  const double d0 = normal.dot(v0 - plane_point);
  const double d1 = normal.dot(v1 - plane_point);
  const double d2 = normal.dot(v2 - plane_point);
  const double dmin = std::min({d0, d1, d2});
  const double dmax = std::max({d0, d1, d2});
  if (!(dmin < 0.0 && dmax > 0.0)) return 0;  // not strictly straddling

  Vec3 ends[2];
  int end_count = 0;
  const Vec3 verts[3] = {v0, v1, v2};
  const double dists[3] = {d0, d1, d2};
  for (int i = 0; i < 3 && end_count < 2; ++i) {
    if (dists[i] == 0.0) {
      ends[end_count++] = verts[i];
      continue;
    }
    const int j = (i + 1) % 3;
    if (dists[i] * dists[j] < 0.0) {
      const double s = dists[i] / (dists[i] - dists[j]);
      ends[end_count++] = verts[i] + (verts[j] - verts[i]) * s;
    }
  }
  if (end_count != 2) return 0;

  // In-plane offsets from the axis point; drop any residual normal component.
  Vec3 a = ends[0] - plane_point;
  a -= normal * normal.dot(a);
  Vec3 b = ends[1] - plane_point;
  b -= normal * normal.dot(b);

  const double da = a.norm();
  const double db = b.norm();
  const Vec3 dir = b - a;
  const double len_sq = dir.squared_norm();
  if (len_sq > 0.0) {
    const double t = -a.dot(dir) / len_sq;
    if (t > 0.0 && t < 1.0) {
      // Perpendicular foot inside the segment: distance dips to a minimum
      // and rises again, giving two monotone pieces.
      const double dfoot = (a + dir * t).norm();
      pieces[0] = {dfoot, da};
      pieces[1] = {dfoot, db};
      return 2;
    }
  }
  pieces[0] = {std::min(da, db), std::max(da, db)};
  return 1;
}

inline bool piece_crosses_radius(const DistancePiece& p, double radius) {
  return radius >= p.lo - kRadiusEpsilon && radius < p.hi - kRadiusEpsilon;
}

bool triangle_degenerate(const Vec3& v0, const Vec3& v1, const Vec3& v2) {
  return 0.5 * (v1 - v0).cross(v2 - v0).norm() < kDegenerateArea;
}

}  // namespace

DescriptorConfig DescriptorConfig::for_image(uint32_t width, uint32_t height,
                                             double support_radius) {
  DescriptorConfig c{width + 1, height, support_radius};
  c.validate();
  return c;
}

void DescriptorConfig::validate() const {
  if (circles_per_layer < 2) throw Error("DescriptorConfig: need at least 2 circles per layer");
  if (layer_count < 1) throw Error("DescriptorConfig: need at least 1 layer");
  if (!(support_radius > 0.0)) throw Error("DescriptorConfig: support radius must be positive");
  if (static_cast<uint64_t>(image_width()) * image_height() > 65536)
    throw Error("DescriptorConfig: image exceeds 65536 bits");
}

double support_cull_radius(const DescriptorConfig& config) {
  const double r = config.support_radius;
  return std::sqrt(r * r + (r / 2.0) * (r / 2.0));
}

CircleGeometry circle_geometry(const DescriptorConfig& config, const OrientedPoint& origin,
                               uint32_t layer, uint32_t circle) {
  if (layer >= config.layer_count || circle >= config.circles_per_layer)
    throw Error("circle_geometry: layer or circle index out of range");
  const double r = config.support_radius;
  CircleGeometry g;
  g.plane_normal = origin.normal;
  g.radius = (circle + 1) * (r / config.circles_per_layer);
  const double height = r * ((layer + 0.5) / config.layer_count - 0.5);
  g.center = origin.position + origin.normal * height;
  return g;
}

int count_circle_mesh_intersections(const Mesh& mesh, const Vec3& center, double radius,
                                    const Vec3& plane_normal) {
  if (!(radius > 0.0)) throw Error("count_circle_mesh_intersections: radius must be positive");
  const Vec3 n = plane_normal.normalized();
  int count = 0;
  DistancePiece pieces[2];
  for (size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    if (triangle_degenerate(v[0], v[1], v[2])) continue;
    const int pc = triangle_distance_pieces(v[0], v[1], v[2], center, n, pieces);
    for (int p = 0; p < pc; ++p)
      if (piece_crosses_radius(pieces[p], radius)) ++count;
  }
  return count;
}

namespace {

/// Shared grid kernel over a triangle range filter. Accumulates per-row
/// difference counts (piece covers a half-open circle-index range), then
/// prefix-sums each row.
class GridAccumulator {
 public:
  GridAccumulator(const Mesh& mesh, const OrientedPoint& origin, const DescriptorConfig& config)
      : mesh_(mesh), config_(config) {
    origin_ = origin;
    origin_.normal = origin.normal.normalized();
    layer_count_ = config.layer_count;
    circle_count_ = config.circles_per_layer;
    step_ = config.support_radius / circle_count_;
    diff_.assign(static_cast<size_t>(layer_count_) * (circle_count_ + 1), 0);
    cull_radius_ = support_cull_radius(config);
  }

  const Vec3& origin_position() const { return origin_.position; }
  double cull_radius() const { return cull_radius_; }

  void add_triangle(size_t t) {
    const auto v = mesh_.triangle_vertices(t);
    // Per-triangle cull against the support bounding sphere.
    const Vec3 centroid = (v[0] + v[1] + v[2]) / 3.0;
    const double reach = std::sqrt(std::max({(v[0] - centroid).squared_norm(),
                                             (v[1] - centroid).squared_norm(),
                                             (v[2] - centroid).squared_norm()}));
    if ((centroid - origin_.position).norm() - reach > cull_radius_) return;
    if (triangle_degenerate(v[0], v[1], v[2])) return;

    const Vec3& n = origin_.normal;
    const double r = config_.support_radius;
    const double e0 = n.dot(v[0] - origin_.position);
    const double e1 = n.dot(v[1] - origin_.position);
    const double e2 = n.dot(v[2] - origin_.position);
    const double emin = std::min({e0, e1, e2});
    const double emax = std::max({e0, e1, e2});

    // Layer plane heights are r*((l + 0.5)/H - 0.5); find the straddled range.
    const double h = static_cast<double>(layer_count_);
    int l_lo = static_cast<int>(std::floor((emin / r + 0.5) * h - 0.5)) - 1;
    int l_hi = static_cast<int>(std::ceil((emax / r + 0.5) * h - 0.5)) + 1;
    l_lo = std::max(l_lo, 0);
    l_hi = std::min(l_hi, static_cast<int>(layer_count_) - 1);

    DistancePiece pieces[2];
    for (int layer = l_lo; layer <= l_hi; ++layer) {
      const double height = r * ((layer + 0.5) / h - 0.5);
      if (!(emin < height && emax > height)) continue;
      const Vec3 plane_point = origin_.position + n * height;
      const int pc = triangle_distance_pieces(v[0], v[1], v[2], plane_point, n, pieces);
      for (int p = 0; p < pc; ++p) add_piece(layer, pieces[p]);
    }
  }

  IntersectionCountGrid finish() {
    IntersectionCountGrid grid;
    grid.config = config_;
    grid.origin = origin_;
    grid.counts.assign(static_cast<size_t>(layer_count_) * circle_count_, 0);
    for (uint32_t layer = 0; layer < layer_count_; ++layer) {
      int32_t running = 0;
      const size_t diff_row = static_cast<size_t>(layer) * (circle_count_ + 1);
      const size_t out_row = static_cast<size_t>(layer) * circle_count_;
      for (uint32_t c = 0; c < circle_count_; ++c) {
        running += diff_[diff_row + c];
        grid.counts[out_row + c] = static_cast<uint32_t>(running);
      }
    }
    return grid;
  }

 private:
  /// Circle index range [first, last) crossed by the piece, matching
  /// piece_crosses_radius exactly (ceil results are fixed up against the
  /// same predicate to be safe from rounding).
  void add_piece(int layer, const DistancePiece& piece) {
    auto first_index_at_or_above = [&](double bound) {
      int c = static_cast<int>(std::ceil((bound - kRadiusEpsilon) / step_)) - 1;
      c = std::max(c, 0);
      while (c < static_cast<int>(circle_count_) && (c + 1) * step_ < bound - kRadiusEpsilon) ++c;
      while (c > 0 && c * step_ >= bound - kRadiusEpsilon) --c;
      return c;
    };
    int first = first_index_at_or_above(piece.lo);
    int last = first_index_at_or_above(piece.hi);
    first = std::clamp(first, 0, static_cast<int>(circle_count_));
    last = std::clamp(last, first, static_cast<int>(circle_count_));
    if (first == last) return;
    const size_t row = static_cast<size_t>(layer) * (circle_count_ + 1);
    ++diff_[row + first];
    --diff_[row + last];
  }

  const Mesh& mesh_;
  DescriptorConfig config_;
  OrientedPoint origin_;
  uint32_t layer_count_ = 0, circle_count_ = 0;
  double step_ = 0.0, cull_radius_ = 0.0;
  std::vector<int32_t> diff_;
};

}  // namespace

TriangleBlockIndex TriangleBlockIndex::build(const Mesh& mesh, uint32_t block_size) {
  TriangleBlockIndex index;
  const uint32_t count = static_cast<uint32_t>(mesh.triangle_count());
  for (uint32_t begin = 0; begin < count; begin += block_size) {
    Block block;
    block.begin = begin;
    block.end = std::min(begin + block_size, count);
    Vec3 sum;
    for (uint32_t t = block.begin; t < block.end; ++t) {
      const auto v = mesh.triangle_vertices(t);
      sum += (v[0] + v[1] + v[2]) / 3.0;
    }
    block.center = sum / static_cast<double>(block.end - block.begin);
    double radius_sq = 0.0;
    for (uint32_t t = block.begin; t < block.end; ++t)
      for (const Vec3& v : mesh.triangle_vertices(t))
        radius_sq = std::max(radius_sq, (v - block.center).squared_norm());
    block.radius = std::sqrt(radius_sq);
    index.blocks.push_back(block);
  }
  return index;
}

IntersectionCountGrid compute_intersection_grid(const Mesh& mesh, const OrientedPoint& origin,
                                                const DescriptorConfig& config) {
  config.validate();
  GridAccumulator acc(mesh, origin, config);
  for (size_t t = 0; t < mesh.triangle_count(); ++t) acc.add_triangle(t);
  return acc.finish();
}

IntersectionCountGrid compute_intersection_grid(const Mesh& mesh, const TriangleBlockIndex& blocks,
                                                const OrientedPoint& origin,
                                                const DescriptorConfig& config) {
  config.validate();
  GridAccumulator acc(mesh, origin, config);
  for (const auto& block : blocks.blocks) {
    if ((block.center - acc.origin_position()).norm() - block.radius > acc.cull_radius()) continue;
    for (uint32_t t = block.begin; t < block.end; ++t) acc.add_triangle(t);
  }
  return acc.finish();
}

}  // namespace quicci
