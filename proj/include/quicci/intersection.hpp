#pragma once

#include <cstdint>
#include <vector>

#include "quicci/mesh.hpp"

namespace quicci {

/// Geometry of the descriptor's circle stack: H layers of C concentric
/// circles, orthogonal to the reference normal and centred on the central
/// axis. The resulting bit image is (C - 1) x H since bits mark count
/// changes between radially adjacent circles.
struct DescriptorConfig {
  uint32_t circles_per_layer = 65;  // C
  uint32_t layer_count = 64;        // H
  double support_radius = 0.3;      // R

  uint32_t image_width() const { return circles_per_layer - 1; }
  uint32_t image_height() const { return layer_count; }
  uint32_t image_bits() const { return image_width() * image_height(); }

  /// Config producing a width x height bit image (C = width + 1).
  static DescriptorConfig for_image(uint32_t width, uint32_t height, double support_radius);

  void validate() const;
};

/// Farthest any circle point can be from the reference vertex; triangles
/// beyond it cannot intersect any circle. The layer stack spans an axial
/// extent of R centred on the vertex, so the bound is sqrt(R^2 + (R/2)^2).
double support_cull_radius(const DescriptorConfig& config);

struct CircleGeometry {
  Vec3 center;
  double radius = 0.0;
  Vec3 plane_normal;
};

/// Centre, radius, and plane of circle (layer, circle) for a given origin.
CircleGeometry circle_geometry(const DescriptorConfig& config, const OrientedPoint& origin,
                               uint32_t layer, uint32_t circle);

/// Number of transversal crossings between the circle and the mesh surface.
/// Per triangle: the triangle is clipped by the circle's plane to a segment
/// and crossing points of that segment with the circle are counted. Counting
/// is half-open in distance-from-axis with a 1e-6 snap so that a crossing on
/// an edge shared by two triangles is counted exactly once.
int count_circle_mesh_intersections(const Mesh& mesh, const Vec3& center, double radius,
                                    const Vec3& plane_normal);

/// Raw intersection counts, one per (layer, circle) cell.
struct IntersectionCountGrid {
  DescriptorConfig config;
  OrientedPoint origin;
  std::vector<uint32_t> counts;  // layer-major, layer_count x circles_per_layer

  uint32_t at(uint32_t layer, uint32_t circle) const {
    return counts[layer * config.circles_per_layer + circle];
  }
};

/// Bounding-sphere groups of consecutive triangles; lets grid computation
/// over large scenes cull whole blocks against the support region.
struct TriangleBlockIndex {
  struct Block {
    Vec3 center;
    double radius = 0.0;
    uint32_t begin = 0, end = 0;
  };
  std::vector<Block> blocks;

  static TriangleBlockIndex build(const Mesh& mesh, uint32_t block_size = 64);
};

IntersectionCountGrid compute_intersection_grid(const Mesh& mesh, const OrientedPoint& origin,
                                                const DescriptorConfig& config);
IntersectionCountGrid compute_intersection_grid(const Mesh& mesh, const TriangleBlockIndex& blocks,
                                                const OrientedPoint& origin,
                                                const DescriptorConfig& config);

}  // namespace quicci
