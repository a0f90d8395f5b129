#include "quicci/descriptor.hpp"

#include "quicci/parallel.hpp"

namespace quicci {

QuicciImage quicci_from_grid(const IntersectionCountGrid& grid) {
  const uint32_t width = grid.config.image_width();
  const uint32_t height = grid.config.image_height();
  QuicciImage image(width, height);
  for (uint32_t r = 0; r < height; ++r)
    for (uint32_t c = 0; c < width; ++c)
      if (grid.at(r, c) != grid.at(r, c + 1)) image.set_bit(r, c, true);
  return image;
}

QuicciImage compute_quicci(const Mesh& mesh, const OrientedPoint& origin,
                           const DescriptorConfig& config) {
  return quicci_from_grid(compute_intersection_grid(mesh, origin, config));
}

QuicciImage compute_quicci(const Mesh& mesh, const TriangleBlockIndex& blocks,
                           const OrientedPoint& origin, const DescriptorConfig& config) {
  return quicci_from_grid(compute_intersection_grid(mesh, blocks, origin, config));
}

std::vector<QuicciImage> compute_quicci_set(const Mesh& mesh, std::span<const OrientedPoint> points,
                                            const DescriptorConfig& config, unsigned threads) {
  std::vector<QuicciImage> images(points.size());
  const TriangleBlockIndex blocks = TriangleBlockIndex::build(mesh);
  parallel_for(points.size(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      images[i] = compute_quicci(mesh, blocks, points[i], config);
  });
  return images;
}

}  // namespace quicci
