#pragma once

#include <span>
#include <vector>

#include "quicci/bitimage.hpp"
#include "quicci/intersection.hpp"

namespace quicci {

/// Derive the bit image from raw intersection counts: bit (r, c) is set iff
/// the counts of circles c and c+1 in layer r differ.
QuicciImage quicci_from_grid(const IntersectionCountGrid& grid);

/// Full pipeline for a single oriented point.
QuicciImage compute_quicci(const Mesh& mesh, const OrientedPoint& origin,
                           const DescriptorConfig& config);
QuicciImage compute_quicci(const Mesh& mesh, const TriangleBlockIndex& blocks,
                           const OrientedPoint& origin, const DescriptorConfig& config);

/// Descriptors for a batch of points, computed in parallel (points are
/// independent; the mesh is shared immutable state).
std::vector<QuicciImage> compute_quicci_set(const Mesh& mesh, std::span<const OrientedPoint> points,
                                            const DescriptorConfig& config, unsigned threads = 0);

}  // namespace quicci
