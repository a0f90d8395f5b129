#pragma once

// Independent reference implementations used to check the production code.
// These deliberately avoid the library's computation paths: intersection
// counts come from dense angular sampling instead of segment clipping, and
// nearest-neighbour results come from exhaustive linear scans.

#include <cstdint>
#include <span>
#include <vector>

#include "quicci/bitimage.hpp"
#include "quicci/descriptor_io.hpp"
#include "quicci/mesh.hpp"
#include "quicci/rng.hpp"

namespace quicci::testing {

/// Shared cos/sin tables for the angular-sampling oracle.
class AngleTable {
 public:
  explicit AngleTable(size_t steps);
  size_t steps() const { return cos_.size(); }
  double cos_at(size_t i) const { return cos_[i]; }
  double sin_at(size_t i) const { return sin_[i]; }

 private:
  std::vector<double> cos_, sin_;
};

/// Brute-force circle/mesh intersection count: the circle is sampled at
/// `table.steps()` angles; sign changes of each triangle's plane function
/// between consecutive samples are counted when the interpolated crossing
/// point lies inside the triangle.
int sampled_circle_intersections(const Mesh& mesh, const Vec3& center, double radius,
                                 const Vec3& plane_normal, const AngleTable& table);

/// Brute-force crossing count for watertight meshes: the circle is sampled
/// at `table.steps()` angles and transitions of the ray-parity inside test
/// are counted. Robust where crossings graze shared triangle edges.
int sampled_circle_solid_crossings(const Mesh& mesh, const Vec3& center, double radius,
                                   const Vec3& plane_normal, const AngleTable& table);

struct ScanHit {
  uint32_t distance;
  Provenance provenance;
};

/// Exhaustive Hamming top-k under (distance, provenance) order, optionally
/// restricted to distance <= limit.
std::vector<ScanHit> linear_scan_hamming(std::span<const QuicciImage> images,
                                         std::span<const Provenance> provenance,
                                         const QuicciImage& needle, uint32_t k,
                                         uint32_t limit = UINT32_MAX);

struct WeightedScanHit {
  double distance;
  uint32_t image_index;
};

/// Exhaustive Weighted Hamming top-k under (distance, insertion order).
std::vector<WeightedScanHit> linear_scan_weighted(std::span<const QuicciImage> images,
                                                  const QuicciImage& needle, uint32_t k);

/// Image with exactly `set_bits` random distinct set bits.
QuicciImage random_image(Rng& rng, uint32_t width, uint32_t height, uint32_t set_bits);

/// Copy of the image with `flips` random distinct bit positions toggled.
QuicciImage flip_random_bits(const QuicciImage& image, uint32_t flips, Rng& rng);

}  // namespace quicci::testing
