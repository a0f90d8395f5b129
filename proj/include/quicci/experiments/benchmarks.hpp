#pragma once

#include <span>
#include <string>
#include <vector>

#include "quicci/bitimage.hpp"
#include "quicci/intersection.hpp"

namespace quicci::experiments {

enum class DistanceKind { hamming, clutter_resistant, weighted_hamming };

std::string distance_kind_name(DistanceKind kind);

struct ComparisonRate {
  DistanceKind kind = DistanceKind::hamming;
  uint64_t pairs = 0;
  double seconds = 0.0;
  double pairs_per_second = 0.0;
};

/// Single-threaded wall-clock throughput of pairwise distance evaluation
/// over a preloaded image set, run for at least `min_seconds`.
ComparisonRate bench_comparison_rate(std::span<const QuicciImage> images, DistanceKind kind,
                                     double min_seconds);

struct GenerationRatePoint {
  uint64_t triangle_count = 0;
  uint64_t descriptor_count = 0;
  double seconds = 0.0;
  double descriptors_per_second = 0.0;
};

/// Descriptor generation throughput as a function of scene size. Scenes are
/// synthesized by scattering blob meshes until each target triangle count is
/// reached; descriptors are computed single-threaded at surface samples.
std::vector<GenerationRatePoint> bench_generation_rate(std::span<const uint64_t> triangle_targets,
                                                       uint32_t descriptors_per_scene,
                                                       const DescriptorConfig& config,
                                                       uint64_t seed);

}  // namespace quicci::experiments
