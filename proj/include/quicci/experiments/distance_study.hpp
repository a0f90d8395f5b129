#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "quicci/experiments/histograms.hpp"
#include "quicci/intersection.hpp"
#include "quicci/mesh.hpp"

namespace quicci::experiments {

struct DistanceStudyConfig {
  std::vector<std::filesystem::path> dataset;

  /// Nominal part: random object pairs whose same-index vertex descriptors
  /// are compared under all three distance functions.
  uint32_t nominal_pairs = 100;

  /// Perturbation part: objects progressively decorated with surface
  /// spheres; each original-vertex descriptor is compared before/after.
  uint32_t perturbation_objects = 10;
  uint32_t sphere_step_count = 50;
  uint32_t spheres_per_step = 10;
  double sphere_radius = 0.05;
  int sphere_subdivisions = 2;

  DescriptorConfig descriptor = DescriptorConfig::for_image(63, 64, 0.3);
  uint64_t seed = 0;
  unsigned threads = 0;
};

struct DistanceStudyResult {
  IntHistogram nominal_hamming, nominal_clutter;
  RealHistogram nominal_weighted{0.01, 2.0};

  std::vector<uint32_t> sphere_counts;       // 0, step, 2*step, ...
  std::vector<IntHistogram> series_hamming;  // one histogram per sphere count
  std::vector<IntHistogram> series_clutter;
  std::vector<RealHistogram> series_weighted;
};

DistanceStudyResult run_distance_study(const DistanceStudyConfig& config);
DistanceStudyResult run_distance_study(const DistanceStudyConfig& config,
                                       std::span<const Mesh> pool);

}  // namespace quicci::experiments
