#include "quicci/experiments/benchmarks.hpp"

#include <chrono>

#include "quicci/descriptor.hpp"
#include "quicci/distances.hpp"
#include "quicci/error.hpp"
#include "quicci/mesh_synth.hpp"

namespace quicci::experiments {

std::string distance_kind_name(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::hamming: return "hamming";
    case DistanceKind::clutter_resistant: return "clutter_resistant";
    case DistanceKind::weighted_hamming: return "weighted_hamming";
  }
  return "unknown";
}

ComparisonRate bench_comparison_rate(std::span<const QuicciImage> images, DistanceKind kind,
                                     double min_seconds) {
  if (images.size() < 2) throw Error("bench_comparison_rate: need at least 2 images");
  using clock = std::chrono::steady_clock;

  // The checksum keeps the distance kernels observable so they cannot be
  // optimized away.
  volatile uint64_t sink = 0;
  uint64_t checksum = 0;
  uint64_t pairs = 0;
  uint64_t stride = 1;
  const auto start = clock::now();
  double elapsed = 0.0;
  while (elapsed < min_seconds) {
    for (size_t i = 0; i < images.size(); ++i) {
      const size_t j = (i + stride) % images.size();
      switch (kind) {
        case DistanceKind::hamming: checksum += hamming_distance(images[i], images[j]); break;
        case DistanceKind::clutter_resistant:
          checksum += clutter_resistant_distance(images[i], images[j]);
          break;
        case DistanceKind::weighted_hamming:
          checksum += static_cast<uint64_t>(weighted_hamming_distance(images[i], images[j]) * 1000);
          break;
      }
    }
    pairs += images.size();
    stride = stride % (images.size() - 1) + 1;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  }
  sink = checksum;
  (void)sink;

  ComparisonRate rate;
  rate.kind = kind;
  rate.pairs = pairs;
  rate.seconds = elapsed;
  rate.pairs_per_second = elapsed > 0.0 ? static_cast<double>(pairs) / elapsed : 0.0;
  return rate;
}

std::vector<GenerationRatePoint> bench_generation_rate(std::span<const uint64_t> triangle_targets,
                                                       uint32_t descriptors_per_scene,
                                                       const DescriptorConfig& config,
                                                       uint64_t seed) {
  using clock = std::chrono::steady_clock;
  std::vector<GenerationRatePoint> points;
  for (size_t target_index = 0; target_index < triangle_targets.size(); ++target_index) {
    const uint64_t target = triangle_targets[target_index];
    Rng rng(derive_seed(seed, target_index));

    std::vector<Mesh> parts;
    uint64_t triangles = 0;
    while (triangles < target) {
      Mesh blob = fit_unit_sphere(make_blob(rng.next_u64(), 3));
      auto [placed, placement] = place_in_cube(blob, 3.0, rng);
      triangles += placed.triangle_count();
      parts.push_back(std::move(placed));
    }
    const Mesh scene = concatenate_scene(parts);

    GenerationRatePoint point;
    point.triangle_count = scene.triangle_count();
    if (descriptors_per_scene > 0 && scene.triangle_count() > 0) {
      const auto origins = sample_surface_points(scene, descriptors_per_scene, rng);
      const auto start = clock::now();
      const auto images = compute_quicci_set(scene, origins, config, 1);
      point.seconds = std::chrono::duration<double>(clock::now() - start).count();
      point.descriptor_count = images.size();
      point.descriptors_per_second =
          point.seconds > 0.0 ? static_cast<double>(images.size()) / point.seconds : 0.0;
    }
    points.push_back(point);
  }
  return points;
}

}  // namespace quicci::experiments
