#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "quicci/experiments/histograms.hpp"
#include "quicci/intersection.hpp"
#include "quicci/mesh.hpp"

namespace quicci::experiments {

/// Occurrence counts of the rank at which each reference descriptor's true
/// counterpart appeared in the sorted distance list.
struct RankHistogram {
  IntHistogram counts;

  explicit RankHistogram(uint32_t cap = 4096) { counts.cap = cap; }
  void add(uint32_t rank) { counts.add(rank); }
  void merge(const RankHistogram& other) { counts.merge(other.counts); }
  uint64_t total_queries() const { return counts.total; }
  double rank0_fraction() const { return counts.fraction_at(0); }
  double mean_rank() const { return counts.mean(); }
  bool operator==(const RankHistogram&) const = default;
};

/// 2D counts over (clutter-fraction bin x rank); ranks at or above the rank
/// cap are dropped.
struct ClutterHeatmap {
  uint32_t fraction_bins = 32;
  uint32_t rank_cap = 256;
  std::vector<uint64_t> counts;  // fraction-major, fraction_bins x rank_cap

  ClutterHeatmap() : ClutterHeatmap(32, 256) {}
  ClutterHeatmap(uint32_t fraction_bin_count, uint32_t rank_limit)
      : fraction_bins(fraction_bin_count), rank_cap(rank_limit),
        counts(static_cast<size_t>(fraction_bin_count) * rank_limit, 0) {}

  void add(double fraction, uint32_t rank) {
    if (rank >= rank_cap) return;
    uint32_t bin = static_cast<uint32_t>(fraction * fraction_bins);
    if (bin >= fraction_bins) bin = fraction_bins - 1;
    counts[static_cast<size_t>(bin) * rank_cap + rank] += 1;
  }
  void merge(const ClutterHeatmap& other) {
    for (size_t i = 0; i < counts.size() && i < other.counts.size(); ++i)
      counts[i] += other.counts[i];
  }
  bool operator==(const ClutterHeatmap&) const = default;
};

struct ClutterboxConfig {
  double cube_edge = 3.0;
  std::vector<uint32_t> object_counts{1, 5, 10};  // ascending
  DescriptorConfig descriptor = DescriptorConfig::for_image(63, 64, 0.3);
  uint64_t seed = 0;
  std::vector<std::filesystem::path> dataset;

  /// Skip the random placement (sanity/debug: descriptors of an uncluttered
  /// scene are then bit-identical to the reference descriptors).
  bool identity_placement = false;

  uint32_t rank_cap = 4096;
  bool compute_heatmap = false;
  uint32_t heatmap_fraction_bins = 32;
  uint32_t heatmap_rank_cap = 256;
  uint32_t clutter_fraction_samples = 10000;
  unsigned threads = 0;
};

struct ClutterboxResult {
  std::vector<uint32_t> object_counts;
  std::vector<RankHistogram> histograms;   // one per object count
  std::vector<ClutterHeatmap> heatmaps;    // empty unless compute_heatmap

  void merge(const ClutterboxResult& other);
};

/// One full experiment run: draw the objects, fit them to unit spheres,
/// compute the reference descriptor set, then grow the scene one randomly
/// placed object at a time and at every requested object count rank each
/// reference descriptor's counterpart (tracked by provenance) among all
/// scene descriptors under the clutter-resistant distance.
ClutterboxResult run_clutterbox(const ClutterboxConfig& config);

/// Same, over an already loaded mesh pool (element i corresponds to
/// config.dataset[i] and the dataset paths are ignored).
ClutterboxResult run_clutterbox(const ClutterboxConfig& config, std::span<const Mesh> pool);

/// Monte-Carlo estimate of the surface-area fraction inside the support
/// sphere that does not belong to the reference object. Area-uniform samples
/// are drawn from scene triangles near the support sphere and kept if they
/// fall inside it. Returns 0 when no surface lies within the support region.
double clutter_fraction(const Mesh& scene, const OrientedPoint& point,
                        uint32_t reference_object_id, double support_radius,
                        uint32_t sample_count, Rng& rng);

}  // namespace quicci::experiments
