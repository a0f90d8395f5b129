#include "quicci/experiments/clutterbox.hpp"

#include <algorithm>

#include "quicci/descriptor.hpp"
#include "quicci/distances.hpp"
#include "quicci/error.hpp"
#include "quicci/mesh_io.hpp"
#include "quicci/parallel.hpp"

namespace quicci::experiments {

void ClutterboxResult::merge(const ClutterboxResult& other) {
  if (object_counts.empty()) {
    *this = other;
    return;
  }
  if (object_counts != other.object_counts)
    throw Error("ClutterboxResult::merge: object counts differ");
  for (size_t i = 0; i < histograms.size(); ++i) histograms[i].merge(other.histograms[i]);
  for (size_t i = 0; i < heatmaps.size() && i < other.heatmaps.size(); ++i)
    heatmaps[i].merge(other.heatmaps[i]);
}

double clutter_fraction(const Mesh& scene, const OrientedPoint& point,
                        uint32_t reference_object_id, double support_radius,
                        uint32_t sample_count, Rng& rng) {
  if (sample_count == 0) throw Error("clutter_fraction: sample_count must be >= 1");

  // Conservative candidate set: triangles whose bounding sphere reaches the
  // support sphere.
  std::vector<uint32_t> candidates;
  std::vector<double> cumulative_area;
  double total_area = 0.0;
  for (size_t t = 0; t < scene.triangle_count(); ++t) {
    const auto v = scene.triangle_vertices(t);
    const Vec3 centroid = (v[0] + v[1] + v[2]) / 3.0;
    const double reach = std::sqrt(std::max({(v[0] - centroid).squared_norm(),
                                             (v[1] - centroid).squared_norm(),
                                             (v[2] - centroid).squared_norm()}));
    if ((centroid - point.position).norm() - reach > support_radius) continue;
    const double area = triangle_area(v[0], v[1], v[2]);
    if (area <= 0.0) continue;
    candidates.push_back(static_cast<uint32_t>(t));
    total_area += area;
    cumulative_area.push_back(total_area);
  }
  if (candidates.empty()) return 0.0;

  const double support_sq = support_radius * support_radius;
  uint64_t kept = 0, clutter = 0;
  for (uint32_t s = 0; s < sample_count; ++s) {
    const double pick = rng.uniform() * total_area;
    const size_t slot = std::lower_bound(cumulative_area.begin(), cumulative_area.end(), pick) -
                        cumulative_area.begin();
    const uint32_t t = candidates[std::min(slot, candidates.size() - 1)];
    const auto& tri = scene.triangles[t];
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const Vec3 sample = scene.vertices[tri[0]] * (1.0 - r1) +
                        scene.vertices[tri[1]] * (r1 * (1.0 - r2)) +
                        scene.vertices[tri[2]] * (r1 * r2);
    if ((sample - point.position).squared_norm() > support_sq) continue;
    ++kept;
    const uint32_t object =
        scene.has_provenance() ? scene.vertex_object_ids[tri[0]] : reference_object_id;
    if (object != reference_object_id) ++clutter;
  }
  return kept == 0 ? 0.0 : static_cast<double>(clutter) / static_cast<double>(kept);
}

ClutterboxResult run_clutterbox(const ClutterboxConfig& config) {
  std::vector<Mesh> pool;
  pool.reserve(config.dataset.size());
  for (const auto& path : config.dataset) pool.push_back(load_mesh(path));
  return run_clutterbox(config, pool);
}

ClutterboxResult run_clutterbox(const ClutterboxConfig& config, std::span<const Mesh> pool) {
  if (config.object_counts.empty()) throw Error("clutterbox: no object counts requested");
  if (!std::is_sorted(config.object_counts.begin(), config.object_counts.end()))
    throw Error("clutterbox: object counts must be ascending");
  if (config.object_counts.front() < 1) throw Error("clutterbox: object counts must be >= 1");
  const uint32_t object_total = config.object_counts.back();
  if (pool.size() < object_total)
    throw Error("clutterbox: dataset holds " + std::to_string(pool.size()) +
                " meshes, need at least " + std::to_string(object_total));
  config.descriptor.validate();

  Rng rng(config.seed);

  // Draw the objects and fit each into the unit sphere.
  std::vector<uint32_t> drawn;
  rng.sample_indices(pool.size(), object_total, drawn);
  std::vector<Mesh> fitted;
  fitted.reserve(object_total);
  for (uint32_t index : drawn) fitted.push_back(fit_unit_sphere(pool[index]));

  const size_t reference = rng.uniform_index(object_total);

  // Scene order: reference first, the rest shuffled.
  std::vector<uint32_t> order{static_cast<uint32_t>(reference)};
  {
    std::vector<uint32_t> rest;
    for (uint32_t i = 0; i < object_total; ++i)
      if (i != reference) rest.push_back(i);
    std::vector<uint32_t> shuffle;
    rng.sample_indices(rest.size(), rest.size(), shuffle);
    for (uint32_t s : shuffle) order.push_back(rest[s]);
  }

  // Reference descriptor set {RD}.
  const Mesh& reference_mesh = fitted[reference];
  const UniquePointSet reference_points = unique_oriented_point_set(reference_mesh);
  const std::vector<QuicciImage> reference_images =
      compute_quicci_set(reference_mesh, reference_points.points, config.descriptor,
                         config.threads);

  ClutterboxResult result;
  result.object_counts.assign(config.object_counts.begin(), config.object_counts.end());
  result.histograms.assign(result.object_counts.size(), RankHistogram(config.rank_cap));
  if (config.compute_heatmap)
    result.heatmaps.assign(result.object_counts.size(),
                           ClutterHeatmap(config.heatmap_fraction_bins, config.heatmap_rank_cap));

  std::vector<Mesh> placed;
  placed.reserve(object_total);
  for (uint32_t scene_size = 1; scene_size <= object_total; ++scene_size) {
    const Mesh& next = fitted[order[scene_size - 1]];
    if (config.identity_placement) {
      placed.push_back(next);
    } else {
      placed.push_back(place_in_cube(next, config.cube_edge, rng).first);
    }

    const auto slot = std::find(result.object_counts.begin(), result.object_counts.end(),
                                scene_size);
    if (slot == result.object_counts.end()) continue;
    const size_t histogram_index = slot - result.object_counts.begin();

    // Cluttered descriptor set {CD} over the combined scene.
    const Mesh scene = concatenate_scene(placed);
    const UniquePointSet scene_points = unique_oriented_point_set(scene);
    const std::vector<QuicciImage> scene_images =
        compute_quicci_set(scene, scene_points.points, config.descriptor, config.threads);

    // The reference object occupies the scene's vertex prefix, so each
    // reference point's counterpart is found via its source vertex index.
    std::vector<uint32_t> ranks(reference_images.size());
    std::vector<double> fractions(config.compute_heatmap ? reference_images.size() : 0);
    parallel_for(reference_images.size(), config.threads, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        const uint32_t counterpart =
            scene_points.point_of_vertex[reference_points.source_vertex[i]];
        const QuicciImage& needle = reference_images[i];
        const uint32_t counterpart_distance =
            clutter_resistant_distance(needle, scene_images[counterpart]);
        uint32_t rank = 0;
        for (size_t j = 0; j < scene_images.size(); ++j) {
          if (j == counterpart) continue;
          const uint32_t d = clutter_resistant_distance(needle, scene_images[j]);
          if (d < counterpart_distance || (d == counterpart_distance && j < counterpart)) ++rank;
        }
        ranks[i] = rank;
        if (config.compute_heatmap) {
          Rng fraction_rng(derive_seed(config.seed, (static_cast<uint64_t>(scene_size) << 32) | i));
          fractions[i] =
              clutter_fraction(scene, scene_points.points[counterpart], 0,
                               config.descriptor.support_radius,
                               config.clutter_fraction_samples, fraction_rng);
        }
      }
    });

    for (size_t i = 0; i < ranks.size(); ++i) {
      result.histograms[histogram_index].add(ranks[i]);
      if (config.compute_heatmap) result.heatmaps[histogram_index].add(fractions[i], ranks[i]);
    }
  }
  return result;
}

}  // namespace quicci::experiments
