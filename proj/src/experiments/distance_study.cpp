#include "quicci/experiments/distance_study.hpp"

#include "quicci/descriptor.hpp"
#include "quicci/distances.hpp"
#include "quicci/error.hpp"
#include "quicci/mesh_io.hpp"

namespace quicci::experiments {

namespace {

struct Triple {
  IntHistogram hamming, clutter;
  RealHistogram weighted{0.01, 2.0};

  void add(const QuicciImage& needle, const QuicciImage& haystack) {
    hamming.add(hamming_distance(needle, haystack));
    clutter.add(clutter_resistant_distance(needle, haystack));
    weighted.add(weighted_hamming_distance(needle, haystack));
  }
};

}  // namespace

DistanceStudyResult run_distance_study(const DistanceStudyConfig& config) {
  std::vector<Mesh> pool;
  pool.reserve(config.dataset.size());
  for (const auto& path : config.dataset) pool.push_back(load_mesh(path));
  return run_distance_study(config, pool);
}

DistanceStudyResult run_distance_study(const DistanceStudyConfig& config,
                                       std::span<const Mesh> pool) {
  if (pool.empty()) throw Error("distance study: dataset is empty");
  config.descriptor.validate();

  DistanceStudyResult result;
  const uint32_t steps = config.sphere_step_count;
  result.sphere_counts.resize(steps + 1);
  for (uint32_t m = 0; m <= steps; ++m) result.sphere_counts[m] = m * config.spheres_per_step;
  result.series_hamming.resize(steps + 1);
  result.series_clutter.resize(steps + 1);
  result.series_weighted.assign(steps + 1, RealHistogram{0.01, 2.0});

  // Nominal distances: same-index vertex descriptors of random object pairs.
  for (uint32_t p = 0; p < config.nominal_pairs; ++p) {
    Rng rng(derive_seed(config.seed, 0x10000000ull + p));
    const size_t first = rng.uniform_index(pool.size());
    size_t second = first;
    if (pool.size() > 1)
      while (second == first) second = rng.uniform_index(pool.size());

    const Mesh mesh_a = fit_unit_sphere(pool[first]);
    const Mesh mesh_b = fit_unit_sphere(pool[second]);
    const auto points_a = unique_oriented_points(mesh_a);
    const auto points_b = unique_oriented_points(mesh_b);
    const size_t count = std::min(points_a.size(), points_b.size());
    const auto images_a = compute_quicci_set(
        mesh_a, std::span(points_a).subspan(0, count), config.descriptor, config.threads);
    const auto images_b = compute_quicci_set(
        mesh_b, std::span(points_b).subspan(0, count), config.descriptor, config.threads);
    for (size_t i = 0; i < count; ++i) {
      result.nominal_hamming.add(hamming_distance(images_a[i], images_b[i]));
      result.nominal_clutter.add(clutter_resistant_distance(images_a[i], images_b[i]));
      result.nominal_weighted.add(weighted_hamming_distance(images_a[i], images_b[i]));
    }
  }

  // Perturbation series: spheres accumulate on the surface in fixed steps;
  // descriptors are recomputed at the original vertices after each step.
  for (uint32_t o = 0; o < config.perturbation_objects; ++o) {
    Rng rng(derive_seed(config.seed, 0x20000000ull + o));
    const Mesh mesh = fit_unit_sphere(pool[rng.uniform_index(pool.size())]);
    const auto points = unique_oriented_points(mesh);
    if (points.empty()) continue;
    const auto original =
        compute_quicci_set(mesh, points, config.descriptor, config.threads);

    // Step 0: unmodified object, every distance is zero by construction.
    for (size_t i = 0; i < points.size(); ++i) {
      result.series_hamming[0].add(hamming_distance(original[i], original[i]));
      result.series_clutter[0].add(clutter_resistant_distance(original[i], original[i]));
      result.series_weighted[0].add(weighted_hamming_distance(original[i], original[i]));
    }

    const auto sphere_points = sample_surface_points(
        mesh, static_cast<size_t>(steps) * config.spheres_per_step, rng);
    for (uint32_t m = 1; m <= steps; ++m) {
      const std::span<const OrientedPoint> prefix(
          sphere_points.data(), static_cast<size_t>(m) * config.spheres_per_step);
      const Mesh modified =
          add_spheres(mesh, prefix, config.sphere_radius, config.sphere_subdivisions);
      const auto perturbed =
          compute_quicci_set(modified, points, config.descriptor, config.threads);
      for (size_t i = 0; i < points.size(); ++i) {
        result.series_hamming[m].add(hamming_distance(original[i], perturbed[i]));
        result.series_clutter[m].add(clutter_resistant_distance(original[i], perturbed[i]));
        result.series_weighted[m].add(weighted_hamming_distance(original[i], perturbed[i]));
      }
    }
  }
  return result;
}

}  // namespace quicci::experiments
