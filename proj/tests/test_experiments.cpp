#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "quicci/descriptor.hpp"
#include "quicci/distances.hpp"
#include "quicci/experiments/benchmarks.hpp"
#include "quicci/experiments/clutterbox.hpp"
#include "quicci/experiments/distance_study.hpp"
#include "quicci/experiments/report.hpp"
#include "quicci/mesh_synth.hpp"

using namespace quicci;
using namespace quicci::experiments;
namespace fs = std::filesystem;

namespace {

ClutterboxConfig small_clutterbox_config() {
  ClutterboxConfig config;
  config.descriptor = DescriptorConfig::for_image(31, 32, 0.3);
  config.object_counts = {1, 2};
  config.seed = 1234;
  config.threads = 2;
  return config;
}

std::vector<Mesh> blob_pool(size_t count, int subdivisions = 1) {
  std::vector<Mesh> pool;
  for (size_t i = 0; i < count; ++i) pool.push_back(make_blob(1000 + i, subdivisions));
  return pool;
}

}  // namespace

TEST_CASE("uncluttered identity scenes rank every vertex at zero") {
  ClutterboxConfig config = small_clutterbox_config();
  config.object_counts = {1};
  config.identity_placement = true;
  const auto pool = blob_pool(3);
  const ClutterboxResult result = run_clutterbox(config, pool);
  REQUIRE(result.histograms.size() == 1);
  const RankHistogram& hist = result.histograms[0];
  CHECK(hist.total_queries() > 0);
  CHECK(hist.rank0_fraction() == 1.0);
}

TEST_CASE("clutterbox runs are deterministic under a fixed seed") {
  const ClutterboxConfig config = small_clutterbox_config();
  const auto pool = blob_pool(4);
  const ClutterboxResult a = run_clutterbox(config, pool);
  const ClutterboxResult b = run_clutterbox(config, pool);
  REQUIRE(a.histograms.size() == b.histograms.size());
  for (size_t i = 0; i < a.histograms.size(); ++i) CHECK(a.histograms[i] == b.histograms[i]);
}

TEST_CASE("histogram totals conserve the reference descriptor count") {
  ClutterboxConfig config = small_clutterbox_config();
  config.rank_cap = 1 << 20;  // uncapped at this scale
  const auto pool = blob_pool(4);
  const ClutterboxResult result = run_clutterbox(config, pool);
  for (const RankHistogram& hist : result.histograms) {
    CHECK(hist.total_queries() > 0);
    CHECK(hist.counts.binned_total() == hist.total_queries());
    CHECK(hist.total_queries() == result.histograms[0].total_queries());
  }
}

TEST_CASE("two-object identity scene ranks match a direct recomputation") {
  ClutterboxConfig config;
  config.descriptor = DescriptorConfig::for_image(31, 32, 0.3);
  config.object_counts = {2};
  config.identity_placement = true;
  config.seed = 909;
  config.rank_cap = 1 << 20;
  std::vector<Mesh> pool{make_cube(1.0), make_blob(5, 1)};  // 24 vs 42 unique points
  const ClutterboxResult result = run_clutterbox(config, pool);
  REQUIRE(result.histograms.size() == 1);

  // The reference object is identified by its unique-point count.
  const uint64_t rd_count = result.histograms[0].total_queries();
  REQUIRE((rd_count == 24 || rd_count == 42));
  const size_t ref = rd_count == 24 ? 0 : 1;
  const size_t other = 1 - ref;

  const Mesh fitted_ref = fit_unit_sphere(pool[ref]);
  const Mesh fitted_other = fit_unit_sphere(pool[other]);
  std::vector<Mesh> parts{fitted_ref, fitted_other};
  const Mesh scene = concatenate_scene(parts);

  const auto ref_points = unique_oriented_points(fitted_ref);
  const auto scene_points = unique_oriented_points(scene);
  const auto rd = compute_quicci_set(fitted_ref, ref_points, config.descriptor, 2);
  const auto cd = compute_quicci_set(scene, scene_points, config.descriptor, 2);

  IntHistogram expected;
  expected.cap = config.rank_cap;
  for (size_t i = 0; i < rd.size(); ++i) {
    // Counterpart looked up by exact (position, normal) match.
    size_t counterpart = scene_points.size();
    for (size_t j = 0; j < scene_points.size(); ++j)
      if (scene_points[j] == ref_points[i]) {
        counterpart = j;
        break;
      }
    REQUIRE(counterpart < scene_points.size());
    const uint32_t dc = clutter_resistant_distance(rd[i], cd[counterpart]);
    uint32_t rank = 0;
    for (size_t j = 0; j < cd.size(); ++j) {
      if (j == counterpart) continue;
      const uint32_t d = clutter_resistant_distance(rd[i], cd[j]);
      if (d < dc || (d == dc && j < counterpart)) ++rank;
    }
    expected.add(rank);
  }
  CHECK(result.histograms[0].counts == expected);
}

TEST_CASE("clutter_fraction is zero for a pure reference scene") {
  std::vector<Mesh> parts{fit_unit_sphere(make_blob(6, 1))};
  const Mesh scene = concatenate_scene(parts);
  Rng rng(1);
  const OrientedPoint point{scene.vertices[0], scene.normals[0]};
  CHECK(clutter_fraction(scene, point, 0, 0.3, 5000, rng) == 0.0);
}

TEST_CASE("clutter_fraction of two coincident objects is one half") {
  const Mesh blob = fit_unit_sphere(make_blob(8, 1));
  std::vector<Mesh> parts{blob, blob};
  const Mesh scene = concatenate_scene(parts);
  Rng rng(2);
  const OrientedPoint point{blob.vertices[0], blob.normals[0]};
  CHECK(clutter_fraction(scene, point, 0, 0.3, 10000, rng) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("clutter_fraction matches a hand-computed area ratio") {
  // Two rectangles close to the query point, fully inside the support
  // sphere: areas 0.01 (reference) and 0.02 (clutter).
  auto rectangle = [](double z, double half_x, double half_y) {
    Mesh m;
    m.vertices = {{-half_x, -half_y, z}, {half_x, -half_y, z}, {half_x, half_y, z},
                  {-half_x, half_y, z}};
    m.normals.assign(4, {0, 0, 1});
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    return m;
  };
  std::vector<Mesh> parts{rectangle(0.05, 0.05, 0.05), rectangle(-0.05, 0.05, 0.10)};
  const Mesh scene = concatenate_scene(parts);
  Rng rng(3);
  const OrientedPoint point{{0, 0, 0}, {0, 0, 1}};
  const double fraction = clutter_fraction(scene, point, 0, 0.3, 20000, rng);
  CHECK(fraction == doctest::Approx(2.0 / 3.0).epsilon(0.03));
}

TEST_CASE("clutterbox can emit heatmaps") {
  ClutterboxConfig config = small_clutterbox_config();
  config.compute_heatmap = true;
  config.clutter_fraction_samples = 500;
  config.heatmap_fraction_bins = 8;
  const auto pool = blob_pool(4);
  const ClutterboxResult result = run_clutterbox(config, pool);
  REQUIRE(result.heatmaps.size() == result.histograms.size());
  uint64_t total = 0;
  for (uint64_t c : result.heatmaps[0].counts) total += c;
  CHECK(total > 0);
}

TEST_CASE("distance study: no perturbation means zero distances everywhere") {
  DistanceStudyConfig config;
  config.descriptor = DescriptorConfig::for_image(16, 16, 0.3);
  config.nominal_pairs = 0;
  config.perturbation_objects = 1;
  config.sphere_step_count = 2;
  config.spheres_per_step = 5;
  config.sphere_subdivisions = 1;
  config.seed = 5;
  config.threads = 2;
  const auto pool = blob_pool(2);
  const DistanceStudyResult result = run_distance_study(config, pool);

  REQUIRE(result.sphere_counts.size() == 3);
  CHECK(result.sphere_counts[0] == 0);
  CHECK(result.sphere_counts[2] == 10);
  CHECK(result.series_hamming[0].mean() == 0.0);
  CHECK(result.series_clutter[0].mean() == 0.0);
  CHECK(result.series_weighted[0].mean() == 0.0);
  CHECK(result.series_hamming[0].total > 0);
}

TEST_CASE("distance study: identical nominal pairs give all-zero histograms") {
  DistanceStudyConfig config;
  config.descriptor = DescriptorConfig::for_image(16, 16, 0.3);
  config.nominal_pairs = 1;
  config.perturbation_objects = 0;
  config.sphere_step_count = 1;
  config.seed = 6;
  const Mesh blob = make_blob(77, 1);
  std::vector<Mesh> pool{blob, blob};
  const DistanceStudyResult result = run_distance_study(config, pool);
  CHECK(result.nominal_hamming.total > 0);
  CHECK(result.nominal_hamming.mean() == 0.0);
  CHECK(result.nominal_clutter.mean() == 0.0);
  CHECK(result.nominal_weighted.mean() == 0.0);
}

TEST_CASE("distance study: more spheres do not lower the mean distance") {
  DistanceStudyConfig config;
  config.descriptor = DescriptorConfig::for_image(31, 32, 0.3);
  config.nominal_pairs = 0;
  config.perturbation_objects = 2;
  config.sphere_step_count = 3;
  config.spheres_per_step = 10;
  config.sphere_subdivisions = 1;
  config.seed = 7;
  config.threads = 2;
  const auto pool = blob_pool(3, 2);
  const DistanceStudyResult result = run_distance_study(config, pool);
  CHECK(result.series_hamming[3].mean() >= result.series_hamming[1].mean());
  CHECK(result.series_hamming[1].mean() > 0.0);
}

TEST_CASE("comparison-rate benchmark reports a positive steady rate") {
  Rng rng(8);
  std::vector<QuicciImage> images;
  for (int i = 0; i < 256; ++i) images.push_back(testing::random_image(rng, 64, 64, 600));
  for (const DistanceKind kind :
       {DistanceKind::hamming, DistanceKind::clutter_resistant, DistanceKind::weighted_hamming}) {
    const ComparisonRate rate = bench_comparison_rate(images, kind, 0.05);
    CHECK(rate.pairs_per_second > 0.0);
    CHECK(rate.pairs > 0);
  }
}

TEST_CASE("generation-rate benchmark hits the requested scene sizes") {
  const std::vector<uint64_t> targets{500, 2000};
  const auto points = bench_generation_rate(targets, 4, DescriptorConfig::for_image(31, 32, 0.3), 9);
  REQUIRE(points.size() == 2);
  for (size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].triangle_count >= targets[i]);
    CHECK(points[i].descriptors_per_second > 0.0);
  }
  CHECK(points[1].triangle_count > points[0].triangle_count);
}

TEST_CASE("csv and manifest writers produce the documented layouts") {
  const fs::path dir = fs::temp_directory_path() / "quicci_report_tests";
  fs::create_directories(dir);

  RankHistogram hist(256);
  hist.add(0);
  hist.add(0);
  hist.add(3);
  const uint32_t counts[] = {1};
  write_rank_histograms_csv(dir / "ranks.csv", counts, std::span(&hist, 1));
  std::ifstream in(dir / "ranks.csv");
  std::string header, line1, line2;
  std::getline(in, header);
  std::getline(in, line1);
  std::getline(in, line2);
  CHECK(header == "object_count,rank,count");
  CHECK(line1 == "1,0,2");
  CHECK(line2 == "1,3,1");

  write_manifest(dir / "manifest.json", {{"seed", "42"}, {"tool", "test"}});
  std::ifstream manifest(dir / "manifest.json");
  std::string contents((std::istreambuf_iterator<char>(manifest)),
                       std::istreambuf_iterator<char>());
  CHECK(contents.find("\"seed\": \"42\"") != std::string::npos);
}
