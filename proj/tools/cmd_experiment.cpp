#include <chrono>
#include <cstdio>
#include <fstream>

#include "cli_common.hpp"
#include "quicci/descriptor_io.hpp"
#include "quicci/error.hpp"
#include "quicci/mesh_io.hpp"
#include "quicci/experiments/report.hpp"
#include "quicci/run_index.hpp"
#include "quicci/version.hpp"

namespace quicci::cli {

namespace {

using namespace quicci::experiments;

std::map<std::string, std::string> base_manifest(CLI::App* cmd, uint64_t seed) {
  std::map<std::string, std::string> manifest;
  manifest["tool"] = "quicci " QUICCI_VERSION;
  manifest["command"] = cmd->get_name();
  manifest["seed"] = std::to_string(seed);
  std::istringstream config(cmd->config_to_str(true, false));
  std::string line;
  while (std::getline(config, line)) {
    const size_t eq = line.find('=');
    if (eq == std::string::npos || line.empty() || line[0] == '[') continue;
    manifest["config." + line.substr(0, eq)] = line.substr(eq + 1);
  }
  return manifest;
}

std::vector<QuicciImage> load_or_make_images(const std::filesystem::path& qdf,
                                             uint32_t synthetic_count, uint32_t width,
                                             uint32_t height, double density, Rng& rng) {
  if (!qdf.empty()) {
    DescriptorSet set = read_descriptor_set(qdf);
    return std::move(set.images);
  }
  std::vector<QuicciImage> images;
  images.reserve(synthetic_count);
  const uint32_t bits = width * height;
  for (uint32_t i = 0; i < synthetic_count; ++i) {
    QuicciImage image(width, height);
    uint32_t target = static_cast<uint32_t>(static_cast<double>(bits) * density);
    uint32_t placed = 0;
    while (placed < target) {
      const uint32_t position = static_cast<uint32_t>(rng.uniform_index(bits));
      if (image.flat_bit(position)) continue;
      image.set_flat_bit(position, true);
      ++placed;
    }
    images.push_back(std::move(image));
  }
  return images;
}

// ---------------------------------------------------------------------------

struct ClutterboxCliOptions {
  std::filesystem::path dataset_dir;
  std::filesystem::path output_dir;
  uint32_t runs = 30;
  std::vector<uint32_t> object_counts{1, 5, 10};
  double cube_edge = 3.0;
  uint32_t width = 63, height = 64;
  double support_radius = 0.3;
  uint32_t rank_cap = 4096;
  bool heatmap = false;
  uint32_t heatmap_samples = 10000;
  bool identity_placement = false;
  CommonOptions common;
};

void run_clutterbox_cmd(CLI::App* cmd, ClutterboxCliOptions& options) {
  const uint64_t seed = announce_run(cmd, options.common);
  ClutterboxConfig config;
  config.cube_edge = options.cube_edge;
  config.object_counts = options.object_counts;
  config.descriptor =
      DescriptorConfig::for_image(options.width, options.height, options.support_radius);
  config.dataset = collect_mesh_files(options.dataset_dir);
  config.rank_cap = options.rank_cap;
  config.compute_heatmap = options.heatmap;
  config.clutter_fraction_samples = options.heatmap_samples;
  config.identity_placement = options.identity_placement;
  config.threads = options.common.threads;

  std::vector<Mesh> pool;
  pool.reserve(config.dataset.size());
  for (const auto& path : config.dataset) pool.push_back(load_mesh(path));
  std::fprintf(stderr, "dataset: %zu meshes\n", pool.size());

  ClutterboxResult merged;
  for (uint32_t run = 0; run < options.runs; ++run) {
    config.seed = derive_seed(seed, run);
    merged.merge(run_clutterbox(config, pool));
    std::fprintf(stderr, "run %u/%u done\n", run + 1, options.runs);
  }

  std::filesystem::create_directories(options.output_dir);
  OutputTracker outputs;
  try {
    write_rank_histograms_csv(outputs.track(options.output_dir / "rank_histograms.csv"),
                              merged.object_counts, merged.histograms);
    if (options.heatmap)
      write_heatmaps_csv(outputs.track(options.output_dir / "heatmaps.csv"),
                         merged.object_counts, merged.heatmaps);
    auto manifest = base_manifest(cmd, seed);
    manifest["runs"] = std::to_string(options.runs);
    write_manifest(outputs.track(options.output_dir / "manifest.json"), manifest);
  } catch (...) {
    outputs.discard_all();
    throw;
  }
  for (size_t i = 0; i < merged.histograms.size(); ++i)
    std::fprintf(stderr, "n=%u: %llu queries, rank-0 fraction %.4f, mean rank %.3f\n",
                 merged.object_counts[i],
                 static_cast<unsigned long long>(merged.histograms[i].total_queries()),
                 merged.histograms[i].rank0_fraction(), merged.histograms[i].mean_rank());
}

// ---------------------------------------------------------------------------

struct DistanceStudyCliOptions {
  std::filesystem::path dataset_dir;
  std::filesystem::path output_dir;
  uint32_t pairs = 100;
  uint32_t objects = 10;
  uint32_t sphere_steps = 50;
  uint32_t spheres_per_step = 10;
  double sphere_radius = 0.05;
  int sphere_subdivisions = 2;
  uint32_t width = 63, height = 64;
  double support_radius = 0.3;
  CommonOptions common;
};

void run_distance_study_cmd(CLI::App* cmd, DistanceStudyCliOptions& options) {
  const uint64_t seed = announce_run(cmd, options.common);
  DistanceStudyConfig config;
  config.dataset = collect_mesh_files(options.dataset_dir);
  config.nominal_pairs = options.pairs;
  config.perturbation_objects = options.objects;
  config.sphere_step_count = options.sphere_steps;
  config.spheres_per_step = options.spheres_per_step;
  config.sphere_radius = options.sphere_radius;
  config.sphere_subdivisions = options.sphere_subdivisions;
  config.descriptor =
      DescriptorConfig::for_image(options.width, options.height, options.support_radius);
  config.seed = seed;
  config.threads = options.common.threads;

  const DistanceStudyResult result = run_distance_study(config);

  std::filesystem::create_directories(options.output_dir);
  OutputTracker outputs;
  try {
    write_distance_study_csv(outputs.track(options.output_dir / "distance_nominal.csv"),
                             outputs.track(options.output_dir / "distance_series.csv"), result);
    auto manifest = base_manifest(cmd, seed);
    manifest["weighted_bin_width"] = "0.01";
    write_manifest(outputs.track(options.output_dir / "manifest.json"), manifest);
  } catch (...) {
    outputs.discard_all();
    throw;
  }
  if (!result.sphere_counts.empty()) {
    const size_t last = result.sphere_counts.size() - 1;
    std::fprintf(stderr, "mean hamming: %.2f @%u spheres -> %.2f @%u spheres\n",
                 result.series_hamming[1 < last ? 1 : last].mean(),
                 result.sphere_counts[1 < last ? 1 : last], result.series_hamming[last].mean(),
                 result.sphere_counts[last]);
  }
}

// ---------------------------------------------------------------------------

struct BenchCompareOptions {
  std::filesystem::path images_qdf;
  uint32_t synthetic_count = 4096;
  uint32_t width = 64, height = 64;
  double density = 0.15;
  double duration = 2.0;
  std::filesystem::path output_dir;
  CommonOptions common;
};

void run_bench_compare(CLI::App* cmd, BenchCompareOptions& options) {
  const uint64_t seed = announce_run(cmd, options.common);
  Rng rng(seed);
  const auto images = load_or_make_images(options.images_qdf, options.synthetic_count,
                                          options.width, options.height, options.density, rng);
  std::vector<ComparisonRate> rates;
  for (const DistanceKind kind :
       {DistanceKind::hamming, DistanceKind::clutter_resistant, DistanceKind::weighted_hamming}) {
    rates.push_back(bench_comparison_rate(images, kind, options.duration));
    std::fprintf(stderr, "%s: %.3e pairs/s\n", distance_kind_name(kind).c_str(),
                 rates.back().pairs_per_second);
  }

  std::filesystem::create_directories(options.output_dir);
  OutputTracker outputs;
  try {
    write_comparison_rates_csv(outputs.track(options.output_dir / "comparison_rates.csv"), rates);
    write_manifest(outputs.track(options.output_dir / "manifest.json"),
                   base_manifest(cmd, seed));
  } catch (...) {
    outputs.discard_all();
    throw;
  }
}

// ---------------------------------------------------------------------------

struct BenchGenerateOptions {
  std::vector<uint64_t> triangle_counts{1000, 3000, 10000, 30000, 100000};
  uint32_t descriptors = 32;
  uint32_t width = 63, height = 64;
  double support_radius = 0.3;
  std::filesystem::path output_dir;
  CommonOptions common;
};

void run_bench_generate(CLI::App* cmd, BenchGenerateOptions& options) {
  const uint64_t seed = announce_run(cmd, options.common);
  const DescriptorConfig config =
      DescriptorConfig::for_image(options.width, options.height, options.support_radius);
  const auto points =
      bench_generation_rate(options.triangle_counts, options.descriptors, config, seed);
  for (const auto& point : points)
    std::fprintf(stderr, "%llu triangles: %.1f descriptors/s\n",
                 static_cast<unsigned long long>(point.triangle_count),
                 point.descriptors_per_second);

  std::filesystem::create_directories(options.output_dir);
  OutputTracker outputs;
  try {
    write_generation_rates_csv(outputs.track(options.output_dir / "generation_rates.csv"),
                               points);
    write_manifest(outputs.track(options.output_dir / "manifest.json"),
                   base_manifest(cmd, seed));
  } catch (...) {
    outputs.discard_all();
    throw;
  }
}

// ---------------------------------------------------------------------------

struct RunIndexStudyOptions {
  std::filesystem::path images_qdf;
  uint32_t synthetic_count = 10000;
  uint32_t width = 64, height = 64;
  double density = 0.15;
  uint32_t sparse_needles = 50;
  uint32_t sparse_bits = 32;
  uint32_t dense_needles = 50;
  uint32_t dense_bits = 1024;
  uint32_t k = 32;
  std::filesystem::path output_dir;
  CommonOptions common;
};

void run_runindex_study(CLI::App* cmd, RunIndexStudyOptions& options) {
  const uint64_t seed = announce_run(cmd, options.common);
  Rng rng(seed);
  const auto images = load_or_make_images(options.images_qdf, options.synthetic_count,
                                          options.width, options.height, options.density, rng);
  if (images.empty()) throw Error("runindex-study: no images");

  RunInvertedIndex index(images[0].width(), images[0].height());
  for (uint32_t i = 0; i < images.size(); ++i)
    index.insert(images[i], {0, i});
  std::fprintf(stderr, "indexed %zu images, %zu run lists, %zu list entries\n",
               index.image_count(), index.list_count(), index.list_entry_count());

  // Needles are stored images masked to a target set-bit count, so every
  // needle has close matches in the corpus.
  auto make_needle = [&](uint32_t target_bits) {
    const QuicciImage& source = images[rng.uniform_index(images.size())];
    QuicciImage needle(source.width(), source.height());
    uint32_t kept = 0;
    for (uint32_t b = 0; b < source.bit_count() && kept < target_bits; ++b)
      if (source.flat_bit(b)) {
        needle.set_flat_bit(b, true);
        ++kept;
      }
    return needle;
  };

  std::filesystem::create_directories(options.output_dir);
  OutputTracker outputs;
  try {
    std::ofstream summary(outputs.track(options.output_dir / "runindex_summary.csv"));
    std::ofstream results(outputs.track(options.output_dir / "runindex_results.csv"));
    summary << "needle,kind,set_bits,candidates,corpus,candidate_fraction,millis\n";
    results << "needle,rank,distance,object_id,vertex_index\n";

    double dense_fraction_sum = 0.0;
    uint32_t needle_id = 0;
    for (const auto& [kind, count, bits] :
         {std::tuple{"sparse", options.sparse_needles, options.sparse_bits},
          std::tuple{"dense", options.dense_needles, options.dense_bits}}) {
      for (uint32_t n = 0; n < count; ++n, ++needle_id) {
        const QuicciImage needle = make_needle(bits);
        const auto start = std::chrono::steady_clock::now();
        const auto out = index.query(needle, options.k);
        const double millis =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        const double fraction =
            static_cast<double>(out.candidate_count) / static_cast<double>(images.size());
        if (std::string(kind) == "dense") dense_fraction_sum += fraction;
        summary << needle_id << ',' << kind << ',' << needle.popcount() << ','
                << out.candidate_count << ',' << images.size() << ',' << fraction << ','
                << millis << '\n';
        for (size_t r = 0; r < out.results.size(); ++r)
          results << needle_id << ',' << r << ',' << out.results[r].distance << ','
                  << out.results[r].provenance.object_id << ','
                  << out.results[r].provenance.vertex_index << '\n';
      }
    }
    if (options.dense_needles > 0)
      std::fprintf(stderr, "mean dense candidate fraction: %.3f\n",
                   dense_fraction_sum / options.dense_needles);
    auto manifest = base_manifest(cmd, seed);
    write_manifest(outputs.track(options.output_dir / "manifest.json"), manifest);
  } catch (...) {
    outputs.discard_all();
    throw;
  }
}

}  // namespace

void register_experiment(CLI::App& app) {
  CLI::App* experiment = app.add_subcommand("experiment", "Benchmark and evaluation harnesses");
  experiment->require_subcommand(1);

  auto clutterbox = std::make_shared<ClutterboxCliOptions>();
  CLI::App* clutterbox_cmd = experiment->add_subcommand(
      "clutterbox", "Rank correct matches in progressively cluttered scenes");
  clutterbox_cmd->add_option("--dataset", clutterbox->dataset_dir, "Directory of mesh files")
      ->required()
      ->check(CLI::ExistingDirectory);
  clutterbox_cmd->add_option("--output", clutterbox->output_dir, "Output directory")->required();
  clutterbox_cmd->add_option("--runs", clutterbox->runs, "Number of seeded runs");
  clutterbox_cmd->add_option("--object-counts", clutterbox->object_counts,
                             "Scene sizes at which rankings are recorded");
  clutterbox_cmd->add_option("--cube-edge", clutterbox->cube_edge, "Scene cube edge length");
  clutterbox_cmd->add_option("--width", clutterbox->width, "Descriptor width in bits");
  clutterbox_cmd->add_option("--height", clutterbox->height, "Descriptor height in bits");
  clutterbox_cmd->add_option("--support-radius", clutterbox->support_radius, "Support radius");
  clutterbox_cmd->add_option("--rank-cap", clutterbox->rank_cap, "Histogram rank cap");
  clutterbox_cmd->add_flag("--heatmap", clutterbox->heatmap,
                           "Also emit clutter-fraction/rank heatmaps");
  clutterbox_cmd->add_option("--heatmap-samples", clutterbox->heatmap_samples,
                             "Monte-Carlo samples per clutter fraction");
  clutterbox_cmd->add_flag("--identity-placement", clutterbox->identity_placement,
                           "Skip random placement (sanity checks)");
  add_common_options(clutterbox_cmd, clutterbox->common);
  clutterbox_cmd->callback(
      [clutterbox_cmd, clutterbox] { run_clutterbox_cmd(clutterbox_cmd, *clutterbox); });

  auto study = std::make_shared<DistanceStudyCliOptions>();
  CLI::App* study_cmd = experiment->add_subcommand(
      "distance-study", "Distance distributions under growing surface perturbation");
  study_cmd->add_option("--dataset", study->dataset_dir, "Directory of mesh files")
      ->required()
      ->check(CLI::ExistingDirectory);
  study_cmd->add_option("--output", study->output_dir, "Output directory")->required();
  study_cmd->add_option("--pairs", study->pairs, "Nominal object pairs");
  study_cmd->add_option("--objects", study->objects, "Objects for the perturbation series");
  study_cmd->add_option("--sphere-steps", study->sphere_steps, "Perturbation steps");
  study_cmd->add_option("--spheres-per-step", study->spheres_per_step, "Spheres added per step");
  study_cmd->add_option("--sphere-radius", study->sphere_radius, "Perturbation sphere radius");
  study_cmd->add_option("--sphere-subdivisions", study->sphere_subdivisions,
                        "Icosphere subdivision level");
  study_cmd->add_option("--width", study->width, "Descriptor width in bits");
  study_cmd->add_option("--height", study->height, "Descriptor height in bits");
  study_cmd->add_option("--support-radius", study->support_radius, "Support radius");
  add_common_options(study_cmd, study->common);
  study_cmd->callback([study_cmd, study] { run_distance_study_cmd(study_cmd, *study); });

  auto compare = std::make_shared<BenchCompareOptions>();
  CLI::App* compare_cmd =
      experiment->add_subcommand("bench-compare", "Distance-function comparison throughput");
  compare_cmd->add_option("--images", compare->images_qdf, "Descriptor set to compare (.qdf)")
      ->check(CLI::ExistingFile);
  compare_cmd->add_option("--synthetic-count", compare->synthetic_count,
                          "Synthetic image count when no .qdf is given");
  compare_cmd->add_option("--width", compare->width, "Synthetic image width");
  compare_cmd->add_option("--height", compare->height, "Synthetic image height");
  compare_cmd->add_option("--density", compare->density, "Synthetic set-bit density");
  compare_cmd->add_option("--duration", compare->duration, "Seconds per distance function");
  compare_cmd->add_option("--output", compare->output_dir, "Output directory")->required();
  add_common_options(compare_cmd, compare->common);
  compare_cmd->callback([compare_cmd, compare] { run_bench_compare(compare_cmd, *compare); });

  auto generate = std::make_shared<BenchGenerateOptions>();
  CLI::App* generate_cmd =
      experiment->add_subcommand("bench-generate", "Descriptor generation throughput");
  generate_cmd->add_option("--triangle-counts", generate->triangle_counts,
                           "Target scene sizes in triangles");
  generate_cmd->add_option("--descriptors", generate->descriptors, "Descriptors per scene");
  generate_cmd->add_option("--width", generate->width, "Descriptor width in bits");
  generate_cmd->add_option("--height", generate->height, "Descriptor height in bits");
  generate_cmd->add_option("--support-radius", generate->support_radius, "Support radius");
  generate_cmd->add_option("--output", generate->output_dir, "Output directory")->required();
  add_common_options(generate_cmd, generate->common);
  generate_cmd->callback(
      [generate_cmd, generate] { run_bench_generate(generate_cmd, *generate); });

  auto runindex = std::make_shared<RunIndexStudyOptions>();
  CLI::App* runindex_cmd = experiment->add_subcommand(
      "runindex-study", "Candidate-set cost of the column-run inverted index");
  runindex_cmd->add_option("--images", runindex->images_qdf, "Descriptor set to index (.qdf)")
      ->check(CLI::ExistingFile);
  runindex_cmd->add_option("--synthetic-count", runindex->synthetic_count,
                           "Synthetic image count when no .qdf is given");
  runindex_cmd->add_option("--width", runindex->width, "Synthetic image width");
  runindex_cmd->add_option("--height", runindex->height, "Synthetic image height");
  runindex_cmd->add_option("--density", runindex->density, "Synthetic set-bit density");
  runindex_cmd->add_option("--sparse-needles", runindex->sparse_needles, "Sparse needle count");
  runindex_cmd->add_option("--sparse-bits", runindex->sparse_bits, "Set bits per sparse needle");
  runindex_cmd->add_option("--dense-needles", runindex->dense_needles, "Dense needle count");
  runindex_cmd->add_option("--dense-bits", runindex->dense_bits, "Set bits per dense needle");
  runindex_cmd->add_option("--k", runindex->k, "Results per query");
  runindex_cmd->add_option("--output", runindex->output_dir, "Output directory")->required();
  add_common_options(runindex_cmd, runindex->common);
  runindex_cmd->callback(
      [runindex_cmd, runindex] { run_runindex_study(runindex_cmd, *runindex); });
}

}  // namespace quicci::cli
