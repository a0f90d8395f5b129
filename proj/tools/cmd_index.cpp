#include <cstdio>
#include <fstream>
#include <iostream>

#include "cli_common.hpp"
#include "quicci/descriptor_io.hpp"
#include "quicci/error.hpp"
#include "quicci/hamming_tree.hpp"

namespace quicci::cli {

namespace {

Codec parse_codec(const std::string& name) {
  if (name == "deflate") return Codec::deflate;
  if (name == "none") return Codec::none;
  throw Error("unknown codec '" + name + "' (expected deflate or none)");
}

struct BuildOptions {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output;
  uint32_t chunk_bits = 128;
  uint32_t split_threshold = 256;
  std::string codec = "deflate";
  CommonOptions common;
};

void run_build(CLI::App* cmd, BuildOptions& options) {
  announce_run(cmd, options.common);
  std::optional<HammingTree> tree;
  uint64_t inserted = 0;
  for (size_t file = 0; file < options.inputs.size(); ++file) {
    const DescriptorSet set = read_descriptor_set(options.inputs[file]);
    if (!tree) {
      TreeConfig config;
      config.string_bits = set.width * set.height;
      config.chunk_bits = options.chunk_bits;
      config.leaf_split_threshold = options.split_threshold;
      config.codec = parse_codec(options.codec);
      tree.emplace(config);
    }
    for (size_t i = 0; i < set.images.size(); ++i) {
      const Provenance provenance = set.has_provenance()
                                        ? set.provenance[i]
                                        : Provenance{static_cast<uint32_t>(file),
                                                     static_cast<uint32_t>(i)};
      tree->insert(set.images[i], provenance);
      ++inserted;
    }
    std::fprintf(stderr, "indexed %zu images from %s\n", set.images.size(),
                 options.inputs[file].c_str());
  }
  if (!tree) throw Error("index build: no input descriptor sets");
  tree->save(options.output);
  std::fprintf(stderr, "saved index with %llu entries to %s\n",
               static_cast<unsigned long long>(inserted), options.output.c_str());
}

struct QueryOptions {
  std::filesystem::path index_dir;
  std::filesystem::path needles;
  uint32_t k = 32;
  int64_t max_distance = -1;
  std::filesystem::path output;  // empty: stdout
  CommonOptions common;
};

void run_query(CLI::App* cmd, QueryOptions& options) {
  announce_run(cmd, options.common);
  const HammingTree tree = HammingTree::load(options.index_dir);
  const DescriptorSet needles = read_descriptor_set(options.needles);

  std::ofstream file;
  if (!options.output.empty()) {
    file.open(options.output);
    if (!file) throw Error("index query: cannot open " + options.output.string());
  }
  std::ostream& out = options.output.empty() ? std::cout : file;

  std::optional<uint32_t> limit;
  if (options.max_distance >= 0) limit = static_cast<uint32_t>(options.max_distance);

  out << "rank,distance,object_id,vertex_index\n";
  for (size_t n = 0; n < needles.images.size(); ++n) {
    out << "# needle " << n << '\n';
    const auto results = tree.query(needles.images[n], options.k, limit);
    for (size_t rank = 0; rank < results.size(); ++rank)
      out << rank << ',' << results[rank].distance << ',' << results[rank].provenance.object_id
          << ',' << results[rank].provenance.vertex_index << '\n';
  }
  if (!out) throw Error("index query: write failed");
}

struct StatsOptions {
  std::filesystem::path index_dir;
  CommonOptions common;
};

void run_stats(CLI::App* cmd, StatsOptions& options) {
  announce_run(cmd, options.common);
  const HammingTree tree = HammingTree::load(options.index_dir);
  const TreeStats stats = tree.stats();
  std::printf("entry_count=%llu\n", static_cast<unsigned long long>(stats.entry_count));
  std::printf("node_count=%llu\n", static_cast<unsigned long long>(stats.node_count));
  std::printf("leaf_count=%llu\n", static_cast<unsigned long long>(stats.leaf_count));
  std::printf("mean_set_bits=%.3f\n", stats.mean_set_bits);
  std::printf("string_bits=%u chunk_bits=%u split_threshold=%u\n", tree.config().string_bits,
              tree.config().chunk_bits, tree.config().leaf_split_threshold);
  for (const auto& [depth, count] : stats.leaf_depth_histogram)
    std::printf("leaves_at_depth_%u=%llu\n", depth, static_cast<unsigned long long>(count));
}

}  // namespace

void register_index(CLI::App& app) {
  CLI::App* index = app.add_subcommand("index", "Build and query Hamming tree indexes");
  index->require_subcommand(1);

  auto build = std::make_shared<BuildOptions>();
  CLI::App* build_cmd = index->add_subcommand("build", "Build an index from descriptor sets");
  build_cmd->add_option("--input", build->inputs, "Input .qdf files")
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--output", build->output, "Index directory")->required();
  build_cmd->add_option("--chunk-bits", build->chunk_bits, "Bits removed per tree level");
  build_cmd->add_option("--split-threshold", build->split_threshold,
                        "Leaf size that triggers a split");
  build_cmd->add_option("--codec", build->codec, "Leaf payload codec: deflate or none");
  add_common_options(build_cmd, build->common);
  build_cmd->callback([build_cmd, build] { run_build(build_cmd, *build); });

  auto query = std::make_shared<QueryOptions>();
  CLI::App* query_cmd = index->add_subcommand("query", "k-NN queries against an index");
  query_cmd->add_option("--index", query->index_dir, "Index directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  query_cmd->add_option("--needles", query->needles, "Needle descriptor set (.qdf)")
      ->required()
      ->check(CLI::ExistingFile);
  query_cmd->add_option("--k", query->k, "Number of neighbours");
  query_cmd->add_option("--max-distance", query->max_distance,
                        "Optional Hamming distance limit (-1: none)");
  query_cmd->add_option("--output", query->output, "Result CSV (default: stdout)");
  add_common_options(query_cmd, query->common);
  query_cmd->callback([query_cmd, query] { run_query(query_cmd, *query); });

  auto stats = std::make_shared<StatsOptions>();
  CLI::App* stats_cmd = index->add_subcommand("stats", "Print index statistics");
  stats_cmd->add_option("--index", stats->index_dir, "Index directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_common_options(stats_cmd, stats->common);
  stats_cmd->callback([stats_cmd, stats] { run_stats(stats_cmd, *stats); });
}

}  // namespace quicci::cli
