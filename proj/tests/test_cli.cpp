#include <cstdlib>
#include <set>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "quicci/descriptor_io.hpp"
#include "quicci/mesh_io.hpp"
#include "quicci/mesh_synth.hpp"

using namespace quicci;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return QUICCI_CLI_PATH; }

struct CommandResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
  static int invocation = 0;
  const fs::path log = fs::temp_directory_path() / "quicci_cli_tests" /
                       ("log_" + std::to_string(invocation++) + ".txt");
  fs::create_directories(log.parent_path());
  const std::string command = std::string(cli_path()) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  std::ifstream in(log);
  std::string output((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {WEXITSTATUS(status), output};
}

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "quicci_cli_tests" / "work";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path dataset_dir() {
  static const fs::path dir = [] {
    const fs::path d = work_dir() / "dataset";
    fs::create_directories(d);
    for (int i = 0; i < 6; ++i)
      save_obj(make_blob(500 + i, 1), d / ("blob_" + std::to_string(i) + ".obj"));
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("generate writes one record per unique oriented point") {
  const fs::path mesh = work_dir() / "cube.obj";
  save_obj(make_cube(1.0), mesh);
  const fs::path out = work_dir() / "cube.qdf";

  const auto result = run_cli("generate --mesh " + mesh.string() + " --output " + out.string() +
                              " --width 63 --height 64");
  CHECK(result.exit_code == 0);
  const DescriptorSet set = read_descriptor_set(out);
  CHECK(set.width == 63);
  CHECK(set.height == 64);
  CHECK(set.images.size() == 24);  // cube stores 4 oriented points per face
  REQUIRE(set.has_provenance());
  CHECK(set.provenance[0] == Provenance{0, 0});
  CHECK(set.provenance[23] == Provenance{0, 23});
}

TEST_CASE("generate fails cleanly on a missing mesh") {
  const auto result =
      run_cli("generate --mesh /nonexistent/missing.obj --output " +
              (work_dir() / "nothing.qdf").string());
  CHECK(result.exit_code != 0);
  CHECK(!fs::exists(work_dir() / "nothing.qdf"));
}

TEST_CASE("a random seed is chosen and printed when omitted") {
  const fs::path mesh = work_dir() / "seed_blob.obj";
  save_obj(make_blob(3, 1), mesh);
  const auto result = run_cli("generate --mesh " + mesh.string() + " --output " +
                              (work_dir() / "seed_blob.qdf").string() + " --width 31 --height 32");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("seed=") != std::string::npos);
}

TEST_CASE("index build, stats, and query round trip through the CLI") {
  const fs::path mesh = work_dir() / "indexed_blob.obj";
  save_obj(make_blob(9, 1), mesh);
  const fs::path qdf = work_dir() / "indexed_blob.qdf";
  REQUIRE(run_cli("generate --mesh " + mesh.string() + " --output " + qdf.string() +
                  " --width 64 --height 64")
              .exit_code == 0);

  const fs::path index_dir = work_dir() / "index";
  REQUIRE(run_cli("index build --input " + qdf.string() + " --output " + index_dir.string() +
                  " --chunk-bits 128 --split-threshold 16")
              .exit_code == 0);
  CHECK(fs::exists(index_dir / "tree.meta"));

  const auto stats = run_cli("index stats --index " + index_dir.string());
  CHECK(stats.exit_code == 0);
  CHECK(stats.output.find("entry_count=42") != std::string::npos);

  const fs::path csv = work_dir() / "hits.csv";
  const auto query = run_cli("index query --index " + index_dir.string() + " --needles " +
                             qdf.string() + " --k 3 --output " + csv.string());
  CHECK(query.exit_code == 0);
  std::ifstream in(csv);
  std::string header, comment, first_hit;
  std::getline(in, header);
  std::getline(in, comment);
  std::getline(in, first_hit);
  CHECK(header == "rank,distance,object_id,vertex_index");
  CHECK(comment == "# needle 0");
  CHECK(first_hit == "0,0,0,0");  // every needle is stored: exact hit first

  // A distance limit of zero keeps only exact duplicates.
  const fs::path limited = work_dir() / "hits_limited.csv";
  REQUIRE(run_cli("index query --index " + index_dir.string() + " --needles " + qdf.string() +
                  " --k 5 --max-distance 0 --output " + limited.string())
              .exit_code == 0);
  std::ifstream lim(limited);
  std::string line;
  size_t data_rows = 0;
  std::getline(lim, line);  // header
  while (std::getline(lim, line))
    if (!line.empty() && line[0] != '#') {
      ++data_rows;
      CHECK(line.substr(line.find(',') + 1, 1) == "0");
    }
  CHECK(data_rows == 42);  // one exact duplicate per needle
}

TEST_CASE("clutterbox runs are reproducible and leave a manifest") {
  const std::string base = " experiment clutterbox --dataset " + dataset_dir().string() +
                           " --runs 2 --object-counts 1 2 --width 31 --height 32 --seed 42";
  const fs::path out_a = work_dir() / "clutterbox_a";
  const fs::path out_b = work_dir() / "clutterbox_b";
  REQUIRE(run_cli(base + " --output " + out_a.string()).exit_code == 0);
  REQUIRE(run_cli(base + " --output " + out_b.string()).exit_code == 0);

  CHECK(read_file(out_a / "rank_histograms.csv") == read_file(out_b / "rank_histograms.csv"));
  CHECK(read_file(out_a / "manifest.json").find("\"seed\": \"42\"") != std::string::npos);
}

TEST_CASE("clutterbox rejects a missing dataset directory") {
  const auto result = run_cli("experiment clutterbox --dataset /nonexistent/meshes --output " +
                              (work_dir() / "never").string());
  CHECK(result.exit_code != 0);
  CHECK(!fs::exists(work_dir() / "never" / "manifest.json"));
}

TEST_CASE("distance-study emits histograms for every function and sphere count") {
  const fs::path out = work_dir() / "study";
  const auto result = run_cli(
      "experiment distance-study --dataset " + dataset_dir().string() + " --output " +
      out.string() +
      " --pairs 1 --objects 1 --sphere-steps 2 --spheres-per-step 5 --sphere-subdivisions 1"
      " --width 31 --height 32 --seed 7");
  REQUIRE(result.exit_code == 0);

  std::ifstream in(out / "distance_series.csv");
  std::string line;
  std::getline(in, line);  // header
  std::set<std::string> keys;
  while (std::getline(in, line)) {
    const size_t first = line.find(',');
    const size_t second = line.find(',', first + 1);
    keys.insert(line.substr(0, second));
  }
  // 3 functions x (steps + 1) sphere counts.
  CHECK(keys.size() == 9);
  CHECK(fs::exists(out / "distance_nominal.csv"));
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("bench commands write their rate tables") {
  const fs::path compare_out = work_dir() / "bench_compare";
  REQUIRE(run_cli("experiment bench-compare --synthetic-count 128 --duration 0.05 --seed 1 "
                  "--output " +
                  compare_out.string())
              .exit_code == 0);
  const std::string compare_csv = read_file(compare_out / "comparison_rates.csv");
  CHECK(compare_csv.find("hamming") != std::string::npos);
  CHECK(compare_csv.find("weighted_hamming") != std::string::npos);

  const fs::path generate_out = work_dir() / "bench_generate";
  REQUIRE(run_cli("experiment bench-generate --triangle-counts 400 800 --descriptors 2 "
                  "--width 31 --height 32 --seed 2 --output " +
                  generate_out.string())
              .exit_code == 0);
  std::istringstream rows(read_file(generate_out / "generation_rates.csv"));
  std::string line;
  size_t data_rows = 0;
  std::getline(rows, line);
  while (std::getline(rows, line))
    if (!line.empty()) ++data_rows;
  CHECK(data_rows == 2);
}

TEST_CASE("runindex-study reports candidate fractions") {
  const fs::path out = work_dir() / "runindex";
  const auto result = run_cli(
      "experiment runindex-study --synthetic-count 300 --width 32 --height 32 --density 0.2"
      " --sparse-needles 5 --sparse-bits 16 --dense-needles 5 --dense-bits 200 --k 8 --seed 3"
      " --output " +
      out.string());
  REQUIRE(result.exit_code == 0);
  const std::string summary = read_file(out / "runindex_summary.csv");
  CHECK(summary.find("sparse") != std::string::npos);
  CHECK(summary.find("dense") != std::string::npos);
  CHECK(fs::exists(out / "runindex_results.csv"));
}
