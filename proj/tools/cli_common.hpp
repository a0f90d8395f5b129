#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quicci/intersection.hpp"

namespace quicci::cli {

struct CommonOptions {
  uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
};

inline void add_common_options(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--seed", options.seed, "Master seed (random when omitted; always printed)")
      ->each([&options](const std::string&) { options.seed_given = true; });
  cmd->add_option("--threads", options.threads,
                  "Worker thread cap (default: QUICCI_THREADS env or hardware)");
}

/// Resolve the master seed and echo the subcommand's full configuration to
/// stderr so any run can be reproduced by copy-paste.
inline uint64_t announce_run(CLI::App* cmd, CommonOptions& options) {
  if (!options.seed_given) {
    std::random_device device;
    options.seed = (static_cast<uint64_t>(device()) << 32) ^ device();
  }
  std::string config = cmd->config_to_str(true, false);
  std::fprintf(stderr, "[%s] resolved configuration:\n", cmd->get_name().c_str());
  std::fprintf(stderr, "%s", config.c_str());
  std::fprintf(stderr, "seed=%llu\n", static_cast<unsigned long long>(options.seed));
  return options.seed;
}

/// Files registered here are deleted if the command fails, so a run
/// directory never keeps partial outputs. The manifest is written last and
/// marks a directory complete.
class OutputTracker {
 public:
  std::filesystem::path track(const std::filesystem::path& path) {
    files_.push_back(path);
    return path;
  }
  void discard_all() {
    std::error_code ec;
    for (const auto& path : files_) std::filesystem::remove(path, ec);
  }

 private:
  std::vector<std::filesystem::path> files_;
};

inline std::vector<std::filesystem::path> collect_mesh_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string ext = entry.path().extension().string();
    if (ext == ".obj" || ext == ".ply" || ext == ".OBJ" || ext == ".PLY")
      paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

void register_generate(CLI::App& app);
void register_index(CLI::App& app);
void register_experiment(CLI::App& app);

}  // namespace quicci::cli
