#include <cstdio>

#include "cli_common.hpp"
#include "quicci/descriptor.hpp"
#include "quicci/descriptor_io.hpp"
#include "quicci/mesh_io.hpp"

namespace quicci::cli {

namespace {

struct GenerateOptions {
  std::vector<std::filesystem::path> meshes;
  std::filesystem::path output;
  uint32_t width = 64;
  uint32_t height = 64;
  double support_radius = 0.3;
  bool fit = true;
  CommonOptions common;
};

void run_generate(CLI::App* cmd, GenerateOptions& options) {
  announce_run(cmd, options.common);
  const DescriptorConfig config =
      DescriptorConfig::for_image(options.width, options.height, options.support_radius);

  DescriptorSet set;
  set.width = options.width;
  set.height = options.height;
  for (size_t object = 0; object < options.meshes.size(); ++object) {
    Mesh mesh = load_mesh(options.meshes[object]);
    if (options.fit) mesh = fit_unit_sphere(mesh);
    const auto points = unique_oriented_points(mesh);
    const auto images = compute_quicci_set(mesh, points, config, options.common.threads);
    for (size_t i = 0; i < images.size(); ++i) {
      set.images.push_back(images[i]);
      set.provenance.push_back(
          {static_cast<uint32_t>(object), static_cast<uint32_t>(i)});
    }
    std::fprintf(stderr, "object %zu/%zu: %zu descriptors (%s)\n", object + 1,
                 options.meshes.size(), images.size(), options.meshes[object].c_str());
  }

  OutputTracker outputs;
  outputs.track(options.output);
  try {
    write_descriptor_set(set, options.output);
  } catch (...) {
    outputs.discard_all();
    throw;
  }
  std::fprintf(stderr, "wrote %zu descriptors to %s\n", set.images.size(),
               options.output.c_str());
}

}  // namespace

void register_generate(CLI::App& app) {
  auto options = std::make_shared<GenerateOptions>();
  CLI::App* cmd = app.add_subcommand(
      "generate", "Compute descriptors for every unique oriented mesh vertex");
  cmd->add_option("--mesh", options->meshes, "Input mesh files (OBJ or PLY)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", options->output, "Output descriptor set (.qdf)")->required();
  cmd->add_option("--width", options->width, "Descriptor image width in bits");
  cmd->add_option("--height", options->height, "Descriptor image height in bits");
  cmd->add_option("--support-radius", options->support_radius, "Support radius");
  cmd->add_flag("--fit,!--no-fit", options->fit, "Fit each mesh into the unit sphere first");
  add_common_options(cmd, options->common);
  cmd->callback([cmd, options] { run_generate(cmd, *options); });
}

}  // namespace quicci::cli
