#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "quicci/experiments/benchmarks.hpp"
#include "quicci/experiments/clutterbox.hpp"
#include "quicci/experiments/distance_study.hpp"

namespace quicci::experiments {

/// CSV emitters for the experiment outputs. All files are plain
/// comma-separated with a single header row.

void write_rank_histograms_csv(const std::filesystem::path& path,
                               std::span<const uint32_t> object_counts,
                               std::span<const RankHistogram> histograms);

void write_heatmaps_csv(const std::filesystem::path& path,
                        std::span<const uint32_t> object_counts,
                        std::span<const ClutterHeatmap> heatmaps);

void write_distance_study_csv(const std::filesystem::path& nominal_path,
                              const std::filesystem::path& series_path,
                              const DistanceStudyResult& result);

void write_comparison_rates_csv(const std::filesystem::path& path,
                                std::span<const ComparisonRate> rates);

void write_generation_rates_csv(const std::filesystem::path& path,
                                std::span<const GenerationRatePoint> points);

/// Run-metadata file (config echo, seed, version) written as JSON once all
/// other outputs are complete; its presence marks the run directory valid.
void write_manifest(const std::filesystem::path& path,
                    const std::map<std::string, std::string>& entries);

}  // namespace quicci::experiments
