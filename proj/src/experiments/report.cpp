#include "quicci/experiments/report.hpp"

#include <fstream>

#include "json.hpp"
#include "quicci/error.hpp"

namespace quicci::experiments {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("report: cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_rank_histograms_csv(const std::filesystem::path& path,
                               std::span<const uint32_t> object_counts,
                               std::span<const RankHistogram> histograms) {
  auto out = open_csv(path);
  out << "object_count,rank,count\n";
  for (size_t i = 0; i < histograms.size(); ++i)
    for (const auto& [rank, count] : histograms[i].counts.bins)
      out << object_counts[i] << ',' << rank << ',' << count << '\n';
}

void write_heatmaps_csv(const std::filesystem::path& path,
                        std::span<const uint32_t> object_counts,
                        std::span<const ClutterHeatmap> heatmaps) {
  auto out = open_csv(path);
  out << "object_count,fraction_bin,rank_bin,count\n";
  for (size_t i = 0; i < heatmaps.size(); ++i) {
    const ClutterHeatmap& map = heatmaps[i];
    for (uint32_t f = 0; f < map.fraction_bins; ++f)
      for (uint32_t r = 0; r < map.rank_cap; ++r) {
        const uint64_t count = map.counts[static_cast<size_t>(f) * map.rank_cap + r];
        if (count != 0) out << object_counts[i] << ',' << f << ',' << r << ',' << count << '\n';
      }
  }
}

void write_distance_study_csv(const std::filesystem::path& nominal_path,
                              const std::filesystem::path& series_path,
                              const DistanceStudyResult& result) {
  {
    auto out = open_csv(nominal_path);
    out << "function,bin,count\n";
    for (const auto& [bin, count] : result.nominal_hamming.bins)
      out << "hamming," << bin << ',' << count << '\n';
    for (const auto& [bin, count] : result.nominal_clutter.bins)
      out << "clutter_resistant," << bin << ',' << count << '\n';
    for (size_t b = 0; b < result.nominal_weighted.bins.size(); ++b)
      if (result.nominal_weighted.bins[b] != 0)
        out << "weighted_hamming," << static_cast<double>(b) * result.nominal_weighted.bin_width
            << ',' << result.nominal_weighted.bins[b] << '\n';
  }
  {
    auto out = open_csv(series_path);
    out << "function,sphere_count,bin,count\n";
    for (size_t m = 0; m < result.sphere_counts.size(); ++m) {
      const uint32_t spheres = result.sphere_counts[m];
      for (const auto& [bin, count] : result.series_hamming[m].bins)
        out << "hamming," << spheres << ',' << bin << ',' << count << '\n';
      for (const auto& [bin, count] : result.series_clutter[m].bins)
        out << "clutter_resistant," << spheres << ',' << bin << ',' << count << '\n';
      const RealHistogram& weighted = result.series_weighted[m];
      for (size_t b = 0; b < weighted.bins.size(); ++b)
        if (weighted.bins[b] != 0)
          out << "weighted_hamming," << spheres << ','
              << static_cast<double>(b) * weighted.bin_width << ',' << weighted.bins[b] << '\n';
    }
  }
}

void write_comparison_rates_csv(const std::filesystem::path& path,
                                std::span<const ComparisonRate> rates) {
  auto out = open_csv(path);
  out << "function,pairs,seconds,pairs_per_second\n";
  for (const ComparisonRate& rate : rates)
    out << distance_kind_name(rate.kind) << ',' << rate.pairs << ',' << rate.seconds << ','
        << rate.pairs_per_second << '\n';
}

void write_generation_rates_csv(const std::filesystem::path& path,
                                std::span<const GenerationRatePoint> points) {
  auto out = open_csv(path);
  out << "triangle_count,descriptor_count,seconds,descriptors_per_second\n";
  for (const GenerationRatePoint& point : points)
    out << point.triangle_count << ',' << point.descriptor_count << ',' << point.seconds << ','
        << point.descriptors_per_second << '\n';
}

void write_manifest(const std::filesystem::path& path,
                    const std::map<std::string, std::string>& entries) {
  nlohmann::json doc(entries);
  std::ofstream out(path);
  if (!out) throw Error("report: cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
}

}  // namespace quicci::experiments
