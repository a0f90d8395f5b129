#include "quicci/run_index.hpp"

#include <algorithm>

#include "quicci/distances.hpp"
#include "quicci/error.hpp"

namespace quicci {

std::vector<ColumnRun> extract_runs(const QuicciImage& image) {
  std::vector<ColumnRun> runs;
  for (uint32_t c = 0; c < image.width(); ++c) {
    uint32_t r = 0;
    while (r < image.height()) {
      if (!image.bit(r, c)) {
        ++r;
        continue;
      }
      const uint32_t start = r;
      while (r < image.height() && image.bit(r, c)) ++r;
      runs.push_back({static_cast<uint16_t>(c), static_cast<uint16_t>(start),
                      static_cast<uint16_t>(r - start)});
    }
  }
  return runs;
}

QuicciImage render_runs(uint32_t width, uint32_t height, std::span<const ColumnRun> runs) {
  QuicciImage image(width, height);
  for (const ColumnRun& run : runs)
    for (uint32_t r = run.start_row; r < static_cast<uint32_t>(run.start_row + run.length); ++r)
      image.set_bit(r, run.column, true);
  return image;
}

RunInvertedIndex::RunInvertedIndex(uint32_t width, uint32_t height)
    : width_(width), height_(height) {
  if (width == 0 || height == 0) throw Error("RunInvertedIndex: zero dimension");
}

void RunInvertedIndex::insert(const QuicciImage& image, Provenance provenance) {
  if (image.width() != width_ || image.height() != height_)
    throw Error("RunInvertedIndex: image dimension mismatch");
  const uint32_t index = static_cast<uint32_t>(images_.size());
  const uint32_t total = static_cast<uint32_t>(image.popcount());
  for (const ColumnRun& run : extract_runs(image))
    lists_[run].push_back({index, total});
  images_.push_back(image);
  provenance_.push_back(provenance);
}

size_t RunInvertedIndex::list_entry_count() const {
  size_t total = 0;
  for (const auto& [run, list] : lists_) total += list.size();
  return total;
}

RunInvertedIndex::QueryResult RunInvertedIndex::query(const QuicciImage& needle,
                                                      uint32_t k) const {
  if (k == 0) throw Error("RunInvertedIndex::query: k must be >= 1");
  if (needle.width() != width_ || needle.height() != height_)
    throw Error("RunInvertedIndex::query: needle dimension mismatch");

  QueryResult out;
  std::vector<uint8_t> seen(images_.size(), 0);
  std::vector<uint32_t> candidates;

  // Probe every list whose run shares a column with a needle run and whose
  // row interval intersects it; interval overlap of set-bit runs in the same
  // column is exactly "shares at least one set bit".
  for (const ColumnRun& needle_run : extract_runs(needle)) {
    const uint32_t needle_end = needle_run.start_row + needle_run.length;
    for (uint32_t start = 0; start < needle_end; ++start) {
      const uint32_t min_len = needle_run.start_row > start ? needle_run.start_row - start + 1 : 1;
      const uint32_t max_len = height_ - start;
      for (uint32_t len = min_len; len <= max_len; ++len) {
        const ColumnRun key{needle_run.column, static_cast<uint16_t>(start),
                            static_cast<uint16_t>(len)};
        const auto it = lists_.find(key);
        if (it == lists_.end()) continue;
        for (const ListEntry& entry : it->second) {
          if (seen[entry.image_index]) continue;
          seen[entry.image_index] = 1;
          candidates.push_back(entry.image_index);
        }
      }
    }
  }
  out.candidate_count = candidates.size();

  // Exact distances from the raw image store; insertion order breaks ties.
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::pair<double, uint32_t>> scored;
  scored.reserve(candidates.size());
  for (uint32_t index : candidates)
    scored.emplace_back(weighted_hamming_distance(needle, images_[index]), index);
  const size_t take = std::min<size_t>(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end());
  out.results.reserve(take);
  for (size_t i = 0; i < take; ++i)
    out.results.push_back({scored[i].second, provenance_[scored[i].second], scored[i].first});
  return out;
}

}  // namespace quicci
