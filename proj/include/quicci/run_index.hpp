#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "quicci/bitimage.hpp"
#include "quicci/descriptor_io.hpp"

namespace quicci {

/// Maximal vertical run of set bits within one image column. Runs in a
/// column are non-overlapping and separated by at least one unset bit.
struct ColumnRun {
  uint16_t column = 0;
  uint16_t start_row = 0;
  uint16_t length = 0;
  auto operator<=>(const ColumnRun&) const = default;
};

/// All runs of the image, ordered by (column, start_row).
std::vector<ColumnRun> extract_runs(const QuicciImage& image);

/// Rebuild an image from its runs (inverse of extract_runs).
QuicciImage render_runs(uint32_t width, uint32_t height, std::span<const ColumnRun> runs);

struct RunSearchResult {
  uint32_t image_index = 0;
  Provenance provenance;
  double distance = 0.0;
};

/// Inverted index keyed by exact column runs, for Weighted Hamming
/// retrieval. Querying gathers every stored image whose runs overlap the
/// needle's runs by at least one bit (that is, every image sharing at least
/// one set bit with the needle) and ranks the candidates by their exact
/// Weighted Hamming distance. The candidate set is reported alongside the
/// results because its size is the interesting property of this structure:
/// for dense needles it approaches the whole corpus.
class RunInvertedIndex {
 public:
  RunInvertedIndex(uint32_t width, uint32_t height);

  void insert(const QuicciImage& image, Provenance provenance);

  struct QueryResult {
    std::vector<RunSearchResult> results;
    uint64_t candidate_count = 0;
  };
  QueryResult query(const QuicciImage& needle, uint32_t k) const;

  size_t image_count() const { return images_.size(); }
  size_t list_count() const { return lists_.size(); }
  size_t list_entry_count() const;
  const QuicciImage& image(size_t index) const { return images_[index]; }

 private:
  struct RunKeyHash {
    size_t operator()(const ColumnRun& run) const {
      return (static_cast<size_t>(run.column) << 32) ^ (static_cast<size_t>(run.start_row) << 16) ^
             run.length;
    }
  };
  struct ListEntry {
    uint32_t image_index;
    uint32_t total_set_bits;
  };

  uint32_t width_, height_;
  std::vector<QuicciImage> images_;
  std::vector<Provenance> provenance_;
  std::unordered_map<ColumnRun, std::vector<ListEntry>, RunKeyHash> lists_;
};

}  // namespace quicci
