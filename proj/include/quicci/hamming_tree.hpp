#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "quicci/bitimage.hpp"
#include "quicci/descriptor_io.hpp"

namespace quicci {

/// Lossless codec for leaf payloads on disk.
enum class Codec : uint32_t { none = 0, deflate = 1 };

struct TreeConfig {
  uint32_t string_bits = 4096;       // T; all indexed strings have this length
  uint32_t chunk_bits = 128;         // bits cut from the front per tree level
  uint32_t leaf_split_threshold = 256;
  Codec codec = Codec::deflate;

  /// Number of chunk levels; suffix-count profiles have levels()+1 entries.
  uint32_t levels() const { return (string_bits + chunk_bits - 1) / chunk_bits; }
  void validate() const;
};

struct TreeSearchResult {
  QuicciImage image;
  Provenance provenance;
  uint32_t distance = 0;
};

struct QueryStats {
  uint64_t internal_nodes_visited = 0;
  uint64_t leaves_scanned = 0;
  uint64_t leaf_entries_scanned = 0;
  uint64_t queue_pushes = 0;
  /// When set before the query, the branch-key path of every scanned leaf
  /// is recorded (test instrumentation for pruning-admissibility checks).
  bool collect_paths = false;
  std::vector<std::vector<uint16_t>> scanned_leaf_paths;
};

struct TreeStats {
  uint64_t entry_count = 0;
  uint64_t node_count = 0;  // internal nodes + leaves
  uint64_t leaf_count = 0;
  std::map<uint32_t, uint64_t> leaf_depth_histogram;
  double mean_set_bits = 0.0;

  bool operator==(const TreeStats&) const = default;
};

/// Minimum possible Hamming distance between a needle with the given
/// suffix-count profile and any bit string whose profile starts with
/// `path_counts`: per-chunk set-count gaps for the fixed chunks plus the
/// count gap of the undetermined suffix. Set-count difference lower-bounds
/// Hamming distance on each disjoint bit region, so the sum is a valid
/// lower bound for the whole string.
uint32_t subtree_min_distance(const BitCountProfile& needle_profile,
                              std::span<const uint16_t> path_counts);

/// Dynamic k-NN index over fixed-length bit strings ranked by Hamming
/// distance. Internal nodes branch on the set-bit count of the string after
/// removing a growing number of fixed-size chunks from the front; leaves
/// hold entry lists and split once they exceed the configured threshold.
///
/// Concurrency: single writer, multiple readers. `insert` requires
/// exclusive access; `query` is const and safe to run concurrently with
/// other queries.
class HammingTree {
 public:
  struct Entry {
    QuicciImage image;
    Provenance provenance;
  };

  explicit HammingTree(TreeConfig config);

  const TreeConfig& config() const { return config_; }
  uint64_t size() const { return entry_count_; }

  /// Store the image (multiset semantics; duplicates are kept).
  void insert(const QuicciImage& image, Provenance provenance);

  /// The k stored images nearest to the needle by Hamming distance, ties
  /// broken by provenance order, restricted to distance <= distance_limit
  /// when given. Best-first search over subtree lower bounds; results are
  /// exact.
  std::vector<TreeSearchResult> query(const QuicciImage& needle, uint32_t k,
                                      std::optional<uint32_t> distance_limit = {},
                                      QueryStats* stats = nullptr) const;

  TreeStats stats() const;

  /// Visit every leaf with its branch-key path, in depth-first key order.
  void visit_leaves(
      const std::function<void(std::span<const uint16_t> path, std::span<const Entry>)>& fn) const;

  /// Persist as a directory: `tree.meta` (config + node structure) plus one
  /// compressed payload file per leaf, named from its branch-key path.
  void save(const std::filesystem::path& directory) const;
  static HammingTree load(const std::filesystem::path& directory);

 private:
  struct Internal;
  using Leaf = std::vector<Entry>;
  using Child = std::variant<Leaf, std::unique_ptr<Internal>>;
  struct Internal {
    std::map<uint16_t, Child> children;
  };

  uint16_t branch_key(const QuicciImage& image, uint32_t level) const;
  void split_leaf(Child& slot, uint32_t leaf_depth);
  void check_image(const QuicciImage& image) const;

  TreeConfig config_;
  Internal root_;
  uint64_t entry_count_ = 0;
  // Image shape is uniform across the tree; fixed by the first insert (or
  // by the first leaf read back from disk).
  mutable uint32_t image_width_ = 0, image_height_ = 0;
};

}  // namespace quicci
