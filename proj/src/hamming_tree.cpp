#include "quicci/hamming_tree.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <queue>
#include <sstream>

#include "quicci/distances.hpp"
#include "quicci/error.hpp"

namespace quicci {

void TreeConfig::validate() const {
  if (string_bits == 0 || string_bits > 65535)
    throw Error("TreeConfig: string_bits must be in [1, 65535]");
  if (chunk_bits == 0) throw Error("TreeConfig: chunk_bits must be >= 1");
  if (leaf_split_threshold == 0) throw Error("TreeConfig: leaf_split_threshold must be >= 1");
  if (codec != Codec::none && codec != Codec::deflate)
    throw Error("TreeConfig: unknown codec id");
}

uint32_t subtree_min_distance(const BitCountProfile& needle_profile,
                              std::span<const uint16_t> path_counts) {
  const size_t depth = path_counts.size();
  if (depth == 0) return 0;
  if (needle_profile.suffix_counts.size() < depth)
    throw Error("subtree_min_distance: path deeper than needle profile");
  const auto& beta = needle_profile.suffix_counts;
  int64_t bound = 0;
  for (size_t l = 0; l + 1 < depth; ++l) {
    const int64_t member_chunk = static_cast<int64_t>(path_counts[l]) - path_counts[l + 1];
    const int64_t needle_chunk = static_cast<int64_t>(beta[l]) - beta[l + 1];
    bound += std::abs(member_chunk - needle_chunk);
  }
  bound += std::abs(static_cast<int64_t>(path_counts[depth - 1]) - beta[depth - 1]);
  return static_cast<uint32_t>(bound);
}

HammingTree::HammingTree(TreeConfig config) : config_(config) { config_.validate(); }

uint16_t HammingTree::branch_key(const QuicciImage& image, uint32_t level) const {
  const uint64_t from = static_cast<uint64_t>(level) * config_.chunk_bits;
  if (from >= config_.string_bits) return 0;
  return static_cast<uint16_t>(suffix_popcount(image.words(), static_cast<uint32_t>(from)));
}

void HammingTree::check_image(const QuicciImage& image) const {
  if (image.bit_count() != config_.string_bits)
    throw Error("HammingTree: image has " + std::to_string(image.bit_count()) +
                " bits, tree indexes " + std::to_string(config_.string_bits));
  if (image_width_ == 0) {
    image_width_ = image.width();
    image_height_ = image.height();
  } else if (image.width() != image_width_ || image.height() != image_height_) {
    throw Error("HammingTree: image shape differs from previously indexed images");
  }
}

void HammingTree::split_leaf(Child& slot, uint32_t leaf_depth) {
  // leaf_depth is the number of branch keys consumed on the way down. Once
  // every chunk is consumed the suffix profile cannot discriminate further,
  // so such leaves grow without bound instead of splitting.
  if (leaf_depth >= config_.levels()) return;
  Leaf entries = std::move(std::get<Leaf>(slot));
  auto node = std::make_unique<Internal>();
  for (Entry& entry : entries) {
    const uint16_t key = branch_key(entry.image, leaf_depth);
    auto [it, inserted] = node->children.try_emplace(key, Leaf{});
    std::get<Leaf>(it->second).push_back(std::move(entry));
  }
  slot = std::move(node);
  // Redistribution can leave a child over the threshold (entries sharing a
  // profile prefix); split recursively.
  for (auto& [key, child] : std::get<std::unique_ptr<Internal>>(slot)->children)
    if (std::holds_alternative<Leaf>(child) &&
        std::get<Leaf>(child).size() > config_.leaf_split_threshold)
      split_leaf(child, leaf_depth + 1);
}

void HammingTree::insert(const QuicciImage& image, Provenance provenance) {
  check_image(image);
  Internal* node = &root_;
  uint32_t depth = 0;
  while (true) {
    const uint16_t key = branch_key(image, depth);
    auto [it, inserted] = node->children.try_emplace(key, Leaf{});
    Child& child = it->second;
    if (std::holds_alternative<std::unique_ptr<Internal>>(child)) {
      node = std::get<std::unique_ptr<Internal>>(child).get();
      ++depth;
      continue;
    }
    Leaf& leaf = std::get<Leaf>(child);
    leaf.push_back({image, provenance});
    ++entry_count_;
    if (leaf.size() > config_.leaf_split_threshold) split_leaf(child, depth + 1);
    return;
  }
}

namespace {

struct ResultKey {
  uint32_t distance;
  Provenance provenance;
  friend bool operator<(const ResultKey& a, const ResultKey& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.provenance < b.provenance;
  }
};

/// Ascending (distance, provenance) list bounded to k entries.
class BoundedResults {
 public:
  explicit BoundedResults(uint32_t k) : k_(k) {}

  bool full() const { return results_.size() >= k_; }
  uint32_t worst_distance() const { return results_.back().distance; }
  ResultKey worst_key() const {
    return {results_.back().distance, results_.back().provenance};
  }

  void offer(const QuicciImage& image, Provenance provenance, uint32_t distance) {
    const ResultKey key{distance, provenance};
    if (full() && !(key < worst_key())) return;
    auto pos = std::upper_bound(results_.begin(), results_.end(), key,
                                [](const ResultKey& k, const TreeSearchResult& r) {
                                  return k < ResultKey{r.distance, r.provenance};
                                });
    results_.insert(pos, TreeSearchResult{image, provenance, distance});
    if (results_.size() > k_) results_.pop_back();
  }

  std::vector<TreeSearchResult> take() { return std::move(results_); }

 private:
  uint32_t k_;
  std::vector<TreeSearchResult> results_;
};

}  // namespace

std::vector<TreeSearchResult> HammingTree::query(const QuicciImage& needle, uint32_t k,
                                                 std::optional<uint32_t> distance_limit,
                                                 QueryStats* stats) const {
  if (k == 0) throw Error("HammingTree::query: k must be >= 1");
  if (needle.bit_count() != config_.string_bits)
    throw Error("HammingTree::query: needle has wrong bit length");

  const BitCountProfile profile = bit_count_profile(needle, config_.chunk_bits);
  const auto& beta = profile.suffix_counts;
  BoundedResults results(k);

  // Nodes and leaves may be admitted while their lower bound ties the worst
  // result: an equal-distance entry with earlier provenance still improves
  // the list under the (distance, provenance) order.
  const auto prune_limit = [&]() -> uint32_t {
    if (results.full()) return results.worst_distance();
    return distance_limit.value_or(UINT32_MAX);
  };

  struct Pending {
    uint32_t bound;
    uint64_t seq;  // pop order tie-break, for determinism
    const Internal* node;
    uint32_t depth;
    uint16_t last_key;
    uint32_t prefix;
    std::vector<uint16_t> path;  // populated only when collecting stats
  };
  struct PendingOrder {
    bool operator()(const Pending& a, const Pending& b) const {
      return a.bound != b.bound ? a.bound > b.bound : a.seq > b.seq;
    }
  };
  std::priority_queue<Pending, std::vector<Pending>, PendingOrder> queue;
  uint64_t seq = 0;
  const bool collect = stats != nullptr && stats->collect_paths;
  queue.push({0, seq++, &root_, 0, 0, 0, {}});

  while (!queue.empty()) {
    const Pending item = std::move(const_cast<Pending&>(queue.top()));
    queue.pop();
    if (item.bound > prune_limit()) break;
    if (stats) ++stats->internal_nodes_visited;

    for (const auto& [key, child] : item.node->children) {
      // Lower bound for the child subtree: accumulated per-chunk gaps plus
      // the count gap of the remaining suffix.
      uint32_t child_prefix = item.prefix;
      if (item.depth >= 1) {
        const int32_t member_chunk = static_cast<int32_t>(item.last_key) - key;
        const int32_t needle_chunk =
            static_cast<int32_t>(beta[item.depth - 1]) - beta[item.depth];
        child_prefix += static_cast<uint32_t>(std::abs(member_chunk - needle_chunk));
      }
      const uint32_t child_bound =
          child_prefix +
          static_cast<uint32_t>(std::abs(static_cast<int32_t>(key) - beta[item.depth]));
      if (child_bound > prune_limit()) continue;

      if (std::holds_alternative<Leaf>(child)) {
        const Leaf& leaf = std::get<Leaf>(child);
        if (stats) {
          ++stats->leaves_scanned;
          stats->leaf_entries_scanned += leaf.size();
          if (collect) {
            auto path = item.path;
            path.push_back(key);
            stats->scanned_leaf_paths.push_back(std::move(path));
          }
        }
        for (const Entry& entry : leaf) {
          const uint32_t d = hamming_distance(needle, entry.image);
          if (distance_limit && d > *distance_limit) continue;
          results.offer(entry.image, entry.provenance, d);
        }
      } else {
        Pending next{child_bound,
                     seq++,
                     std::get<std::unique_ptr<Internal>>(child).get(),
                     item.depth + 1,
                     key,
                     child_prefix,
                     {}};
        if (collect) {
          next.path = item.path;
          next.path.push_back(key);
        }
        queue.push(std::move(next));
        if (stats) ++stats->queue_pushes;
      }
    }
  }
  return results.take();
}

TreeStats HammingTree::stats() const {
  TreeStats out;
  out.entry_count = entry_count_;
  if (entry_count_ == 0) return out;
  uint64_t set_bits_total = 0;
  uint64_t internal_count = 0;

  std::function<void(const Internal&, uint32_t)> walk = [&](const Internal& node, uint32_t depth) {
    ++internal_count;
    for (const auto& [key, child] : node.children) {
      if (std::holds_alternative<Leaf>(child)) {
        ++out.leaf_count;
        ++out.leaf_depth_histogram[depth + 1];
        for (const Entry& entry : std::get<Leaf>(child))
          set_bits_total += entry.image.popcount();
      } else {
        walk(*std::get<std::unique_ptr<Internal>>(child), depth + 1);
      }
    }
  };
  walk(root_, 0);
  out.node_count = internal_count + out.leaf_count;
  out.mean_set_bits = static_cast<double>(set_bits_total) / static_cast<double>(entry_count_);
  return out;
}

void HammingTree::visit_leaves(
    const std::function<void(std::span<const uint16_t>, std::span<const Entry>)>& fn) const {
  std::vector<uint16_t> path;
  std::function<void(const Internal&)> walk = [&](const Internal& node) {
    for (const auto& [key, child] : node.children) {
      path.push_back(key);
      if (std::holds_alternative<Leaf>(child))
        fn(path, std::get<Leaf>(child));
      else
        walk(*std::get<std::unique_ptr<Internal>>(child));
      path.pop_back();
    }
  };
  walk(root_);
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr char kMetaMagic[4] = {'Q', 'I', 'H', 'T'};
constexpr char kLeafMagic[4] = {'Q', 'I', 'H', 'L'};
constexpr uint32_t kMetaVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) throw Error("hamming tree: truncated stream");
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

std::string leaf_file_name(std::span<const uint16_t> path) {
  std::ostringstream name;
  name << "leaf";
  for (uint16_t key : path) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "-%04x", key);
    name << buf;
  }
  name << ".bin";
  return name.str();
}

std::vector<unsigned char> codec_compress(Codec codec, std::span<const unsigned char> raw) {
  if (codec == Codec::none) return {raw.begin(), raw.end()};
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> out(bound);
  if (compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_SPEED) !=
      Z_OK)
    throw Error("hamming tree: deflate failed");
  out.resize(bound);
  return out;
}

std::vector<unsigned char> codec_decompress(Codec codec, std::span<const unsigned char> stored,
                                            uint64_t raw_size) {
  if (codec == Codec::none) return {stored.begin(), stored.end()};
  std::vector<unsigned char> out(raw_size);
  uLongf out_size = static_cast<uLongf>(raw_size);
  if (uncompress(out.data(), &out_size, stored.data(), static_cast<uLong>(stored.size())) != Z_OK ||
      out_size != raw_size)
    throw Error("hamming tree: inflate failed (corrupt leaf payload)");
  return out;
}

uint32_t payload_crc(std::span<const unsigned char> data) {
  return static_cast<uint32_t>(
      crc32(0, data.data(), static_cast<uInt>(data.size())));
}

}  // namespace

void HammingTree::save(const std::filesystem::path& directory) const {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  // Drop stale index files so a smaller tree does not leave orphan leaves.
  for (const auto& entry : fs::directory_iterator(directory)) {
    const std::string name = entry.path().filename().string();
    if (name == "tree.meta" || (name.starts_with("leaf-") && name.ends_with(".bin")))
      fs::remove(entry.path());
  }

  std::ofstream meta(directory / "tree.meta", std::ios::binary);
  if (!meta) throw Error("hamming tree: cannot write " + (directory / "tree.meta").string());
  meta.write(kMetaMagic, 4);
  write_le<uint32_t>(meta, kMetaVersion);
  write_le<uint16_t>(meta, static_cast<uint16_t>(config_.string_bits));
  write_le<uint16_t>(meta, static_cast<uint16_t>(config_.chunk_bits));
  write_le<uint32_t>(meta, config_.leaf_split_threshold);
  write_le<uint32_t>(meta, static_cast<uint32_t>(config_.codec));
  write_le<uint64_t>(meta, entry_count_);

  // Depth-first structure stream: child count, then per child a
  // (branch_key u16, node_kind u8) tuple, recursing into internal children.
  std::function<void(const Internal&, std::vector<uint16_t>&)> walk =
      [&](const Internal& node, std::vector<uint16_t>& path) {
        write_le<uint32_t>(meta, static_cast<uint32_t>(node.children.size()));
        for (const auto& [key, child] : node.children) {
          write_le<uint16_t>(meta, key);
          const bool is_leaf = std::holds_alternative<Leaf>(child);
          write_le<uint8_t>(meta, is_leaf ? 1 : 0);
          path.push_back(key);
          if (is_leaf) {
            const Leaf& leaf = std::get<Leaf>(child);
            DescriptorSet set;
            set.width = image_width_ != 0 ? image_width_ : config_.string_bits;
            set.height = image_height_ != 0 ? image_height_ : 1;
            set.images.reserve(leaf.size());
            set.provenance.reserve(leaf.size());
            for (const Entry& entry : leaf) {
              set.images.push_back(entry.image);
              set.provenance.push_back(entry.provenance);
            }
            std::ostringstream raw_stream;
            write_descriptor_set(set, raw_stream);
            const std::string raw_str = raw_stream.str();
            const std::span<const unsigned char> raw{
                reinterpret_cast<const unsigned char*>(raw_str.data()), raw_str.size()};
            const std::vector<unsigned char> stored = codec_compress(config_.codec, raw);

            std::ofstream leaf_out(directory / leaf_file_name(path), std::ios::binary);
            if (!leaf_out) throw Error("hamming tree: cannot write leaf file");
            leaf_out.write(kLeafMagic, 4);
            write_le<uint64_t>(leaf_out, raw.size());
            write_le<uint64_t>(leaf_out, stored.size());
            write_le<uint32_t>(leaf_out, payload_crc(raw));
            leaf_out.write(reinterpret_cast<const char*>(stored.data()),
                           static_cast<std::streamsize>(stored.size()));
            if (!leaf_out) throw Error("hamming tree: leaf write failed");
          } else {
            walk(*std::get<std::unique_ptr<Internal>>(child), path);
          }
          path.pop_back();
        }
      };
  std::vector<uint16_t> path;
  walk(root_, path);
  if (!meta) throw Error("hamming tree: meta write failed");
}

HammingTree HammingTree::load(const std::filesystem::path& directory) {
  std::ifstream meta(directory / "tree.meta", std::ios::binary);
  if (!meta) throw Error("hamming tree: cannot open " + (directory / "tree.meta").string());
  char magic[4];
  meta.read(magic, 4);
  if (!meta || std::memcmp(magic, kMetaMagic, 4) != 0)
    throw Error("hamming tree: bad meta magic");
  const uint32_t version = read_le<uint32_t>(meta);
  if (version != kMetaVersion)
    throw Error("hamming tree: unsupported meta version " + std::to_string(version));

  TreeConfig config;
  config.string_bits = read_le<uint16_t>(meta);
  config.chunk_bits = read_le<uint16_t>(meta);
  config.leaf_split_threshold = read_le<uint32_t>(meta);
  config.codec = static_cast<Codec>(read_le<uint32_t>(meta));
  const uint64_t expected_entries = read_le<uint64_t>(meta);
  config.validate();

  HammingTree tree(config);
  std::function<void(Internal&, std::vector<uint16_t>&)> walk = [&](Internal& node,
                                                                    std::vector<uint16_t>& path) {
    const uint32_t child_count = read_le<uint32_t>(meta);
    for (uint32_t i = 0; i < child_count; ++i) {
      const uint16_t key = read_le<uint16_t>(meta);
      const uint8_t kind = read_le<uint8_t>(meta);
      path.push_back(key);
      if (kind == 1) {
        std::ifstream leaf_in(directory / leaf_file_name(path), std::ios::binary);
        if (!leaf_in)
          throw Error("hamming tree: missing leaf file " + leaf_file_name(path));
        char leaf_magic[4];
        leaf_in.read(leaf_magic, 4);
        if (!leaf_in || std::memcmp(leaf_magic, kLeafMagic, 4) != 0)
          throw Error("hamming tree: bad leaf magic in " + leaf_file_name(path));
        const uint64_t raw_size = read_le<uint64_t>(leaf_in);
        const uint64_t stored_size = read_le<uint64_t>(leaf_in);
        const uint32_t crc = read_le<uint32_t>(leaf_in);
        std::vector<unsigned char> stored(stored_size);
        leaf_in.read(reinterpret_cast<char*>(stored.data()),
                     static_cast<std::streamsize>(stored_size));
        if (!leaf_in) throw Error("hamming tree: truncated leaf file " + leaf_file_name(path));
        const std::vector<unsigned char> raw = codec_decompress(config.codec, stored, raw_size);
        if (payload_crc(raw) != crc)
          throw Error("hamming tree: checksum mismatch in " + leaf_file_name(path));

        std::istringstream raw_stream(
            std::string(reinterpret_cast<const char*>(raw.data()), raw.size()));
        DescriptorSet set = read_descriptor_set(raw_stream);
        if (!set.has_provenance() && !set.images.empty())
          throw Error("hamming tree: leaf payload lacks provenance");
        Leaf leaf;
        leaf.reserve(set.images.size());
        for (size_t e = 0; e < set.images.size(); ++e) {
          tree.check_image(set.images[e]);
          leaf.push_back({std::move(set.images[e]), set.provenance[e]});
        }
        tree.entry_count_ += leaf.size();
        node.children.emplace(key, std::move(leaf));
      } else if (kind == 0) {
        auto internal = std::make_unique<Internal>();
        walk(*internal, path);
        node.children.emplace(key, std::move(internal));
      } else {
        throw Error("hamming tree: corrupt structure stream");
      }
      path.pop_back();
    }
  };
  std::vector<uint16_t> path;
  walk(tree.root_, path);
  if (tree.entry_count_ != expected_entries)
    throw Error("hamming tree: entry count mismatch (meta says " +
                std::to_string(expected_entries) + ", leaves hold " +
                std::to_string(tree.entry_count_) + ")");
  return tree;
}

}  // namespace quicci
