#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "quicci/bitimage.hpp"

namespace quicci {

/// Where a descriptor came from: source object and the index of the unique
/// oriented point within it.
struct Provenance {
  uint32_t object_id = 0;
  uint32_t vertex_index = 0;
  auto operator<=>(const Provenance&) const = default;
};

/// A set of equally sized images, optionally tagged with provenance.
struct DescriptorSet {
  uint32_t width = 0, height = 0;
  std::vector<QuicciImage> images;
  std::vector<Provenance> provenance;  // empty or one entry per image

  bool has_provenance() const { return !provenance.empty(); }
};

/// .qdf: little-endian; 24-byte header (magic "QIDS", version u32 = 1,
/// width u16, height u16, count u64, flags u32 with bit 0 = provenance
/// present), then count packed bit records, then optional provenance
/// records of (object_id u32, vertex_index u32).
void write_descriptor_set(const DescriptorSet& set, std::ostream& out);
void write_descriptor_set(const DescriptorSet& set, const std::filesystem::path& path);

DescriptorSet read_descriptor_set(std::istream& in);
DescriptorSet read_descriptor_set(const std::filesystem::path& path);

}  // namespace quicci
