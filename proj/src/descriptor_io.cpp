#include "quicci/descriptor_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "quicci/error.hpp"

namespace quicci {

namespace {

constexpr char kMagic[4] = {'Q', 'I', 'D', 'S'};
constexpr uint32_t kVersion = 1;

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
  if (!in) throw Error("descriptor set: truncated stream");
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

}  // namespace

void write_descriptor_set(const DescriptorSet& set, std::ostream& out) {
  if (set.has_provenance() && set.provenance.size() != set.images.size())
    throw Error("descriptor set: provenance count does not match image count");
  out.write(kMagic, 4);
  write_le<uint32_t>(out, kVersion);
  write_le<uint16_t>(out, static_cast<uint16_t>(set.width));
  write_le<uint16_t>(out, static_cast<uint16_t>(set.height));
  write_le<uint64_t>(out, set.images.size());
  write_le<uint32_t>(out, set.has_provenance() ? 1u : 0u);
  for (const QuicciImage& image : set.images) {
    if (image.width() != set.width || image.height() != set.height)
      throw Error("descriptor set: image dimensions do not match header");
    for (uint64_t w : image.words()) write_le<uint64_t>(out, w);
  }
  for (const Provenance& p : set.provenance) {
    write_le<uint32_t>(out, p.object_id);
    write_le<uint32_t>(out, p.vertex_index);
  }
  if (!out) throw Error("descriptor set: write failed");
}

void write_descriptor_set(const DescriptorSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("descriptor set: cannot open " + path.string() + " for writing");
  write_descriptor_set(set, out);
}

DescriptorSet read_descriptor_set(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw Error("descriptor set: bad magic");
  const uint32_t version = read_le<uint32_t>(in);
  if (version != kVersion)
    throw Error("descriptor set: unsupported version " + std::to_string(version));
  DescriptorSet set;
  set.width = read_le<uint16_t>(in);
  set.height = read_le<uint16_t>(in);
  const uint64_t count = read_le<uint64_t>(in);
  const uint32_t flags = read_le<uint32_t>(in);
  if (set.width == 0 || set.height == 0)
    throw Error("descriptor set: zero image dimension in header");

  const uint32_t bits = set.width * set.height;
  const uint32_t pad_bits = static_cast<uint32_t>((64 - bits % 64) % 64);
  set.images.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    QuicciImage image(set.width, set.height);
    for (uint64_t& w : image.words()) w = read_le<uint64_t>(in);
    if (pad_bits != 0 && (image.words().back() >> (64 - pad_bits)) != 0)
      throw Error("descriptor set: nonzero padding bits in record " + std::to_string(i));
    set.images.push_back(std::move(image));
  }
  if (flags & 1u) {
    set.provenance.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
      Provenance p;
      p.object_id = read_le<uint32_t>(in);
      p.vertex_index = read_le<uint32_t>(in);
      set.provenance.push_back(p);
    }
  }
  return set;
}

DescriptorSet read_descriptor_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("descriptor set: cannot open " + path.string());
  return read_descriptor_set(in);
}

}  // namespace quicci
