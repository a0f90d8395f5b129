#include "quicci/bitimage.hpp"

#include <bit>

#include "quicci/error.hpp"

namespace quicci {

QuicciImage::QuicciImage(uint32_t width, uint32_t height) : width_(width), height_(height) {
  if (width == 0 || height == 0) throw Error("QuicciImage: zero dimension");
  const uint64_t bits = static_cast<uint64_t>(width) * height;
  if (bits > 65536) throw Error("QuicciImage: image exceeds 65536 bits");
  words_.assign((bits + 63) / 64, 0);
}

size_t QuicciImage::popcount() const {
  size_t total = 0;
  for (uint64_t w : words_) total += static_cast<size_t>(std::popcount(w));
  return total;
}

QuicciImage QuicciImage::transposed() const {
  QuicciImage out(height_, width_);
  for (uint32_t r = 0; r < height_; ++r)
    for (uint32_t c = 0; c < width_; ++c)
      if (bit(r, c)) out.set_bit(c, r, true);
  return out;
}

uint32_t suffix_popcount(std::span<const uint64_t> words, uint32_t from_bit) {
  const size_t first_word = from_bit >> 6;
  if (first_word >= words.size()) return 0;
  uint32_t total = std::popcount(words[first_word] >> (from_bit & 63));
  for (size_t w = first_word + 1; w < words.size(); ++w) total += std::popcount(words[w]);
  return total;
}

BitCountProfile bit_count_profile(const QuicciImage& image, uint32_t chunk_bits) {
  if (chunk_bits == 0) throw Error("bit_count_profile: chunk_bits must be >= 1");
  BitCountProfile profile;
  profile.chunk_bits = chunk_bits;
  const uint32_t total_bits = image.bit_count();
  const uint32_t levels = (total_bits + chunk_bits - 1) / chunk_bits;
  profile.suffix_counts.resize(levels + 1);
  for (uint32_t l = 0; l <= levels; ++l) {
    const uint64_t from = static_cast<uint64_t>(l) * chunk_bits;
    profile.suffix_counts[l] =
        from >= total_bits
            ? 0
            : static_cast<uint16_t>(suffix_popcount(image.words(), static_cast<uint32_t>(from)));
  }
  return profile;
}

}  // namespace quicci
