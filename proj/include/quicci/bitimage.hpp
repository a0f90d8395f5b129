#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace quicci {

/// Packed W x H binary image. Bit (row, column) lives at flat index
/// row * W + column, LSB-first within 64-bit words. Trailing pad bits of the
/// last word are always zero, so word-level kernels need no masking.
class QuicciImage {
 public:
  QuicciImage() = default;
  QuicciImage(uint32_t width, uint32_t height);

  uint32_t width() const { return width_; }
  uint32_t height() const { return height_; }
  uint32_t bit_count() const { return width_ * height_; }
  size_t word_count() const { return words_.size(); }

  bool flat_bit(uint32_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  void set_flat_bit(uint32_t index, bool value) {
    const uint64_t mask = 1ull << (index & 63);
    if (value)
      words_[index >> 6] |= mask;
    else
      words_[index >> 6] &= ~mask;
  }
  bool bit(uint32_t row, uint32_t column) const { return flat_bit(row * width_ + column); }
  void set_bit(uint32_t row, uint32_t column, bool value) {
    set_flat_bit(row * width_ + column, value);
  }

  std::span<const uint64_t> words() const { return words_; }
  std::span<uint64_t> words() { return words_; }

  size_t popcount() const;

  /// Same bits with rows and columns swapped (height x width image).
  QuicciImage transposed() const;

  bool operator==(const QuicciImage&) const = default;

 private:
  uint32_t width_ = 0, height_ = 0;
  std::vector<uint64_t> words_;
};

/// Set-bit counts of progressively shorter suffixes of the flat bit string:
/// entry l is the popcount after dropping the first l chunks of chunk_bits.
/// Entry 0 is the total popcount; the final entry (empty suffix) is 0.
struct BitCountProfile {
  std::vector<uint16_t> suffix_counts;
  uint32_t chunk_bits = 0;
};

BitCountProfile bit_count_profile(const QuicciImage& image, uint32_t chunk_bits);

/// Popcount of flat bits at indices >= from_bit.
uint32_t suffix_popcount(std::span<const uint64_t> words, uint32_t from_bit);

}  // namespace quicci
