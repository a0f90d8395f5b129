#include "quicci/distances.hpp"

#include <bit>

#include "quicci/error.hpp"

namespace quicci {

namespace {

void check_dimensions(const QuicciImage& a, const QuicciImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error("distance: image dimension mismatch");
}

}  // namespace

uint32_t hamming_distance(const QuicciImage& a, const QuicciImage& b) {
  check_dimensions(a, b);
  const auto wa = a.words(), wb = b.words();
  uint32_t total = 0;
  for (size_t i = 0; i < wa.size(); ++i) total += std::popcount(wa[i] ^ wb[i]);
  return total;
}

uint32_t clutter_resistant_distance(const QuicciImage& needle, const QuicciImage& haystack) {
  check_dimensions(needle, haystack);
  const auto wn = needle.words(), wh = haystack.words();
  uint32_t total = 0;
  for (size_t i = 0; i < wn.size(); ++i) total += std::popcount(wn[i] & ~wh[i]);
  return total;
}

MismatchCounts mismatch_counts(const QuicciImage& needle, const QuicciImage& haystack) {
  check_dimensions(needle, haystack);
  const auto wn = needle.words(), wh = haystack.words();
  MismatchCounts counts;
  for (size_t i = 0; i < wn.size(); ++i) {
    counts.missing += std::popcount(wn[i] & ~wh[i]);
    counts.extra += std::popcount(~wn[i] & wh[i]);
  }
  return counts;
}

double weighted_hamming_distance(const QuicciImage& needle, const QuicciImage& haystack) {
  const MismatchCounts counts = mismatch_counts(needle, haystack);
  const uint32_t total_bits = needle.bit_count();
  const uint32_t set_bits = static_cast<uint32_t>(needle.popcount());
  const double set_divisor = set_bits > 0 ? set_bits : 1;
  const double unset_divisor = total_bits - set_bits > 0 ? total_bits - set_bits : 1;
  return counts.missing / set_divisor + counts.extra / unset_divisor;
}

}  // namespace quicci
