#pragma once

#include <cstdint>

#include "quicci/bitimage.hpp"

namespace quicci {

/// Number of positions where the two images differ. Symmetric; a metric.
uint32_t hamming_distance(const QuicciImage& a, const QuicciImage& b);

/// Bits set in the needle but unset in the haystack. Asymmetric: haystack
/// bits outside the needle's set bits (clutter responses) cost nothing.
uint32_t clutter_resistant_distance(const QuicciImage& needle, const QuicciImage& haystack);

struct MismatchCounts {
  uint32_t missing = 0;  // set in needle, unset in haystack
  uint32_t extra = 0;    // unset in needle, set in haystack
};
MismatchCounts mismatch_counts(const QuicciImage& needle, const QuicciImage& haystack);

/// The two mismatch kinds normalized separately: missing bits by the
/// needle's set-bit count, extra bits by its unset-bit count (each floored
/// at 1). Result in [0, 2]. Suited to very sparse or near-saturated needles.
double weighted_hamming_distance(const QuicciImage& needle, const QuicciImage& haystack);

}  // namespace quicci
