#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace quicci::experiments {

/// Histogram over non-negative integer values (Hamming-style distances,
/// ranks). Values at or above the cap are counted in `total` but not
/// binned.
struct IntHistogram {
  std::map<uint32_t, uint64_t> bins;
  uint64_t total = 0;
  uint32_t cap = UINT32_MAX;

  void add(uint32_t value) {
    ++total;
    if (value < cap) ++bins[value];
  }
  void merge(const IntHistogram& other) {
    total += other.total;
    for (const auto& [value, count] : other.bins) bins[value] += count;
  }
  uint64_t binned_total() const {
    uint64_t sum = 0;
    for (const auto& [value, count] : bins) sum += count;
    return sum;
  }
  double mean() const {
    uint64_t sum = 0, count = 0;
    for (const auto& [value, c] : bins) {
      sum += static_cast<uint64_t>(value) * c;
      count += c;
    }
    return count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(count);
  }
  double fraction_at(uint32_t value) const {
    const auto it = bins.find(value);
    return total == 0 ? 0.0 : static_cast<double>(it == bins.end() ? 0 : it->second) / total;
  }
  bool operator==(const IntHistogram&) const = default;
};

/// Fixed-width bins over [0, max_value]; values are clamped into the last
/// bin so the range is closed.
struct RealHistogram {
  double bin_width = 0.01;
  double max_value = 2.0;
  std::vector<uint64_t> bins;
  uint64_t total = 0;
  double sum = 0.0;

  RealHistogram() : RealHistogram(0.01, 2.0) {}
  RealHistogram(double width, double max) : bin_width(width), max_value(max) {
    bins.assign(static_cast<size_t>(max / width) + 1, 0);
  }
  void add(double value) {
    ++total;
    sum += value;
    size_t bin = static_cast<size_t>(value / bin_width);
    if (bin >= bins.size()) bin = bins.size() - 1;
    ++bins[bin];
  }
  void merge(const RealHistogram& other) {
    total += other.total;
    sum += other.sum;
    for (size_t i = 0; i < bins.size() && i < other.bins.size(); ++i) bins[i] += other.bins[i];
  }
  double mean() const { return total == 0 ? 0.0 : sum / static_cast<double>(total); }
  bool operator==(const RealHistogram&) const = default;
};

}  // namespace quicci::experiments
