#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace repetilab {

using Index = std::uint32_t;

// Suffix array of `text` by prefix doubling with radix sorting,
// O(n log n). Symbols are arbitrary 32-bit values.
std::vector<Index> suffix_array(std::span<const std::uint32_t> text);

// Sorted order of the n cyclic rotations of `text` (equal rotations in
// unspecified relative order), O(n log n).
std::vector<Index> rotation_order(std::span<const std::uint32_t> text);

// lcp[i] = LCP(suffix sa[i-1], suffix sa[i]) for i >= 1; lcp[0] = 0 (Kasai).
std::vector<Index> lcp_array(std::span<const std::uint32_t> text, std::span<const Index> sa);

// Range-minimum queries over a fixed array, O(1) after O(n log n) setup.
class SparseTableMin {
 public:
  SparseTableMin() = default;
  explicit SparseTableMin(std::span<const Index> values);
  // Minimum over [lo, hi], lo <= hi.
  Index min(std::size_t lo, std::size_t hi) const;
  std::size_t size() const { return levels_.empty() ? 0 : levels_.front().size(); }

 private:
  std::vector<std::vector<Index>> levels_;
};

}  // namespace repetilab
