#include "repetilab/suffix_array.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "repetilab/error.hpp"

namespace repetilab {

namespace {

// Dense ranks 0..k-1 preserving symbol order.
std::vector<Index> compress(std::span<const std::uint32_t> text, Index first_rank) {
  std::vector<std::uint32_t> sorted(text.begin(), text.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Index> out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    out[i] = first_rank +
             static_cast<Index>(std::lower_bound(sorted.begin(), sorted.end(), text[i]) -
                                sorted.begin());
  }
  return out;
}

// Prefix doubling over cyclic shifts of a dense-ranked sequence.
std::vector<Index> cyclic_sort(const std::vector<Index>& ranks) {
  const std::size_t n = ranks.size();
  if (n == 0) return {};
  const std::size_t alphabet = *std::max_element(ranks.begin(), ranks.end()) + 1;
  std::vector<Index> order(n), cls(ranks), next_order(n), next_cls(n);
  std::vector<Index> count(std::max(alphabet, n), 0);

  for (Index r : ranks) ++count[r];
  for (std::size_t i = 1; i < alphabet; ++i) count[i] += count[i - 1];
  for (std::size_t i = n; i-- > 0;) order[--count[ranks[i]]] = static_cast<Index>(i);
  std::size_t classes = alphabet;

  for (std::size_t h = 1; h < n && classes < n; h <<= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      next_order[i] = static_cast<Index>((order[i] + n - h % n) % n);
    }
    std::fill(count.begin(), count.begin() + static_cast<std::ptrdiff_t>(classes), 0);
    for (std::size_t i = 0; i < n; ++i) ++count[cls[next_order[i]]];
    for (std::size_t i = 1; i < classes; ++i) count[i] += count[i - 1];
    for (std::size_t i = n; i-- > 0;) order[--count[cls[next_order[i]]]] = next_order[i];

    next_cls[order[0]] = 0;
    classes = 1;
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t cur = order[i], prev = order[i - 1];
      if (cls[cur] != cls[prev] || cls[(cur + h) % n] != cls[(prev + h) % n]) ++classes;
      next_cls[cur] = static_cast<Index>(classes - 1);
    }
    cls.swap(next_cls);
  }
  return order;
}

void check_size(std::size_t n) {
  if (n >= std::numeric_limits<Index>::max()) {
    throw LimitExceeded("text too long for 32-bit suffix indices");
  }
}

}  // namespace

std::vector<Index> rotation_order(std::span<const std::uint32_t> text) {
  check_size(text.size());
  return cyclic_sort(compress(text, 0));
}

std::vector<Index> suffix_array(std::span<const std::uint32_t> text) {
  check_size(text.size() + 1);
  std::vector<Index> ranks = compress(text, 1);
  ranks.push_back(0);  // unique sentinel smaller than every symbol
  std::vector<Index> order = cyclic_sort(ranks);
  order.erase(order.begin());  // the sentinel suffix sorts first
  return order;
}

std::vector<Index> lcp_array(std::span<const std::uint32_t> text, std::span<const Index> sa) {
  const std::size_t n = text.size();
  std::vector<Index> rank(n), lcp(n, 0);
  for (std::size_t i = 0; i < n; ++i) rank[sa[i]] = static_cast<Index>(i);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && text[i + h] == text[j + h]) ++h;
    lcp[rank[i]] = static_cast<Index>(h);
    if (h > 0) --h;
  }
  return lcp;
}

SparseTableMin::SparseTableMin(std::span<const Index> values) {
  levels_.emplace_back(values.begin(), values.end());
  for (std::size_t w = 1; 2 * w <= values.size(); w <<= 1) {
    const auto& prev = levels_.back();
    std::vector<Index> next(prev.size() - w);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + w]);
    levels_.push_back(std::move(next));
  }
}

Index SparseTableMin::min(std::size_t lo, std::size_t hi) const {
  const std::size_t k = std::bit_width(hi - lo + 1) - 1;
  return std::min(levels_[k][lo], levels_[k][hi + 1 - (std::size_t{1} << k)]);
}

}  // namespace repetilab
