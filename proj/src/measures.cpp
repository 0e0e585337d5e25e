#include "repetilab/measures.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <span>

#include "repetilab/error.hpp"
#include "repetilab/suffix_array.hpp"

namespace repetilab {

namespace {

std::span<const std::uint32_t> as_span(TextView w) {
  return {reinterpret_cast<const std::uint32_t*>(w.data()), w.size()};
}

void require_nonempty(TextView w, const char* what) {
  if (w.empty()) throw ContractViolation(std::string(what) + " requires a non-empty string");
}

}  // namespace

ComplexityProfile substring_complexity(TextView w) {
  require_nonempty(w, "substring complexity");
  const std::size_t n = w.size();
  const auto text = as_span(w);
  const std::vector<Index> sa = suffix_array(text);
  const std::vector<Index> lcp = lcp_array(text, sa);

  // pairs_ge[k] = adjacent suffix pairs sharing a prefix of length >= k.
  std::vector<std::uint64_t> pairs_ge(n + 2, 0);
  for (std::size_t i = 1; i < n; ++i) ++pairs_ge[lcp[i]];
  for (std::size_t k = n; k-- > 0;) pairs_ge[k] += pairs_ge[k + 1];

  ComplexityProfile profile;
  profile.counts.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const std::uint64_t count = (n - k + 1) - pairs_ge[k];
    profile.counts[k - 1] = count;
    const Rational ratio(count, k);
    if (k == 1 || ratio > profile.delta) {
      profile.delta = ratio;
      profile.delta_at = k;
    }
  }
  return profile;
}

Rational delta(TextView w) { return substring_complexity(w).delta; }

Text bwt(TextView w, BwtMode mode) {
  require_nonempty(w, "BWT");
  const std::size_t n = w.size();
  Text out;
  if (mode == BwtMode::kRotations) {
    const std::vector<Index> order = rotation_order(as_span(w));
    out.reserve(n);
    for (Index p : order) out.push_back(w[(p + n - 1) % n]);
    return out;
  }
  const std::vector<Index> sa = suffix_array(as_span(w));
  out.reserve(n + 1);
  out.push_back(w[n - 1]);  // row of the suffix "$"
  for (Index p : sa) out.push_back(p == 0 ? kBwtSentinel : w[p - 1]);
  return out;
}

Text inverse_bwt(TextView transformed) {
  const std::size_t m = transformed.size();
  if (std::count(transformed.begin(), transformed.end(), kBwtSentinel) != 1) {
    throw ContractViolation("sentinel BWT must contain exactly one terminator");
  }
  // Sentinel sorts first; map it below every real symbol.
  std::vector<std::uint64_t> keys(m);
  for (std::size_t i = 0; i < m; ++i) {
    keys[i] = transformed[i] == kBwtSentinel ? 0 : std::uint64_t{transformed[i]} + 1;
  }
  // LF(i) = position of row i's last symbol in the first column: a stable sort.
  std::vector<Index> lf_inverse(m);
  for (std::size_t i = 0; i < m; ++i) lf_inverse[i] = static_cast<Index>(i);
  std::stable_sort(lf_inverse.begin(), lf_inverse.end(),
                   [&](Index a, Index b) { return keys[a] < keys[b]; });
  std::vector<Index> lf(m);
  for (std::size_t r = 0; r < m; ++r) lf[lf_inverse[r]] = static_cast<Index>(r);

  Text out(m - 1, U'\0');
  std::size_t row = 0;  // row 0 is "$w"; its last symbol is w's last symbol
  for (std::size_t k = m - 1; k-- > 0;) {
    out[k] = transformed[row];
    row = lf[row];
  }
  return out;
}

std::uint64_t rle_runs(TextView x) {
  require_nonempty(x, "run counting");
  std::uint64_t runs = 1;
  for (std::size_t i = 1; i < x.size(); ++i) runs += x[i] != x[i - 1];
  return runs;
}

std::uint64_t r_measure(TextView w, BwtMode mode) { return rle_runs(bwt(w, mode)); }

const char* to_string(BwtMode mode) {
  return mode == BwtMode::kRotations ? "rotations" : "sentinel";
}

BwtMode parse_bwt_mode(std::string_view name) {
  if (name == "rotations") return BwtMode::kRotations;
  if (name == "sentinel") return BwtMode::kSentinel;
  throw ParseError("unknown BWT mode \"" + std::string(name) + "\"");
}

namespace {

// Suffix array with range queries for "earliest occurrence of w[s, s+len)".
class OccurrenceIndex {
 public:
  explicit OccurrenceIndex(TextView w)
      : n_(w.size()), sa_(suffix_array(as_span(w))), rank_(n_) {
    for (std::size_t i = 0; i < n_; ++i) rank_[sa_[i]] = static_cast<Index>(i);
    lcp_ = SparseTableMin(lcp_array(as_span(w), sa_));
    sa_min_ = SparseTableMin(sa_);
  }

  // Smallest text position where w[s, s+len) occurs (0-based).
  std::size_t earliest(std::size_t s, std::size_t len) const {
    const std::size_t r = rank_[s];
    // Smallest lo with min(lcp[lo+1..r]) >= len.
    std::size_t lo_a = 0, lo_b = r;
    while (lo_a < lo_b) {
      const std::size_t mid = (lo_a + lo_b) / 2;
      if (lcp_.min(mid + 1, r) >= len) {
        lo_b = mid;
      } else {
        lo_a = mid + 1;
      }
    }
    // Largest hi with min(lcp[r+1..hi]) >= len.
    std::size_t hi_a = r, hi_b = n_ - 1;
    while (hi_a < hi_b) {
      const std::size_t mid = (hi_a + hi_b + 1) / 2;
      if (lcp_.min(r + 1, mid) >= len) {
        hi_a = mid;
      } else {
        hi_b = mid - 1;
      }
    }
    return sa_min_.min(lo_a, hi_a);
  }

 private:
  std::size_t n_;
  std::vector<Index> sa_;
  std::vector<Index> rank_;
  SparseTableMin lcp_;
  SparseTableMin sa_min_;
};

// Greedy copy parsing; `allow_overlap` selects LZ76 vs LZ-no.
Parse greedy_copy_parse(TextView w, bool allow_overlap) {
  require_nonempty(w, "LZ parsing");
  const std::size_t n = w.size();
  const OccurrenceIndex index(w);
  auto feasible = [&](std::size_t s, std::size_t len) -> std::optional<std::size_t> {
    const std::size_t j = index.earliest(s, len);
    if (allow_overlap ? j < s : j + len <= s) return j;
    return std::nullopt;
  };

  Parse parse;
  std::size_t s = 0;
  while (s < n) {
    // Feasibility is monotone in the length, so binary search the longest.
    std::size_t best = 0, best_source = 0;
    std::size_t lo = 1, hi = n - s;
    while (lo <= hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (auto j = feasible(s, mid)) {
        best = mid;
        best_source = *j;
        lo = mid + 1;
      } else {
        hi = mid - 1;
      }
    }
    Phrase ph;
    ph.start = s + 1;
    if (best == 0) {
      ph.kind = Phrase::Kind::kLiteral;
      ph.length = 1;
      ph.symbol = w[s];
    } else {
      ph.kind = Phrase::Kind::kCopy;
      ph.length = best;
      ph.source = best_source + 1;
    }
    parse.phrases.push_back(ph);
    s += ph.length;
  }
  return parse;
}

// Fenwick tree over SA ranks marking suffixes of reverse(w) that start at
// a phrase end.
class MarkedRanks {
 public:
  explicit MarkedRanks(std::size_t size) : tree_(size + 1, 0) {}

  void mark(std::size_t pos) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  std::size_t prefix(std::size_t count) const {  // marks in [0, count)
    std::size_t total = 0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) total += tree_[i];
    return total;
  }
  // Smallest marked position in [lo, hi], or npos.
  std::size_t first_in(std::size_t lo, std::size_t hi) const {
    const std::size_t before = prefix(lo);
    if (prefix(hi + 1) == before) return npos;
    // Binary lifting for the (before+1)-th mark.
    std::size_t pos = 0, remaining = before + 1;
    std::size_t step = std::size_t{1} << (std::bit_width(tree_.size()) - 1);
    for (; step > 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] < remaining) {
        pos += step;
        remaining -= tree_[pos];
      }
    }
    return pos;  // 0-based index of the mark
  }

  static constexpr std::size_t npos = ~std::size_t{0};

 private:
  std::vector<std::size_t> tree_;
};

}  // namespace

Parse lz76(TextView w) { return greedy_copy_parse(w, true); }

Parse lz_no(TextView w) { return greedy_copy_parse(w, false); }

Parse lz_end(TextView w) {
  require_nonempty(w, "LZ parsing");
  const std::size_t n = w.size();
  // FM-index over R$ with R = reverse(w). Extending the candidate copy p to
  // the right is a backward-search step for reverse(p); p ends at text
  // position e iff reverse(p) starts at R position n-1-e.
  Text reversed(w.rbegin(), w.rend());
  const std::vector<Index> sa = suffix_array(as_span(reversed));
  const std::size_t rows = n + 1;  // row 0 is the suffix "$"
  std::vector<Index> row_of(n);
  for (std::size_t i = 0; i < n; ++i) row_of[sa[i]] = static_cast<Index>(i + 1);

  std::vector<char32_t> symbols(w.begin(), w.end());
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  auto code = [&](char32_t c) {
    return static_cast<std::size_t>(std::lower_bound(symbols.begin(), symbols.end(), c) -
                                    symbols.begin());
  };
  // occ_rows[c] lists the BWT rows holding symbol c; first_row[c] = C[c].
  std::vector<std::vector<Index>> occ_rows(symbols.size());
  std::vector<std::size_t> first_row(symbols.size() + 1, 1);
  occ_rows[code(reversed[n - 1])].push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sa[i] > 0) occ_rows[code(reversed[sa[i] - 1])].push_back(static_cast<Index>(i + 1));
  }
  for (std::size_t c = 0; c < symbols.size(); ++c) {
    first_row[c + 1] = first_row[c] + occ_rows[c].size();
  }
  auto occ = [&](std::size_t c, std::size_t row_end) {  // occurrences in rows [0, row_end)
    const auto& v = occ_rows[c];
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), row_end) - v.begin());
  };

  MarkedRanks marks(rows);
  Parse parse;
  std::size_t s = 0;
  while (s < n) {
    std::size_t lo = 0, hi = rows - 1;  // current backward-search range
    std::size_t len = 0, best = 0, best_row = MarkedRanks::npos;
    // p must end at a boundary e <= s-1, so |p| <= s.
    while (s + len < n && len < s) {
      const std::size_t c = code(w[s + len]);
      lo = first_row[c] + occ(c, lo);
      hi = first_row[c] + occ(c, hi + 1);
      if (lo >= hi) break;
      --hi;
      ++len;
      const std::size_t row = marks.first_in(lo, hi);
      if (row != MarkedRanks::npos) {
        best = len;
        best_row = row;
      }
    }
    Phrase ph;
    ph.start = s + 1;
    ph.copy_length = best;
    if (best > 0) {
      // Row r holds the suffix of R starting at sa[r-1] = n-1-e.
      ph.kind = Phrase::Kind::kEndCopy;
      ph.source = n - sa[best_row - 1];  // 1-based e
    } else {
      ph.kind = Phrase::Kind::kLiteral;
    }
    if (s + best < n) {
      ph.symbol = w[s + best];
      ph.has_trailing = true;
      ph.length = best + 1;
      if (best == 0) ph.kind = Phrase::Kind::kLiteral;
    } else {
      ph.length = best;
    }
    parse.phrases.push_back(ph);
    s += ph.length;
    marks.mark(row_of[n - s]);  // boundary e = s-1 -> R position n-s
  }
  return parse;
}

Text replay(const Parse& parse) {
  Text out;
  for (const Phrase& ph : parse.phrases) {
    if (ph.start != out.size() + 1) throw ContractViolation("phrases do not tile the text");
    switch (ph.kind) {
      case Phrase::Kind::kLiteral:
        if (ph.length != 1) throw ContractViolation("literal phrase must have length 1");
        out.push_back(ph.symbol);
        break;
      case Phrase::Kind::kCopy:
        if (ph.source < 1 || ph.source >= ph.start) {
          throw ContractViolation("copy source must precede the phrase");
        }
        for (std::uint64_t k = 0; k < ph.length; ++k) out.push_back(out[ph.source - 1 + k]);
        break;
      case Phrase::Kind::kEndCopy: {
        if (ph.source < ph.copy_length || ph.source >= ph.start) {
          throw ContractViolation("end-aligned source out of range");
        }
        const std::uint64_t from = ph.source - ph.copy_length;
        for (std::uint64_t k = 0; k < ph.copy_length; ++k) out.push_back(out[from + k]);
        if (ph.has_trailing) out.push_back(ph.symbol);
        break;
      }
    }
  }
  return out;
}

}  // namespace repetilab
