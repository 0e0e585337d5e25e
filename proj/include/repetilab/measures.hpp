#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "repetilab/rational.hpp"

namespace repetilab {

// Texts are sequences of Unicode scalars; symbol order is code point order.
using Text = std::u32string;
using TextView = std::u32string_view;

struct ComplexityProfile {
  std::vector<std::uint64_t> counts;  // counts[k-1] = P(k), distinct length-k substrings
  Rational delta;                     // max_k P(k)/k
  std::uint64_t delta_at = 0;         // smallest k attaining the maximum

  std::uint64_t at(std::uint64_t k) const { return counts.at(k - 1); }
};

// Suffix array + LCP histogram, O(n log n).
ComplexityProfile substring_complexity(TextView w);
Rational delta(TextView w);

enum class BwtMode { kRotations, kSentinel };

// Terminator emitted by sentinel-mode BWT; lies outside the Unicode range
// so it never collides with input symbols.
inline constexpr char32_t kBwtSentinel = 0x110000;

// Rotations mode: last column of the sorted cyclic rotations (length n).
// Sentinel mode: BWT of w$ with $ smaller than every symbol (length n+1).
Text bwt(TextView w, BwtMode mode = BwtMode::kRotations);
// Inverts a sentinel-mode BWT.
Text inverse_bwt(TextView transformed);

std::uint64_t rle_runs(TextView x);
std::uint64_t r_measure(TextView w, BwtMode mode = BwtMode::kRotations);

const char* to_string(BwtMode mode);
BwtMode parse_bwt_mode(std::string_view name);

struct Phrase {
  enum class Kind {
    kLiteral,  // one explicit symbol
    kCopy,     // copy of `length` symbols starting at `source`
    kEndCopy,  // copy of `copy_length` symbols ending at `source`, then an optional literal
  };

  Kind kind = Kind::kLiteral;
  std::uint64_t start = 0;   // 1-based
  std::uint64_t length = 1;
  char32_t symbol = 0;       // literal, or the trailing literal of kEndCopy
  std::uint64_t source = 0;  // 1-based start (kCopy) or end (kEndCopy)
  std::uint64_t copy_length = 0;
  bool has_trailing = false;
};

struct Parse {
  std::vector<Phrase> phrases;
  std::size_t size() const { return phrases.size(); }
};

// Greedy LZ76: longest prefix of the remainder with an occurrence starting
// at an earlier position (overlap allowed).
Parse lz76(TextView w);
// Greedy non-overlapping LZ: the source must end before the phrase starts.
Parse lz_no(TextView w);
// LZ-End: longest prefix ending at a previous phrase boundary, plus one
// explicit symbol (omitted when the copy reaches the end of w).
Parse lz_end(TextView w);

// Rebuilds the text by replaying phrases left to right. Throws
// ContractViolation if a phrase references text not yet available.
Text replay(const Parse& parse);

}  // namespace repetilab
