#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "repetilab/core_model.hpp"
#include "repetilab/measures.hpp"

namespace repetilab {

// One phrase of a bidirectional macro-scheme. Positions are 1-based.
struct BmsPhrase {
  std::uint64_t start = 1;
  std::uint64_t length = 1;
  std::optional<std::uint64_t> source;  // copy start; absent for explicit symbols
  char32_t symbol = 0;                  // explicit symbol when `source` is absent
};

struct BmsWitness {
  std::vector<BmsPhrase> phrases;
  std::uint64_t b() const { return phrases.size(); }
};

// True iff the scheme reproduces w: every copy agrees with w and following
// source pointers from any position ends at an explicit symbol. Throws
// ContractViolation when the phrases do not tile w.
bool bms_decodable(TextView w, const BmsWitness& scheme);

// Literal phrases become explicit symbols; copy phrases keep their source.
// LZ-End parses are not macro-schemes phrase-for-phrase and are rejected.
BmsWitness to_bms(const Parse& parse);

inline constexpr std::uint64_t kDefaultBmsLimit = 12;
inline constexpr std::uint64_t kDefaultNodeCap = 100'000'000;

// Exact smallest macro-scheme by iterative deepening on the phrase count.
// Among minimum schemes returns the first in (length, source) lexicographic
// order. Refuses strings longer than `limit` with LimitExceeded.
BmsWitness smallest_bms(TextView w, std::uint64_t limit = kDefaultBmsLimit,
                        std::uint64_t node_cap = kDefaultNodeCap);

struct LSystemBudget {
  std::uint64_t sigma_max = 3;
  std::uint64_t size_max = 12;
  std::optional<std::uint64_t> d_max;  // defaults to |w|^2
  std::uint64_t axiom_max = 2;
  std::uint64_t node_cap = kDefaultNodeCap;
};

struct LSystemSearchResult {
  LSystem system;
  std::uint64_t size = 0;
  std::uint64_t nodes = 0;  // candidate (rules, axiom) pairs examined
};

// Enumerates systems by increasing size within the budget and returns the
// first that generates w. Alphabets always contain the symbols of w; extra
// symbols are named by unused scalars. Throws LimitExceeded past node_cap.
std::optional<LSystemSearchResult> bounded_smallest_lsystem(TextView w,
                                                            const LSystemBudget& budget = {});

// Set-based reference implementations.
ComplexityProfile brute_substrings(TextView w);
Text brute_bwt(TextView w);

}  // namespace repetilab
