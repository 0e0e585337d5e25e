#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "repetilab/core_model.hpp"

namespace repetilab {

// Saturating expansion lengths: at(a, t) = min(|φ^t(a)|, cap).
//
// A production may also carry a fixed number of inert symbols (resolved
// extraction tokens of a NU-system); they contribute their count at every
// level and are not rewritten.
class LengthTable {
 public:
  static constexpr std::uint64_t kBigCap = std::uint64_t{1} << 63;

  LengthTable(const std::vector<Word>& rules, std::uint64_t cap);
  LengthTable(std::vector<Word> plain_children, std::vector<std::uint64_t> inert_counts,
              std::uint64_t cap);

  std::uint64_t cap() const { return cap_; }
  std::size_t sigma() const { return children_.size(); }
  // Tabulates levels up to and including t. Once two consecutive levels
  // agree every later level equals them and no more rows are stored.
  void ensure_level(std::uint64_t t);
  std::uint64_t at(SymbolId a, std::uint64_t t) const {
    const std::uint64_t row = t < rows() ? t : rows() - 1;
    return data_[row * sigma() + a];
  }
  bool saturated(SymbolId a, std::uint64_t t) const { return at(a, t) >= cap_; }

  static std::uint64_t add(std::uint64_t x, std::uint64_t y, std::uint64_t cap) {
    return (x >= cap || y >= cap - x) ? cap : x + y;
  }

 private:
  std::vector<Word> children_;
  std::vector<std::uint64_t> inert_;
  std::uint64_t cap_;
  std::uint64_t rows() const { return data_.size() / sigma(); }

  std::vector<std::uint64_t> data_;  // level-major
  bool stable_ = false;
};

inline constexpr std::uint64_t kDefaultExpansionGuard = 10'000'000;

// τ(φ^d(axiom)) by naive iterated rewriting. Throws LimitExceeded when
// any level grows past `guard` symbols.
Word expand_full(const LSystem& system, std::uint64_t guard = kDefaultExpansionGuard);

// Naive expansion of a single symbol for `levels` steps, coded.
Word expand_symbol_full(const LSystem& system, SymbolId a, std::uint64_t levels,
                        std::uint64_t guard = kDefaultExpansionGuard);

// τ(φ^d(axiom))[1:n] without materializing intermediate levels.
Word generate(const LSystem& system);

// τ(φ^d(axiom))[i:j], 1-based inclusive, j <= n.
Word generate_slice(const LSystem& system, std::uint64_t i, std::uint64_t j);

// τ(φ^t(a))[i:j], 1-based inclusive.
Word extract(const LSystem& system, SymbolId a, std::uint64_t t, std::uint64_t i,
             std::uint64_t j);

// τ(y)[1:m] for the fixed point y of a prolongable system.
Word fixed_point_prefix(const LSystem& system, std::uint64_t m);

// |φ^t(axiom)| when it is below 2^63, otherwise nullopt.
std::optional<std::uint64_t> expansion_length(const LSystem& system, std::uint64_t t);

}  // namespace repetilab
