#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace repetilab {

using SymbolId = std::uint32_t;
using Word = std::vector<SymbolId>;

// Ordered set of symbols. Ids are 0..size()-1; each id renders as one
// Unicode scalar.
class Alphabet {
 public:
  Alphabet() = default;
  // Throws ContractViolation on an empty list or duplicate scalars.
  explicit Alphabet(std::vector<char32_t> scalars);
  // Convenience for ASCII alphabets: one symbol per character.
  static Alphabet from_ascii(std::string_view chars);

  std::size_t size() const { return scalars_.size(); }
  char32_t scalar(SymbolId id) const { return scalars_.at(id); }
  const std::vector<char32_t>& scalars() const { return scalars_; }
  std::optional<SymbolId> find(char32_t scalar) const;
  // Throws ContractViolation for scalars outside the alphabet.
  SymbolId id(char32_t scalar) const;

  // Maps each character of `text` to its id.
  Word word(std::u32string_view text) const;
  Word word_ascii(std::string_view text) const;
  std::u32string render(const Word& w) const;
  // Renders ids, including out-of-range ones as "#id", for diagnostics.
  std::string describe(SymbolId id) const;

  bool operator==(const Alphabet& other) const { return scalars_ == other.scalars_; }

 private:
  std::vector<char32_t> scalars_;
  std::unordered_map<char32_t, SymbolId> index_;
};

struct LSystem {
  Alphabet alphabet;
  std::vector<Word> rules;        // rules[a] is the right-hand side of a
  std::vector<SymbolId> coding;   // coding[a]
  Word axiom;
  std::uint64_t level = 0;
  std::uint64_t length = 1;

  std::size_t sigma() const { return alphabet.size(); }
};

// One plain symbol inside a NU-system rule or axiom.
struct Plain {
  SymbolId sym = 0;
  bool operator==(const Plain&) const = default;
};

// Extraction token a(k)[i:j]: level k expansion of `sym`, 1-based
// inclusive slice [from, to], coded.
struct Extract {
  SymbolId sym = 0;
  std::uint64_t level = 0;
  std::uint64_t from = 1;
  std::uint64_t to = 1;

  std::uint64_t width() const { return to - from + 1; }
  bool operator==(const Extract&) const = default;
  auto operator<=>(const Extract&) const = default;
};

using NUToken = std::variant<Plain, Extract>;
using TokenSeq = std::vector<NUToken>;

struct NUSystem {
  Alphabet alphabet;
  std::vector<TokenSeq> rules;
  std::vector<SymbolId> coding;
  TokenSeq axiom;
  std::uint64_t level = 0;
  std::uint64_t length = 1;

  std::size_t sigma() const { return alphabet.size(); }
};

std::vector<SymbolId> identity_coding(std::size_t sigma);

// Wraps every symbol of an L-system as a Plain token.
NUSystem to_nu(const LSystem& system);
TokenSeq plain_tokens(const Word& w);

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationResult validate_lsystem(const LSystem& system);

// Checks the structural invariants shared with L-systems plus token index
// bounds. Cycle detection over extraction tokens lives in nu_engine.
ValidationResult validate_nu_structure(const NUSystem& system);

// size(rules) + |axiom| + |alphabet| + 2.
std::uint64_t system_size(const LSystem& system);
// As system_size, with every Extract token counted as 4 symbols.
std::uint64_t nu_size(const NUSystem& system);

std::uint64_t rules_width(const LSystem& system);

struct VariantClasses {
  bool expanding = false;
  bool uniform = false;
  bool prolongable = false;
  std::optional<SymbolId> prolongable_on;
  bool identity_coding = false;
  bool class_lm = false;
  bool class_ld = false;
  bool class_le = false;
  bool class_lu = false;
  bool class_lp = false;
  bool class_la = false;
};

VariantClasses classify(const LSystem& system);

// e.g. "prolongable(c) identity-coding ℓ_m ℓ_d ℓ_p".
std::string describe(const VariantClasses& classes, const Alphabet& alphabet);

}  // namespace repetilab
