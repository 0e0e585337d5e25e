#pragma once

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "repetilab/core_model.hpp"
#include "repetilab/lsys_engine.hpp"

namespace repetilab {

// Dependencies between the extraction tokens written in a NU-system:
// u -> v when v appears in the rule of a symbol reachable from u.sym in
// fewer than u.level rewriting steps.
struct ExtractionGraph {
  std::vector<Extract> nodes;               // sorted, distinct
  std::vector<std::vector<std::size_t>> edges;

  static ExtractionGraph build(const NUSystem& system);
  // A dependency cycle as a token sequence t0 -> t1 -> ... -> t0 (t0 not
  // repeated at the end), or nullopt when the graph is acyclic.
  std::optional<std::vector<Extract>> find_cycle() const;
};

std::string describe_token(const Alphabet& alphabet, const Extract& token);

// Structural checks plus acyclicity; a cycle is reported as
// "extraction cycle: a(2)[1:1] -> a(2)[1:1]".
ValidationResult validate_nu(const NUSystem& system);

// Evaluates one NU-system. Resolved extractions are memoized per token
// unless memoization is disabled; the evaluator is not thread-safe.
class NUEvaluator {
 public:
  // Throws ContractViolation when the system fails validate_nu.
  explicit NUEvaluator(const NUSystem& system, bool memoize = true);

  // τ(E^k(a))[i:j] for token a(k)[i:j].
  const Word& resolve(const Extract& token);
  Word generate();
  Word generate_slice(std::uint64_t i, std::uint64_t j);

  std::size_t memo_size() const { return memo_.size(); }
  std::uint64_t resolutions() const { return resolutions_; }

 private:
  struct Frame;

  void emit(const TokenSeq& roots, std::uint64_t t, std::uint64_t lo, std::uint64_t hi, Word& out);
  void push_tokens(const TokenSeq& seq, std::uint64_t t, std::uint64_t lo, std::uint64_t hi,
                   std::vector<Frame>& stack);
  std::uint64_t seq_length(const TokenSeq& seq, std::uint64_t t);

  NUSystem system_;
  bool memoize_;
  LengthTable table_;
  std::map<Extract, Word> memo_;
  std::deque<Word> scratch_;  // results kept alive when memoization is off
  std::uint64_t resolutions_ = 0;
};

Word resolve_extraction(const NUSystem& system, const Extract& token);
Word nu_generate(const NUSystem& system);

}  // namespace repetilab
