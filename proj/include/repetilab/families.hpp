#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "repetilab/core_model.hpp"
#include "repetilab/measures.hpp"

namespace repetilab::families {

// ({a,b,c}, {a→a, b→ab, c→cb}, id, c, d+1, 1 + d(d+1)/2 + d).
LSystem lemma1_system(std::uint64_t d);
// Prefix of the fixed point of lemma1_system's morphism from c.
Text lemma1_fixed_point_prefix(std::uint64_t n);

// Number of ones in the prefix of length n of the power-of-two
// characteristic sequence: floor(log2 n) + 1.
std::uint64_t kociumaka_ones(std::uint64_t n);
// Characteristic sequence of {1, 2, 4, ...} cut at n, with the k-th one
// moved forward by shifts[k-1] < 2^(k-1) positions (staying within n).
Text kociumaka_string(std::uint64_t n, const std::vector<std::uint64_t>& shifts);
Text kociumaka_string(std::uint64_t n);  // zero shifts
// Uniformly drawn valid shift vector.
std::vector<std::uint64_t> random_shifts(std::uint64_t n, std::mt19937_64& rng);
Text prefixed_kociumaka(std::uint64_t n, const std::vector<std::uint64_t>& shifts);
Text prefixed_kociumaka(std::uint64_t n);

// ({0,1}, {0→0, 1→01}, id, 1, n, n+1) generating 0^n 1.
LSystem zeros_one_system(std::uint64_t n);
// ({0,1}, {0→00, 1→11}, id, 01, n, 2^n+1) generating 0^(2^n) 1.
LSystem uniform_pow2_system(std::uint64_t n);
// a-prolongable system of size O(sqrt n) generating 0^n 1 at level 3.
LSystem sqrt_system(std::uint64_t n);
// ({0,1,2}, {0→00, 1→21, 2→2}, {0→0, 1→1, 2→0}, 10, n, 2^n+n+1)
// generating 0^n 1 0^(2^n).
LSystem expanding_counterexample_system(std::uint64_t n);
// NU-system of size 5k+23 minus 4 per empty gap, generating
// x · lemma1_fixed_point_prefix(|x|) for a binary x with k ones.
NUSystem theorem4_nu(TextView x);

// System-free constructions of the same strings, for cross-checks.
namespace direct {
Text lemma1_string(std::uint64_t d);
Text zeros_one(std::uint64_t n);
Text zeros_one_zeros(std::uint64_t n);  // 0^n 1 0^(2^n)
}  // namespace direct

using FamilyParams = std::map<std::string, std::uint64_t>;
using FamilyMember = std::variant<Text, LSystem, NUSystem>;

struct FamilyItem {
  std::string label;
  FamilyMember member;
};

// Names: lemma1, kociumaka, prefixed-kociumaka, zeros-one, uniform-pow2,
// sqrt, expanding, theorem4. Ranges use "from"/"to" (inclusive) or a
// single value key; seeded families take "seed" and "count".
std::vector<FamilyItem> family_iter(const std::string& name, const FamilyParams& params);
std::vector<std::string> family_names();

// The string a member denotes, generated through the relevant engine.
Text realize(const FamilyMember& member);

}  // namespace repetilab::families
