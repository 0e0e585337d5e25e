#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "repetilab/error.hpp"
#include "repetilab/families.hpp"
#include "repetilab/lsys_engine.hpp"

using namespace repetilab;

namespace {

// Rewrites the whole word `steps` times, then applies the coding.
Word naive(const LSystem& sys, Word w, std::uint64_t steps) {
  for (std::uint64_t t = 0; t < steps; ++t) {
    Word next;
    for (SymbolId s : w) next.insert(next.end(), sys.rules[s].begin(), sys.rules[s].end());
    w = std::move(next);
  }
  for (auto& s : w) s = sys.coding[s];
  return w;
}

std::u32string text(const LSystem& sys, const Word& w) { return sys.alphabet.render(w); }

LSystem ab_system() {
  LSystem sys;
  sys.alphabet = Alphabet::from_ascii("ab");
  sys.rules = {sys.alphabet.word_ascii("ab"), sys.alphabet.word_ascii("b")};
  sys.coding = {0, 1};
  sys.axiom = {0};
  sys.level = 3;
  sys.length = 4;
  return sys;
}

LSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> sigma_d(1, 4), len_d(1, 3), lvl(0, 8);
  for (;;) {
    LSystem sys;
    const int sigma = sigma_d(rng);
    sys.alphabet = Alphabet::from_ascii(std::string("wxyz").substr(0, sigma));
    std::uniform_int_distribution<SymbolId> sym(0, sigma - 1);
    for (int a = 0; a < sigma; ++a) {
      Word rhs(len_d(rng));
      for (auto& s : rhs) s = sym(rng);
      sys.rules.push_back(rhs);
      sys.coding.push_back(sym(rng));
    }
    sys.axiom.resize(len_d(rng));
    for (auto& s : sys.axiom) s = sym(rng);
    sys.level = lvl(rng);
    sys.length = 9;
    const auto full = expansion_length(sys, sys.level);
    if (!full || *full > 20000) continue;
    sys.length = std::uniform_int_distribution<std::uint64_t>(1, *full)(rng);
    if (validate_lsystem(sys).ok()) return sys;
  }
}

}  // namespace

TEST_CASE("expand_full examples") {
  LSystem lemma = families::lemma1_system(1);
  lemma.level = 1;
  lemma.length = 2;
  CHECK(text(lemma, expand_full(lemma)) == U"cb");
  lemma.level = 3;
  CHECK(text(lemma, expand_full(lemma)) == U"cbabaab");

  LSystem pow2 = families::uniform_pow2_system(3);
  CHECK(text(pow2, expand_full(pow2)) == U"0000000011111111");

  CHECK_THROWS_AS(expand_full(families::uniform_pow2_system(30), 1000), LimitExceeded);
}

TEST_CASE("generate examples") {
  CHECK(text(families::lemma1_system(2), generate(families::lemma1_system(2))) == U"cbabaa");
  CHECK(text(families::lemma1_system(1), generate(families::lemma1_system(1))) == U"cba");
  CHECK(text(families::zeros_one_system(4), generate(families::zeros_one_system(4))) == U"00001");
  CHECK(text(families::uniform_pow2_system(2), generate(families::uniform_pow2_system(2))) ==
        U"00001");

  LSystem one = families::lemma1_system(6);
  one.level = 1;  // level <= length^2
  one.length = 1;
  CHECK(text(one, generate(one)) == U"c");

  LSystem too_long = families::zeros_one_system(3);
  too_long.length = 10;
  CHECK_THROWS_AS(generate(too_long), EvalError);
}

TEST_CASE("extract examples") {
  const LSystem lemma = families::lemma1_system(2);
  CHECK(text(lemma, extract(lemma, lemma.alphabet.id(U'c'), 3, 2, 4)) == U"bab");
  CHECK(text(lemma, extract(lemma, lemma.alphabet.id(U'b'), 0, 1, 1)) == U"b");
  CHECK_THROWS_AS(extract(lemma, lemma.alphabet.id(U'c'), 3, 7, 8), EvalError);

  const LSystem exp = families::expanding_counterexample_system(40);
  const std::uint64_t far = std::uint64_t{1} << 40;
  CHECK(text(exp, extract(exp, exp.alphabet.id(U'0'), 40, far, far)) == U"0");

  const LSystem exp20 = families::expanding_counterexample_system(20);
  CHECK(text(exp20, generate_slice(exp20, 21, 21)) == U"1");
  CHECK(text(families::expanding_counterexample_system(3),
             generate(families::expanding_counterexample_system(3))) == U"000100000000");
}

TEST_CASE("fixed point prefixes") {
  const LSystem lemma = families::lemma1_system(1);
  CHECK(text(lemma, fixed_point_prefix(lemma, 7)) == U"cbabaab");
  CHECK(text(lemma, fixed_point_prefix(lemma, 1)) == U"c");
  CHECK(text(ab_system(), fixed_point_prefix(ab_system(), 4)) == U"abbb");
  CHECK_THROWS_AS(fixed_point_prefix(families::uniform_pow2_system(2), 3), ContractViolation);

  const Word long_prefix = fixed_point_prefix(lemma, 500);
  for (std::uint64_t m : {1, 2, 17, 250, 499}) {
    const Word p = fixed_point_prefix(lemma, m);
    CHECK(std::equal(p.begin(), p.end(), long_prefix.begin()));
  }
}

TEST_CASE("deep levels need no call stack") {
  const LSystem sys = families::zeros_one_system(200000);
  const Word w = generate(sys);
  CHECK(w.size() == 200001);
  CHECK(text(sys, Word(w.end() - 2, w.end())) == U"01");
}

TEST_CASE("random systems agree with naive rewriting") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 400; ++i) {
    const LSystem sys = random_system(rng);
    CAPTURE(i);
    Word oracle = naive(sys, sys.axiom, sys.level);
    REQUIRE(expand_full(sys) == oracle);
    oracle.resize(sys.length);
    REQUIRE(generate(sys) == oracle);

    // Length table in big-count mode matches materialized lengths.
    LengthTable table(sys.rules, LengthTable::kBigCap);
    table.ensure_level(sys.level);
    for (SymbolId a = 0; a < sys.sigma(); ++a) {
      for (std::uint64_t t = 0; t <= sys.level; ++t) {
        REQUIRE(table.at(a, t) == naive(sys, {a}, t).size());
      }
    }

    // Extraction over a partition rebuilds the full expansion of a symbol.
    const SymbolId a = static_cast<SymbolId>(i % sys.sigma());
    const Word full = naive(sys, {a}, sys.level);
    Word pieces;
    for (std::uint64_t lo = 1; lo <= full.size(); lo += 3) {
      const std::uint64_t hi = std::min<std::uint64_t>(lo + 2, full.size());
      const Word part = extract(sys, a, sys.level, lo, hi);
      pieces.insert(pieces.end(), part.begin(), part.end());
    }
    REQUIRE(pieces == full);
  }
}
