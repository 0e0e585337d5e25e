#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <random>

#include "repetilab/error.hpp"
#include "repetilab/families.hpp"
#include "repetilab/lsys_engine.hpp"
#include "repetilab/nu_engine.hpp"

using namespace repetilab;

namespace {

constexpr std::size_t kCap = 20000;

// Materializes tokens level by level; nullopt once anything exceeds kCap.
std::optional<Word> naive_tokens(const NUSystem& sys, TokenSeq seq, std::uint64_t steps);

std::optional<Word> naive_resolve(const NUSystem& sys, const Extract& e) {
  auto w = naive_tokens(sys, {Plain{e.sym}}, e.level);
  if (!w || e.to > w->size()) return std::nullopt;
  return Word(w->begin() + static_cast<std::ptrdiff_t>(e.from - 1),
              w->begin() + static_cast<std::ptrdiff_t>(e.to));
}

std::optional<Word> naive_tokens(const NUSystem& sys, TokenSeq seq, std::uint64_t steps) {
  for (std::uint64_t t = 0; t < steps; ++t) {
    TokenSeq next;
    for (const auto& tok : seq) {
      if (const auto* p = std::get_if<Plain>(&tok)) {
        next.insert(next.end(), sys.rules[p->sym].begin(), sys.rules[p->sym].end());
      } else {
        next.push_back(tok);
      }
    }
    if (next.size() > kCap) return std::nullopt;
    seq = std::move(next);
  }
  Word out;
  for (const auto& tok : seq) {
    if (const auto* p = std::get_if<Plain>(&tok)) {
      out.push_back(sys.coding[p->sym]);
    } else {
      auto sub = naive_resolve(sys, std::get<Extract>(tok));
      if (!sub) return std::nullopt;
      out.insert(out.end(), sub->begin(), sub->end());
    }
    if (out.size() > kCap) return std::nullopt;
  }
  return out;
}

NUSystem small_nu(const char* symbols) {
  NUSystem sys;
  sys.alphabet = Alphabet::from_ascii(symbols);
  sys.coding = identity_coding(sys.alphabet.size());
  sys.level = 1;
  sys.length = 1;
  return sys;
}

}  // namespace

TEST_CASE("cycle detection") {
  NUSystem loop = small_nu("a");
  loop.rules = {{Extract{0, 2, 1, 1}}};
  loop.axiom = {Plain{0}};
  const auto v = validate_nu(loop);
  REQUIRE_FALSE(v.ok());
  CHECK(v.violations.back() == "extraction cycle: a(2)[1:1] -> a(2)[1:1]");
  CHECK_THROWS_AS(NUEvaluator{loop}, ContractViolation);

  NUSystem pair = small_nu("ab");
  pair.rules = {{Extract{1, 3, 1, 2}}, {Extract{0, 3, 1, 2}}};
  pair.axiom = {Plain{0}};
  const auto cycle = ExtractionGraph::build(pair).find_cycle();
  REQUIRE(cycle);
  CHECK(cycle->size() == 2);
  CHECK_FALSE(validate_nu(pair).ok());

  // Level bounds reachability: a(1) only looks at a's own rule.
  NUSystem bounded = small_nu("ab");
  bounded.rules = {plain_tokens({0, 1}), {Extract{0, 1, 1, 1}}};
  bounded.axiom = {Extract{0, 1, 1, 2}};
  bounded.length = 2;
  CHECK(validate_nu(bounded).ok());
}

TEST_CASE("theorem4 systems validate and an injected loop does not") {
  for (std::uint64_t n = 16; n <= 4096; n *= 4) {
    std::mt19937_64 rng(n);
    NUSystem sys = families::theorem4_nu(families::kociumaka_string(n, families::random_shifts(n, rng)));
    CHECK(validate_nu(sys).ok());
    const SymbolId b = sys.alphabet.id(U'b');
    sys.rules[b].emplace_back(Extract{b, 2, 1, 1});
    CHECK_FALSE(validate_nu(sys).ok());
  }
}

TEST_CASE("resolution examples") {
  const NUSystem t4 = families::theorem4_nu(families::kociumaka_string(16));
  NUEvaluator eval(t4);
  const SymbolId zero = t4.alphabet.id(U'0');
  CHECK(t4.alphabet.render(eval.resolve(Extract{zero, 16, 1, 7})) == U"0000000");
  const SymbolId c = t4.alphabet.id(U'c');
  CHECK(t4.alphabet.render(eval.resolve(Extract{c, 16, 1, 16})) ==
        families::lemma1_fixed_point_prefix(16));
  CHECK(t4.alphabet.render(eval.resolve(Extract{c, 0, 1, 1})) == U"c");
  CHECK_THROWS_AS(eval.resolve(Extract{c, 2, 1, 9}), EvalError);

  NUSystem sys = small_nu("01");
  sys.rules = {plain_tokens({0, 0}), plain_tokens({1})};
  sys.axiom = {Extract{0, 3, 2, 5}};
  sys.length = 4;
  CHECK_FALSE(validate_nu(sys).ok());  // slice end 5 exceeds n = 4
  sys.axiom.emplace_back(Plain{1});
  sys.length = 5;
  CHECK(sys.alphabet.render(nu_generate(sys)) == U"00001");
}

TEST_CASE("theorem4 generation") {
  CHECK(families::realize(families::theorem4_nu(U"11")) == U"11cb");
  CHECK(families::realize(families::theorem4_nu(U"0")) == U"0c");
  const std::u32string x = families::kociumaka_string(16);
  CHECK(families::realize(families::theorem4_nu(x)) == x + families::lemma1_fixed_point_prefix(16));
}

TEST_CASE("plain NU systems match the L-system engine") {
  for (std::uint64_t d : {1, 4, 9}) {
    const LSystem sys = families::lemma1_system(d);
    CHECK(nu_generate(to_nu(sys)) == generate(sys));
    CHECK(nu_size(to_nu(sys)) == system_size(sys));
  }
}

TEST_CASE("random NU systems agree with naive evaluation") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int attempt = 0; attempt < 4000 && checked < 300; ++attempt) {
    const int sigma = std::uniform_int_distribution<int>(1, 3)(rng);
    NUSystem sys = small_nu(std::string("xyz").substr(0, sigma).c_str());
    std::uniform_int_distribution<SymbolId> sym(0, sigma - 1);
    std::uniform_int_distribution<int> len(1, 3), lvl(0, 4), coin(0, 3);
    auto token = [&]() -> NUToken {
      if (coin(rng) == 0) {
        const std::uint64_t from = std::uniform_int_distribution<std::uint64_t>(1, 3)(rng);
        return Extract{sym(rng), static_cast<std::uint64_t>(lvl(rng)), from,
                       from + std::uniform_int_distribution<std::uint64_t>(0, 2)(rng)};
      }
      return Plain{sym(rng)};
    };
    for (int a = 0; a < sigma; ++a) {
      TokenSeq rhs;
      for (int k = len(rng); k > 0; --k) rhs.push_back(token());
      sys.rules.push_back(rhs);
      sys.coding[a] = sym(rng);
    }
    for (int k = len(rng); k > 0; --k) sys.axiom.push_back(token());
    sys.level = lvl(rng);
    sys.length = 8;
    if (!validate_nu(sys).ok()) continue;
    const auto oracle = naive_tokens(sys, sys.axiom, sys.level);
    if (!oracle || oracle->empty()) continue;
    sys.length = std::uniform_int_distribution<std::uint64_t>(1, oracle->size())(rng);
    if (!validate_nu(sys).ok()) continue;
    CAPTURE(attempt);
    const Word want(oracle->begin(), oracle->begin() + static_cast<std::ptrdiff_t>(sys.length));
    NUEvaluator memo(sys, true), plain(sys, false);
    REQUIRE(memo.generate() == want);
    REQUIRE(plain.generate() == want);
    const std::uint64_t i = std::uniform_int_distribution<std::uint64_t>(1, sys.length)(rng);
    REQUIRE(memo.generate_slice(i, sys.length) ==
            Word(want.begin() + static_cast<std::ptrdiff_t>(i - 1), want.end()));
    ++checked;
  }
  CHECK(checked >= 100);
}
