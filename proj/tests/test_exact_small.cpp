#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "repetilab/error.hpp"
#include "repetilab/exact_small.hpp"
#include "repetilab/lsys_engine.hpp"

using namespace repetilab;

namespace {

Text binary(std::uint32_t bits, std::size_t len, char32_t zero = U'0') {
  Text w(len, zero);
  for (std::size_t i = 0; i < len; ++i) w[i] = zero + ((bits >> i) & 1U);
  return w;
}

// Position graph check written independently: follow sources from every
// position for at most n steps.
bool acyclic(const std::vector<int>& src) {
  const std::size_t n = src.size();
  for (std::size_t p = 0; p < n; ++p) {
    int x = static_cast<int>(p);
    std::size_t steps = 0;
    while (src[x] >= 0 && steps <= n) x = src[x], ++steps;
    if (steps > n) return false;
  }
  return true;
}

// Fewest phrases over every tiling and every source assignment.
std::size_t oracle_b(const Text& w) {
  const std::size_t n = w.size();
  std::vector<int> src(n, -1);
  std::size_t best = n;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t pos, std::size_t used) {
    if (used >= best) return;
    if (pos == n) {
      if (acyclic(src)) best = used;
      return;
    }
    go(pos + 1, used + 1);  // explicit symbol
    for (std::size_t len = 2; pos + len <= n; ++len) {
      for (std::size_t s = 0; s + len <= n; ++s) {
        if (s == pos || w.compare(s, len, w, pos, len) != 0) continue;
        for (std::size_t k = 0; k < len; ++k) src[pos + k] = static_cast<int>(s + k);
        go(pos + len, used + 1);
        for (std::size_t k = 0; k < len; ++k) src[pos + k] = -1;
      }
    }
  };
  go(0, 0);
  return best;
}

Text expand_text(const std::vector<Text>& rules, const std::vector<char32_t>& coding,
                 const std::vector<char32_t>& names, Text w, std::uint64_t d, std::size_t cap) {
  auto index = [&](char32_t c) { return std::find(names.begin(), names.end(), c) - names.begin(); };
  for (std::uint64_t t = 0; t < d; ++t) {
    Text next;
    for (char32_t c : w) next += rules[index(c)];
    if (next.size() > cap) next.resize(cap);  // later prefixes depend only on this one
    w = std::move(next);
  }
  for (auto& c : w) c = coding[index(c)];
  return w;
}

// Smallest size of a system over chars(w) plus fresh symbols that
// generates w, by plain enumeration; 0 when none fits in size_max.
std::uint64_t oracle_l(const Text& w, std::size_t sigma_max, std::uint64_t size_max) {
  std::vector<char32_t> targets;
  for (char32_t c : w) {
    if (std::find(targets.begin(), targets.end(), c) == targets.end()) targets.push_back(c);
  }
  const std::uint64_t d_max = w.size() * w.size();
  std::uint64_t best = 0;
  for (std::size_t sigma = targets.size(); sigma <= sigma_max; ++sigma) {
    std::vector<char32_t> names = targets;
    for (char32_t c = U'P'; names.size() < sigma; ++c) names.push_back(c);
    // Every word over names of length 1..5 as a candidate rule or axiom.
    std::vector<Text> words;
    for (std::size_t len = 1; len <= 5; ++len) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < len; ++i) count *= sigma;
      for (std::size_t code = 0; code < count; ++code) {
        Text t;
        for (std::size_t i = 0, x = code; i < len; ++i, x /= sigma) t.push_back(names[x % sigma]);
        words.push_back(t);
      }
    }
    std::vector<Text> rules(sigma);
    std::vector<char32_t> coding(sigma);
    std::function<void(std::size_t, std::uint64_t)> pick_rules;
    std::function<void(std::size_t, std::uint64_t)> pick_coding = [&](std::size_t a, std::uint64_t size) {
      if (a == sigma) {
        for (const Text& axiom : words) {
          if (axiom.size() > 2) continue;
          const std::uint64_t total = size + axiom.size() + sigma + 2;
          if (total > size_max || (best && total >= best)) continue;
          for (std::uint64_t d = 0; d <= d_max; ++d) {
            const Text out = expand_text(rules, coding, names, axiom, d, w.size());
            if (out.size() >= w.size() && out.substr(0, w.size()) == w) {
              best = total;
              break;
            }
          }
        }
        return;
      }
      for (char32_t c : targets) {
        coding[a] = c;
        pick_coding(a + 1, size);
      }
    };
    pick_rules = [&](std::size_t a, std::uint64_t size) {
      if (a == sigma) {
        pick_coding(0, size);
        return;
      }
      for (const Text& r : words) {
        if (size + r.size() + 1 + sigma + 2 > size_max) continue;
        rules[a] = r;
        pick_rules(a + 1, size + r.size());
      }
    };
    pick_rules(0, 0);
  }
  return best;
}

}  // namespace

TEST_CASE("decodability examples") {
  BmsWitness mutual;
  mutual.phrases = {{1, 2, 3, 0}, {3, 2, 1, 0}};
  CHECK_FALSE(bms_decodable(U"abab", mutual));

  BmsWitness chain;
  chain.phrases = {{1, 1, std::nullopt, U'a'}, {2, 3, 1, 0}};
  CHECK(bms_decodable(U"aaaa", chain));

  BmsWitness explicit_only;
  for (std::uint64_t i = 1; i <= 3; ++i) explicit_only.phrases.push_back({i, 1, std::nullopt, U"xyz"[i - 1]});
  CHECK(bms_decodable(U"xyz", explicit_only));

  BmsWitness gap;
  gap.phrases = {{1, 1, std::nullopt, U'a'}};
  CHECK_THROWS_AS(bms_decodable(U"aa", gap), ContractViolation);

  CHECK_THROWS_AS(to_bms(lz_end(U"aaaa")), ContractViolation);
}

TEST_CASE("smallest macro-scheme examples") {
  CHECK(smallest_bms(U"a").b() == 1);
  CHECK(smallest_bms(U"aaaa").b() == 2);
  CHECK(smallest_bms(U"abab").b() == 3);
  CHECK_THROWS_AS(smallest_bms(Text(13, U'a')), LimitExceeded);
  CHECK_THROWS_AS(smallest_bms(U"abcabcabcab", 12, 10), LimitExceeded);
}

TEST_CASE("smallest macro-scheme matches exhaustive search") {
  for (std::size_t len = 1; len <= 7; ++len) {
    for (std::uint32_t bits = 0; bits < (1U << len); ++bits) {
      const Text w = binary(bits, len);
      CAPTURE(bits);
      const BmsWitness best = smallest_bms(w);
      REQUIRE(bms_decodable(w, best));
      REQUIRE(best.b() == oracle_b(w));
    }
  }
  for (const Text w : {Text(U"abcab"), Text(U"aabca"), Text(U"abcba")}) {
    CHECK(smallest_bms(w).b() == oracle_b(w));
  }
}

TEST_CASE("bounded L-system search examples") {
  auto one = bounded_smallest_lsystem(U"a");
  REQUIRE(one);
  CHECK(one->size == 5);

  LSystemBudget unary;
  unary.sigma_max = 1;
  auto four = bounded_smallest_lsystem(U"aaaa", unary);
  REQUIRE(four);
  CHECK(four->size == 6);
  CHECK(four->system.alphabet.render(generate(four->system)) == U"aaaa");

  LSystemBudget two;
  two.sigma_max = 2;
  auto ab = bounded_smallest_lsystem(U"ab", two);
  REQUIRE(ab);
  CHECK(ab->size == 8);

  LSystemBudget tight;
  tight.size_max = 6;
  CHECK_FALSE(bounded_smallest_lsystem(U"abc", tight).has_value());

  LSystemBudget capped;
  capped.node_cap = 5;
  CHECK_THROWS_AS(bounded_smallest_lsystem(U"abba", capped), LimitExceeded);
}

TEST_CASE("bounded L-system search matches plain enumeration") {
  LSystemBudget budget;
  budget.sigma_max = 2;
  budget.size_max = 9;
  for (std::size_t len = 1; len <= 4; ++len) {
    for (std::uint32_t bits = 0; bits < (1U << len); ++bits) {
      const Text w = binary(bits, len, U'a');
      CAPTURE(bits);
      CAPTURE(len);
      const auto found = bounded_smallest_lsystem(w, budget);
      const std::uint64_t want = oracle_l(w, 2, 9);
      if (!found) {
        REQUIRE(want == 0);
        continue;
      }
      REQUIRE(found->size == want);
      REQUIRE(validate_lsystem(found->system).ok());
      REQUIRE(system_size(found->system) == found->size);
      REQUIRE(found->system.alphabet.render(generate(found->system)) == w);
    }
  }
}

TEST_CASE("brute references") {
  CHECK(brute_substrings(U"abab").counts == std::vector<std::uint64_t>{2, 2, 2, 1});
  CHECK(brute_substrings(U"aaaa").counts == std::vector<std::uint64_t>{1, 1, 1, 1});
  CHECK(brute_substrings(U"a").counts == std::vector<std::uint64_t>{1});
  CHECK(brute_bwt(U"abab") == U"bbaa");
  CHECK(brute_bwt(U"aaa") == U"aaa");
  CHECK(brute_bwt(U"ab") == U"ba");
}
