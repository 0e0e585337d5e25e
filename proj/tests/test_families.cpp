#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "repetilab/error.hpp"
#include "repetilab/families.hpp"
#include "repetilab/lsys_engine.hpp"

using namespace repetilab;
namespace fam = repetilab::families;

namespace {

Text zeros(std::size_t n) { return Text(n, U'0'); }

}  // namespace

TEST_CASE("lemma1 family") {
  CHECK(fam::realize(fam::lemma1_system(2)) == U"cbabaa");
  const LSystem d1 = fam::lemma1_system(1);
  CHECK(d1.level == 2);
  CHECK(d1.length == 3);
  CHECK(fam::realize(d1) == U"cba");
  CHECK(fam::lemma1_fixed_point_prefix(7) == U"cbabaab");
  CHECK(fam::lemma1_fixed_point_prefix(1) == U"c");
  CHECK(fam::lemma1_fixed_point_prefix(2) == U"cb");
  for (std::uint64_t d = 1; d <= 60; ++d) {
    const LSystem sys = fam::lemma1_system(d);
    REQUIRE(fam::realize(sys) == fam::direct::lemma1_string(d));
    REQUIRE(system_size(sys) == 11);
  }
}

TEST_CASE("kociumaka strings") {
  CHECK(fam::kociumaka_string(16) == U"1101000100000001");
  CHECK(fam::kociumaka_string(8, {0, 0, 1, 0}) == U"11001001");
  CHECK(fam::kociumaka_string(2, {0, 0}) == U"11");
  CHECK(fam::kociumaka_ones(16) == 5);
  CHECK_THROWS_AS(fam::kociumaka_string(8, {1, 0, 0, 0}), ContractViolation);
  CHECK_THROWS_AS(fam::kociumaka_string(8, {0, 0, 0}), ContractViolation);
  CHECK_THROWS_AS(fam::kociumaka_string(1), ContractViolation);

  std::mt19937_64 rng(3);
  for (std::uint64_t n = 2; n <= 3000; n += 37) {
    const auto shifts = fam::random_shifts(n, rng);
    const Text x = fam::kociumaka_string(n, shifts);
    REQUIRE(x.size() == n);
    REQUIRE(static_cast<std::uint64_t>(std::count(x.begin(), x.end(), U'1')) == fam::kociumaka_ones(n));
    for (std::uint64_t k = 1; k <= shifts.size(); ++k) {
      REQUIRE(shifts[k - 1] < (std::uint64_t{1} << (k - 1)));
      REQUIRE(x[(std::uint64_t{1} << (k - 1)) + shifts[k - 1] - 1] == U'1');
    }
  }
}

TEST_CASE("prefixed kociumaka") {
  CHECK(fam::prefixed_kociumaka(4) == U"00001101");
  CHECK(fam::prefixed_kociumaka(2) == U"0011");
  for (std::uint64_t n = 2; n < 100; n += 7) CHECK(fam::prefixed_kociumaka(n).size() == 2 * n);
}

TEST_CASE("zeros-one witnesses") {
  CHECK(fam::realize(fam::zeros_one_system(4)) == U"00001");
  CHECK(fam::realize(fam::zeros_one_system(1)) == U"01");
  CHECK(fam::realize(fam::uniform_pow2_system(2)) == U"00001");
  CHECK(fam::realize(fam::uniform_pow2_system(1)) == U"001");
  for (std::uint64_t n = 1; n <= 200; ++n) {
    REQUIRE(fam::realize(fam::zeros_one_system(n)) == fam::direct::zeros_one(n));
    if (n <= 16) REQUIRE(fam::realize(fam::uniform_pow2_system(n)) == fam::direct::zeros_one(std::uint64_t{1} << n));
  }
}

TEST_CASE("square-root witness") {
  const LSystem s16 = fam::sqrt_system(16);
  CHECK(s16.level == 3);
  CHECK(s16.length == 17);
  CHECK(fam::realize(s16) == zeros(16) + U"1");
  CHECK(fam::realize(fam::sqrt_system(100)) == zeros(100) + U"1");
  CHECK_THROWS_AS(fam::sqrt_system(8), ContractViolation);
  for (std::uint64_t n = 9; n <= 3000; ++n) {
    const LSystem sys = fam::sqrt_system(n);
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    REQUIRE(validate_lsystem(sys).ok());
    REQUIRE(system_size(sys) <= 4 * root + 11);
    if (n % 97 == 0) REQUIRE(fam::realize(sys) == fam::direct::zeros_one(n));
  }
}

TEST_CASE("expanding counterexample") {
  CHECK(fam::realize(fam::expanding_counterexample_system(3)) == U"000100000000");
  for (std::uint64_t n = 1; n <= 16; ++n) {
    REQUIRE(fam::realize(fam::expanding_counterexample_system(n)) == fam::direct::zeros_one_zeros(n));
  }
}

TEST_CASE("theorem4 construction") {
  const NUSystem x11 = fam::theorem4_nu(U"11");
  CHECK(x11.axiom.size() == 3);
  CHECK(fam::realize(x11) == U"11cb");
  const NUSystem x0 = fam::theorem4_nu(U"0");
  REQUIRE(x0.axiom.size() == 2);
  CHECK(std::get<Extract>(x0.axiom[0]) == Extract{x0.alphabet.id(U'0'), 1, 1, 1});
  CHECK(fam::realize(x0) == U"0c");
  CHECK_THROWS_AS(fam::theorem4_nu(U"012"), ContractViolation);
  CHECK_THROWS_AS(fam::theorem4_nu(U""), ContractViolation);

  // All gaps non-empty: 5k + 23 under the size formula; each empty gap saves 4.
  const Text x = U"0101010";
  CHECK(nu_size(fam::theorem4_nu(x)) == 5 * 3 + 23);
  CHECK(nu_size(fam::theorem4_nu(fam::kociumaka_string(16))) == 5 * 5 + 23 - 3 * 4);
  CHECK(fam::realize(fam::theorem4_nu(x)) == x + fam::lemma1_fixed_point_prefix(7));
}

TEST_CASE("family iteration") {
  CHECK(fam::family_iter("lemma1", {{"from", 1}, {"to", 3}}).size() == 3);
  const auto a = fam::family_iter("kociumaka", {{"n", 16}, {"seed", 7}});
  const auto b = fam::family_iter("kociumaka", {{"n", 16}, {"seed", 7}});
  REQUIRE(a.size() == 1);
  CHECK(std::get<Text>(a[0].member) == std::get<Text>(b[0].member));
  CHECK(fam::family_iter("kociumaka", {{"n", 64}, {"seed", 1}, {"count", 4}}).size() == 4);
  CHECK_THROWS_AS(fam::family_iter("nonesuch", {}), ParseError);
  CHECK_THROWS_AS(fam::family_iter("lemma1", {{"q", 1}}), ParseError);
  CHECK_THROWS_AS(fam::family_iter("sqrt", {{"n", 4}}), ParseError);
  for (const auto& name : fam::family_names()) {
    const std::uint64_t v = name == "lemma1" ? 3 : 16;
    const auto items = fam::family_iter(name, {{name == "lemma1" ? "d" : "n", v}});
    REQUIRE(items.size() == 1);
    CHECK_FALSE(fam::realize(items[0].member).empty());
  }
}
