#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "repetilab/core_model.hpp"
#include "repetilab/error.hpp"
#include "repetilab/families.hpp"
#include "repetilab/system_json.hpp"
#include "repetilab/utf8.hpp"

using namespace repetilab;

namespace {

LSystem unary() {
  LSystem sys;
  sys.alphabet = Alphabet::from_ascii("x");
  sys.rules = {{0}};
  sys.coding = {0};
  sys.axiom = {0};
  sys.level = 0;
  sys.length = 1;
  return sys;
}

bool has_violation(const ValidationResult& v, const std::string& prefix) {
  for (const auto& msg : v.violations) {
    if (msg.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("utf8 round trip and validation") {
  const std::string bytes = "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80";
  const std::u32string text = utf8::decode(bytes);
  CHECK(text == U"aé€\U0001F600");
  CHECK(utf8::encode(text) == bytes);
  CHECK_THROWS_AS(utf8::decode("\xC3"), ParseError);
  CHECK_THROWS_AS(utf8::decode("\xED\xA0\x80"), ParseError);  // surrogate
  CHECK_THROWS_AS(utf8::decode("\xC0\x80"), ParseError);      // overlong
  CHECK(utf8::render(U'\n', true) == "\\u{000A}");
  CHECK(utf8::render(U'q', true) == "q");
}

TEST_CASE("alphabet maps scalars to ids") {
  const Alphabet al = Alphabet::from_ascii("abc");
  CHECK(al.size() == 3);
  CHECK(al.id(U'b') == 1);
  CHECK_FALSE(al.find(U'z').has_value());
  CHECK(al.render(al.word_ascii("cab")) == U"cab");
  CHECK_THROWS(Alphabet::from_ascii("aa"));
}

TEST_CASE("system sizes") {
  CHECK(system_size(families::lemma1_system(5)) == 11);
  CHECK(system_size(unary()) == 5);
  for (std::uint64_t n : {1, 7, 1000}) CHECK(system_size(families::zeros_one_system(n)) == 8);
  CHECK(nu_size(to_nu(families::lemma1_system(3))) == 11);

  NUSystem nu;
  nu.alphabet = Alphabet::from_ascii("01");
  nu.rules = {plain_tokens({0, 0}), plain_tokens({1})};
  nu.coding = {0, 1};
  nu.axiom = {Extract{0, 8, 1, 3}, Plain{1}};
  nu.level = 1;
  nu.length = 4;
  CHECK(nu_size(nu) == 12);
}

TEST_CASE("validation reports violations") {
  CHECK(validate_lsystem(families::lemma1_system(2)).ok());

  LSystem empty_rule = families::lemma1_system(2);
  empty_rule.rules[0].clear();
  CHECK(has_violation(validate_lsystem(empty_rule), "empty rule for a"));

  LSystem bad_axiom = families::lemma1_system(2);
  bad_axiom.axiom = {7};
  CHECK(has_violation(validate_lsystem(bad_axiom), "unknown axiom symbol"));

  LSystem deep = unary();
  deep.level = 2;  // > 1^2
  CHECK(has_violation(validate_lsystem(deep), "level"));

  NUSystem nu = to_nu(unary());
  nu.axiom = {Extract{0, 1, 2, 1}};
  CHECK_FALSE(validate_nu_structure(nu).ok());
}

TEST_CASE("classification follows the definitions") {
  const auto lemma = classify(families::lemma1_system(4));
  CHECK(lemma.prolongable);
  CHECK_FALSE(lemma.expanding);
  CHECK(describe(lemma, families::lemma1_system(4).alphabet) ==
        "prolongable(c) identity-coding ℓ_m ℓ_d ℓ_p");

  const LSystem pow2 = families::uniform_pow2_system(3);
  const auto u = classify(pow2);
  CHECK(u.expanding);
  CHECK(u.uniform);
  CHECK(u.identity_coding);
  CHECK_FALSE(u.prolongable);

  const auto x = classify(unary());
  CHECK(x.identity_coding);
  CHECK_FALSE(x.expanding);
  CHECK_FALSE(x.uniform);
  CHECK_FALSE(x.prolongable);

  const auto sq = classify(families::sqrt_system(16));
  CHECK(sq.prolongable);
  CHECK_FALSE(sq.identity_coding);
  CHECK(sq.class_lm);
  CHECK_FALSE(sq.class_lp);

  CHECK_FALSE(classify(families::expanding_counterexample_system(3)).expanding);
}

TEST_CASE("json format") {
  const std::string text =
      R"({"kind":"lsystem","alphabet":["a","b","c"],"rules":{"a":"a","b":"ab","c":"cb"},"coding":{"a":"a","b":"b","c":"c"},"axiom":"c","level":3,"length":6})";
  const AnySystem any = parse_system(text);
  REQUIRE(std::holds_alternative<LSystem>(any));
  const LSystem& sys = std::get<LSystem>(any);
  CHECK(sys.rules == families::lemma1_system(2).rules);
  CHECK(sys.level == 3);
  CHECK(to_json(sys) == text);

  SUBCASE("coding defaults to identity") {
    const auto s = std::get<LSystem>(parse_system(
        R"({"kind":"lsystem","alphabet":["a"],"rules":{"a":"aa"},"axiom":"a","level":1,"length":2})"));
    CHECK(s.coding == std::vector<SymbolId>{0});
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(parse_system("{"), ParseError);
    CHECK_THROWS_AS(parse_system(R"({"kind":"lsystem","alphabet":["a"],"rules":{"a":"a"},"axiom":"a","level":0,"length":1,"extra":1})"),
                    ParseError);
    CHECK_THROWS_AS(parse_system(R"({"kind":"lsystem","alphabet":["ab"],"rules":{},"axiom":"a","level":0,"length":1})"),
                    ParseError);
    CHECK_THROWS_AS(parse_system(R"({"kind":"lsystem","alphabet":["a"],"rules":{"a":"z"},"axiom":"a","level":0,"length":1})"),
                    ParseError);
  }
  SUBCASE("NU systems round trip") {
    const NUSystem nu = families::theorem4_nu(U"0110");
    const std::string out = to_json(nu);
    CHECK(out.find(R"({"ext":{"sym":"0","level":4,"from":1,"to":1}})") != std::string::npos);
    const AnySystem back = parse_system(out);
    REQUIRE(std::holds_alternative<NUSystem>(back));
    CHECK(to_json(std::get<NUSystem>(back)) == out);
  }
}
