#include "repetilab/families.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "repetilab/error.hpp"
#include "repetilab/lsys_engine.hpp"
#include "repetilab/nu_engine.hpp"

namespace repetilab::families {

namespace {

Word repeat(SymbolId s, std::uint64_t count) { return Word(count, s); }

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

LSystem lemma1_system(std::uint64_t d) {
  if (d < 1) throw ContractViolation("lemma1_system requires d >= 1");
  LSystem sys;
  sys.alphabet = Alphabet::from_ascii("abc");
  const auto& al = sys.alphabet;
  sys.rules = {al.word_ascii("a"), al.word_ascii("ab"), al.word_ascii("cb")};
  sys.coding = identity_coding(3);
  sys.axiom = al.word_ascii("c");
  sys.level = d + 1;
  sys.length = 1 + d * (d + 1) / 2 + d;
  return sys;
}

Text lemma1_fixed_point_prefix(std::uint64_t n) {
  const LSystem sys = lemma1_system(1);
  return sys.alphabet.render(fixed_point_prefix(sys, n));
}

std::uint64_t kociumaka_ones(std::uint64_t n) {
  return n == 0 ? 0 : static_cast<std::uint64_t>(std::bit_width(n));
}

Text kociumaka_string(std::uint64_t n, const std::vector<std::uint64_t>& shifts) {
  if (n < 2) throw ContractViolation("kociumaka_string requires n >= 2");
  const std::uint64_t ones = kociumaka_ones(n);
  if (shifts.size() != ones) {
    throw ContractViolation("kociumaka_string needs " + std::to_string(ones) +
                            " shifts for n = " + std::to_string(n) + ", got " +
                            std::to_string(shifts.size()));
  }
  Text out(n, U'0');
  for (std::uint64_t k = 1; k <= ones; ++k) {
    const std::uint64_t base = std::uint64_t{1} << (k - 1);
    const std::uint64_t shift = shifts[k - 1];
    if (shift >= base || base + shift > n) {
      throw ContractViolation("shift out of range: one " + std::to_string(k) + " at position " +
                              std::to_string(base) + " cannot move by " + std::to_string(shift));
    }
    out[base + shift - 1] = U'1';
  }
  return out;
}

Text kociumaka_string(std::uint64_t n) {
  return kociumaka_string(n, std::vector<std::uint64_t>(kociumaka_ones(n), 0));
}

std::vector<std::uint64_t> random_shifts(std::uint64_t n, std::mt19937_64& rng) {
  std::vector<std::uint64_t> shifts;
  for (std::uint64_t k = 1; k <= kociumaka_ones(n); ++k) {
    const std::uint64_t base = std::uint64_t{1} << (k - 1);
    const std::uint64_t bound = std::min(base, n - base + 1);
    // Plain modulo keeps the draw identical across standard libraries.
    shifts.push_back(rng() % bound);
  }
  return shifts;
}

Text prefixed_kociumaka(std::uint64_t n, const std::vector<std::uint64_t>& shifts) {
  return Text(n, U'0') + kociumaka_string(n, shifts);
}

Text prefixed_kociumaka(std::uint64_t n) { return Text(n, U'0') + kociumaka_string(n); }

LSystem zeros_one_system(std::uint64_t n) {
  if (n < 1) throw ContractViolation("zeros_one_system requires n >= 1");
  LSystem sys;
  sys.alphabet = Alphabet::from_ascii("01");
  sys.rules = {sys.alphabet.word_ascii("0"), sys.alphabet.word_ascii("01")};
  sys.coding = identity_coding(2);
  sys.axiom = sys.alphabet.word_ascii("1");
  sys.level = n;
  sys.length = n + 1;
  return sys;
}

LSystem uniform_pow2_system(std::uint64_t n) {
  if (n < 1 || n > 62) throw ContractViolation("uniform_pow2_system requires 1 <= n <= 62");
  LSystem sys;
  sys.alphabet = Alphabet::from_ascii("01");
  sys.rules = {sys.alphabet.word_ascii("00"), sys.alphabet.word_ascii("11")};
  sys.coding = identity_coding(2);
  sys.axiom = sys.alphabet.word_ascii("01");
  sys.level = n;
  sys.length = (std::uint64_t{1} << n) + 1;
  return sys;
}

LSystem sqrt_system(std::uint64_t n) {
  const std::uint64_t root = isqrt(n);
  if (root <= 2) {
    throw ContractViolation("sqrt_system requires floor(sqrt(n)) > 2, got n = " +
                            std::to_string(n));
  }
  const std::uint64_t k = n / root;
  const std::uint64_t j = n - k * root;
  if (k <= 1) throw ContractViolation("sqrt_system requires k = floor(n / floor(sqrt(n))) > 1");
  LSystem sys;
  sys.alphabet = Alphabet::from_ascii("01abcd");
  const auto id = [&](char c) { return sys.alphabet.id(static_cast<unsigned char>(c)); };
  sys.rules.resize(6);
  sys.rules[id('0')] = {id('0')};
  sys.rules[id('1')] = {id('1')};
  sys.rules[id('a')] = {id('a'), id('b')};
  sys.rules[id('b')] = repeat(id('c'), k - 1);
  sys.rules[id('b')].push_back(id('d'));
  sys.rules[id('c')] = repeat(id('0'), root - 1);
  sys.rules[id('d')] = repeat(id('0'), root - 3 + j);
  sys.rules[id('d')].push_back(id('1'));
  sys.coding.assign(6, id('0'));
  sys.coding[id('1')] = id('1');
  sys.axiom = {id('a')};
  sys.level = 3;
  sys.length = n + 1;
  return sys;
}

LSystem expanding_counterexample_system(std::uint64_t n) {
  if (n < 1 || n > 62) {
    throw ContractViolation("expanding_counterexample_system requires 1 <= n <= 62");
  }
  LSystem sys;
  sys.alphabet = Alphabet::from_ascii("012");
  const auto& al = sys.alphabet;
  sys.rules = {al.word_ascii("00"), al.word_ascii("21"), al.word_ascii("2")};
  sys.coding = {al.id(U'0'), al.id(U'1'), al.id(U'0')};
  sys.axiom = al.word_ascii("10");
  sys.level = n;
  sys.length = (std::uint64_t{1} << n) + n + 1;
  return sys;
}

NUSystem theorem4_nu(TextView x) {
  if (x.empty()) throw ContractViolation("theorem4_nu requires a non-empty string");
  if (std::any_of(x.begin(), x.end(), [](char32_t c) { return c != U'0' && c != U'1'; })) {
    throw ContractViolation("theorem4_nu requires a binary string over {0,1}");
  }
  const std::uint64_t n = x.size();
  NUSystem sys;
  sys.alphabet = Alphabet::from_ascii("01abc");
  const auto id = [&](char c) { return sys.alphabet.id(static_cast<unsigned char>(c)); };
  const Word zero{id('0')};
  sys.rules = {plain_tokens({id('0'), id('0')}), plain_tokens({id('1')}), plain_tokens({id('a')}),
               plain_tokens({id('a'), id('b')}), plain_tokens({id('c'), id('b')})};
  sys.coding = identity_coding(5);

  // Gaps of zeros before, between and after the ones; empty gaps emit no token.
  std::uint64_t gap = 0;
  auto flush_gap = [&] {
    if (gap > 0) sys.axiom.emplace_back(Extract{id('0'), n, 1, gap});
    gap = 0;
  };
  for (char32_t c : x) {
    if (c == U'0') {
      ++gap;
    } else {
      flush_gap();
      sys.axiom.emplace_back(Plain{id('1')});
    }
  }
  flush_gap();
  sys.axiom.emplace_back(Extract{id('c'), n, 1, n});
  sys.level = 1;
  sys.length = 2 * n;
  return sys;
}

namespace direct {

Text lemma1_string(std::uint64_t d) {
  const std::uint64_t n = 1 + d * (d + 1) / 2 + d;
  Text out = U"c";
  for (std::uint64_t i = 0; out.size() < n; ++i) {
    out.append(i, U'a');
    out.push_back(U'b');
  }
  out.resize(n);
  return out;
}

Text zeros_one(std::uint64_t n) { return Text(n, U'0') + U"1"; }

Text zeros_one_zeros(std::uint64_t n) {
  if (n > 30) throw ContractViolation("zeros_one_zeros is materialized only for n <= 30");
  return Text(n, U'0') + U"1" + Text(std::size_t{1} << n, U'0');
}

}  // namespace direct

namespace {

std::uint64_t param(const FamilyParams& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw ParseError("missing family parameter \"" + key + "\"");
  return it->second;
}

std::uint64_t param_or(const FamilyParams& params, const std::string& key,
                       std::uint64_t fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// The values of `key`, or of from..to inclusive.
std::vector<std::uint64_t> values(const FamilyParams& params, const std::string& key) {
  if (params.count(key)) return {params.at(key)};
  const std::uint64_t from = param(params, "from");
  const std::uint64_t to = param(params, "to");
  if (from > to) throw ParseError("family range has from > to");
  if (to - from > 1'000'000) throw ParseError("family range too large");
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = from; v <= to; ++v) out.push_back(v);
  return out;
}

void check_keys(const FamilyParams& params, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ParseError("unknown family parameter \"" + key + "\"");
    }
  }
}

template <typename Build>
std::vector<FamilyItem> system_family(const std::string& name, const std::string& key,
                                      const FamilyParams& params, Build build) {
  check_keys(params, {key.c_str(), "from", "to"});
  std::vector<FamilyItem> out;
  for (std::uint64_t v : values(params, key)) {
    try {
      out.push_back({name + ":" + key + "=" + std::to_string(v), build(v)});
    } catch (const ContractViolation& e) {
      throw ParseError(e.what());
    }
  }
  return out;
}

template <typename Build>
std::vector<FamilyItem> shifted_family(const std::string& name, const FamilyParams& params,
                                       Build build) {
  check_keys(params, {"n", "from", "to", "seed", "count"});
  std::vector<FamilyItem> out;
  for (std::uint64_t n : values(params, "n")) {
    if (n < 2) throw ParseError(name + " requires n >= 2");
    if (!params.count("seed")) {
      out.push_back({name + ":n=" + std::to_string(n), build(n, std::vector<std::uint64_t>(
                                                                 kociumaka_ones(n), 0))});
      continue;
    }
    const std::uint64_t seed = params.at("seed");
    std::mt19937_64 rng(seed ^ (n * 0x9E3779B97F4A7C15ULL));
    for (std::uint64_t i = 0; i < param_or(params, "count", 1); ++i) {
      out.push_back({name + ":n=" + std::to_string(n) + ":seed=" + std::to_string(seed) +
                         ":i=" + std::to_string(i),
                     build(n, random_shifts(n, rng))});
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> family_names() {
  return {"lemma1", "kociumaka", "prefixed-kociumaka", "zeros-one",
          "uniform-pow2", "sqrt", "expanding", "theorem4"};
}

std::vector<FamilyItem> family_iter(const std::string& name, const FamilyParams& params) {
  if (name == "lemma1") return system_family(name, "d", params, lemma1_system);
  if (name == "zeros-one") return system_family(name, "n", params, zeros_one_system);
  if (name == "uniform-pow2") return system_family(name, "n", params, uniform_pow2_system);
  if (name == "sqrt") return system_family(name, "n", params, sqrt_system);
  if (name == "expanding") {
    return system_family(name, "n", params, expanding_counterexample_system);
  }
  if (name == "kociumaka") {
    return shifted_family(name, params, [](std::uint64_t n, const auto& s) -> FamilyMember {
      return kociumaka_string(n, s);
    });
  }
  if (name == "prefixed-kociumaka") {
    return shifted_family(name, params, [](std::uint64_t n, const auto& s) -> FamilyMember {
      return prefixed_kociumaka(n, s);
    });
  }
  if (name == "theorem4") {
    return shifted_family(name, params, [](std::uint64_t n, const auto& s) -> FamilyMember {
      return theorem4_nu(kociumaka_string(n, s));
    });
  }
  throw ParseError("unknown family \"" + name + "\"");
}

Text realize(const FamilyMember& member) {
  if (const auto* text = std::get_if<Text>(&member)) return *text;
  if (const auto* sys = std::get_if<LSystem>(&member)) return sys->alphabet.render(generate(*sys));
  const auto& nu = std::get<NUSystem>(member);
  return nu.alphabet.render(nu_generate(nu));
}

}  // namespace repetilab::families
