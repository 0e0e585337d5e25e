#include "repetilab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "repetilab/core_model.hpp"
#include "repetilab/error.hpp"
#include "repetilab/exact_small.hpp"
#include "repetilab/families.hpp"
#include "repetilab/lsys_engine.hpp"
#include "repetilab/measures.hpp"
#include "repetilab/nu_engine.hpp"
#include "repetilab/utf8.hpp"

namespace repetilab {

namespace {

// Regression bands, measured once and frozen. Each satisfies hi/lo <= 3.
namespace frozen {
// delta/sqrt(n) measured 0.4068..0.4137 for d = 64..1024.
constexpr double kLemma1DeltaLo = 0.36, kLemma1DeltaHi = 0.46;
// r/log2(n) measured 2.000 exactly for n = 2^8..2^16.
constexpr double kKociumakaRLo = 1.8, kKociumakaRHi = 2.2;
// z_e/log2(n) measured 2.062..2.125.
constexpr double kPrefixedZeLo = 1.9, kPrefixedZeHi = 2.3;
// runs/log2(n) measured 1.875..1.938.
constexpr double kKociumakaRunsLo = 1.7, kKociumakaRunsHi = 2.1;
// size/sqrt(n) measured at most 6.333 (n = 9) over the A8 sample.
constexpr double kSqrtSizeC = 6.5;
}  // namespace frozen

constexpr std::uint64_t kSeed = 20240611;

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string show(TextView w) {
  std::string s = utf8::encode(w);
  return s.size() > 40 ? s.substr(0, 40) + "..." : s;
}

// Thrown inside a criterion body to stop at the first mismatch.
struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Mismatch(what);
}

Text binary(std::uint64_t bits, std::size_t len) {
  Text w(len, U'0');
  for (std::size_t i = 0; i < len; ++i) {
    if ((bits >> (len - 1 - i)) & 1U) w[i] = U'1';
  }
  return w;
}

Text random_text(std::mt19937_64& rng, std::size_t max_len, std::size_t max_sigma) {
  std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
  std::uniform_int_distribution<std::size_t> sigma_dist(1, max_sigma);
  const std::size_t len = len_dist(rng);
  std::uniform_int_distribution<std::uint32_t> sym(0, static_cast<std::uint32_t>(sigma_dist(rng) - 1));
  Text w(len, U'a');
  for (auto& c : w) c = U'a' + sym(rng);
  return w;
}

// Splits `total` into `parts` positive integers uniformly enough for tests.
std::vector<std::size_t> split(std::mt19937_64& rng, std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, 1);
  for (std::size_t extra = total - parts; extra > 0; --extra) {
    out[std::uniform_int_distribution<std::size_t>(0, parts - 1)(rng)]++;
  }
  return out;
}

LSystem random_lsystem(std::mt19937_64& rng) {
  for (;;) {
    const std::size_t sigma = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    // size = Σ|rules| + |axiom| + σ + 2 <= 12
    const std::size_t body_max = 10 - sigma;
    const std::size_t body = std::uniform_int_distribution<std::size_t>(sigma + 1, body_max)(rng);
    auto lens = split(rng, body, sigma + 1);
    std::uniform_int_distribution<SymbolId> sym(0, static_cast<SymbolId>(sigma - 1));
    LSystem sys;
    sys.alphabet = Alphabet::from_ascii(std::string("abcd").substr(0, sigma));
    for (std::size_t a = 0; a < sigma; ++a) {
      Word rhs(lens[a]);
      for (auto& s : rhs) s = sym(rng);
      sys.rules.push_back(rhs);
      sys.coding.push_back(sym(rng));
    }
    sys.axiom.resize(lens[sigma]);
    for (auto& s : sys.axiom) s = sym(rng);
    sys.level = std::uniform_int_distribution<std::uint64_t>(0, 8)(rng);
    sys.length = 64;  // placeholder that satisfies level <= length^2
    const auto full = expansion_length(sys, sys.level);
    if (!full || *full > 100'000) continue;
    sys.length = std::uniform_int_distribution<std::uint64_t>(1, *full)(rng);
    if (!validate_lsystem(sys).ok()) continue;
    return sys;
  }
}

// Plain string rewriting, independent of the engine.
Text iterate_rules(const std::map<char32_t, Text>& rules, Text w, std::uint64_t steps) {
  for (std::uint64_t t = 0; t < steps; ++t) {
    Text next;
    for (char32_t c : w) next += rules.at(c);
    w = std::move(next);
  }
  return w;
}

void band_check(const std::vector<double>& ratios, double lo, double hi, const std::string& what,
                std::ostringstream& detail) {
  double mn = ratios.front(), mx = ratios.front();
  for (double x : ratios) mn = std::min(mn, x), mx = std::max(mx, x);
  detail << what << " in [" << fmt(mn) << ", " << fmt(mx) << "] band [" << fmt(lo, 2) << ", "
         << fmt(hi, 2) << "]; ";
  expect(hi <= 3.0 * lo, what + ": frozen band wider than 3x");
  expect(mn >= lo && mx <= hi, detail.str() + what + " left the frozen band");
}

void a1(CriterionResult& res) {
  std::mt19937_64 rng(kSeed);
  std::uint64_t symbols = 0;
  for (int i = 0; i < 1000; ++i) {
    const LSystem sys = random_lsystem(rng);
    const Word full = expand_full(sys);
    const Word prefix(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(sys.length));
    expect(generate(sys) == prefix, "generate differs from expansion for system #" + std::to_string(i));
    const std::uint64_t a = std::uniform_int_distribution<std::uint64_t>(1, sys.length)(rng);
    const std::uint64_t b = std::uniform_int_distribution<std::uint64_t>(a, sys.length)(rng);
    const Word slice(prefix.begin() + static_cast<std::ptrdiff_t>(a - 1),
                     prefix.begin() + static_cast<std::ptrdiff_t>(b));
    expect(generate_slice(sys, a, b) == slice, "slice differs for system #" + std::to_string(i));
    symbols += sys.length;
  }
  res.detail = "1000 systems, " + std::to_string(symbols) + " symbols compared";
}

void a2(CriterionResult& res) {
  const std::map<char32_t, Text> rules{{U'a', U"a"}, {U'b', U"ab"}, {U'c', U"cb"}};
  for (std::uint64_t d = 1; d <= 50; ++d) {
    const LSystem sys = families::lemma1_system(d);
    Text oracle = iterate_rules(rules, U"c", d + 1);
    expect(oracle.size() >= sys.length, "oracle shorter than n at d=" + std::to_string(d));
    oracle.resize(sys.length);
    expect(sys.alphabet.render(generate(sys)) == oracle, "mismatch at d=" + std::to_string(d));
  }
  res.detail = "d = 1..50 match naive iteration";
}

void a3(CriterionResult& res) {
  std::ostringstream detail;
  std::vector<double> ratios;
  for (std::uint64_t d = 64; d <= 1024; d *= 2) {
    const LSystem sys = families::lemma1_system(d);
    expect(system_size(sys) == 11, "system_size " + std::to_string(system_size(sys)) +
                                       " at d=" + std::to_string(d));
    const Text s = sys.alphabet.render(generate(sys));
    ratios.push_back(delta(s).to_double() / std::sqrt(static_cast<double>(s.size())));
    detail << (d == 64 ? "" : " ") << "d=" << d << ":" << fmt(ratios.back());
  }
  detail << "; size 11; ";
  band_check(ratios, frozen::kLemma1DeltaLo, frozen::kLemma1DeltaHi, "delta/sqrt(n)", detail);
  res.detail = detail.str();
}

std::vector<Text> theorem4_inputs(std::uint64_t n) {
  std::vector<Text> xs{families::kociumaka_string(n)};
  std::mt19937_64 rng(kSeed ^ n);
  for (int i = 0; i < 3; ++i) xs.push_back(families::kociumaka_string(n, families::random_shifts(n, rng)));
  return xs;
}

void a4(CriterionResult& res) {
  std::uint64_t instances = 0, size_ok = 0, formula_ok = 0;
  std::string first_size_miss;
  for (std::uint64_t n = 16; n <= 4096; n *= 2) {
    const Text y = families::lemma1_fixed_point_prefix(n);
    for (const Text& x : theorem4_inputs(n)) {
      const NUSystem sys = families::theorem4_nu(x);
      const Text w = sys.alphabet.render(nu_generate(sys));
      expect(w == x + y, "generation mismatch for x=" + show(x));
      const auto k = static_cast<std::uint64_t>(std::count(x.begin(), x.end(), U'1'));
      std::uint64_t empty_gaps = 0;
      for (std::size_t i = 0; i <= x.size(); ++i) {
        const bool open = i == 0 || x[i - 1] == U'1';
        const bool close = i == x.size() || x[i] == U'1';
        empty_gaps += open && close;
      }
      formula_ok += nu_size(sys) == 5 * k + 23 - 4 * empty_gaps;
      ++instances;
      if (nu_size(sys) == 5 * k + 16) {
        ++size_ok;
      } else if (first_size_miss.empty()) {
        first_size_miss = "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": nu_size " +
                          std::to_string(nu_size(sys)) + " vs 5k+16 = " +
                          std::to_string(5 * k + 16);
      }
    }
  }
  res.detail = std::to_string(instances) + " instances generate x.y exactly; nu_size = 5k+16 in " +
               std::to_string(size_ok) + "/" + std::to_string(instances);
  if (!first_size_miss.empty()) res.detail += " (first: " + first_size_miss + ")";
  res.detail += "; nu_size = 5k+23-4*(empty gaps) in " + std::to_string(formula_ok) + "/" +
                std::to_string(instances);
  expect(size_ok == instances, res.detail);
}

void a5(CriterionResult& res) {
  std::vector<double> r, ze, runs;
  for (std::uint64_t n = 256; n <= 65536; n *= 2) {
    const double lg = std::log2(static_cast<double>(n));
    const Text x = families::kociumaka_string(n);
    r.push_back(static_cast<double>(r_measure(x)) / lg);
    runs.push_back(static_cast<double>(rle_runs(x)) / lg);
    ze.push_back(static_cast<double>(lz_end(families::prefixed_kociumaka(n)).size()) / lg);
  }
  std::ostringstream detail;
  band_check(r, frozen::kKociumakaRLo, frozen::kKociumakaRHi, "r/log2n", detail);
  band_check(ze, frozen::kPrefixedZeLo, frozen::kPrefixedZeHi, "z_e/log2n", detail);
  band_check(runs, frozen::kKociumakaRunsLo, frozen::kKociumakaRunsHi, "runs/log2n", detail);
  res.detail = detail.str();
}

void a6(CriterionResult& res) {
  const std::size_t max_len = 12;
  std::uint64_t strings = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      const Text w = binary(bits, len);
      const Parse p76 = lz76(w);
      const Parse pno = lz_no(w);
      expect(bms_decodable(w, to_bms(p76)), "LZ76 parse not decodable: " + show(w));
      expect(bms_decodable(w, to_bms(pno)), "LZ-no parse not decodable: " + show(w));
      const BmsWitness best = smallest_bms(w, max_len);
      expect(bms_decodable(w, best), "smallest scheme not decodable: " + show(w));
      const std::uint64_t b = best.b(), z = p76.size(), zno = pno.size();
      expect(delta(w) <= Rational(b, 1),
             "delta > b for " + show(w));
      expect(b <= z && z <= zno, "ordering b <= z <= z_no fails for " + show(w));
      ++strings;
    }
  }
  res.detail = std::to_string(strings) + " binary strings up to length " +
               std::to_string(max_len) + " satisfy delta <= b <= z <= z_no";
}

void a7(CriterionResult& res) {
  std::uint64_t checked = 0;
  for (std::size_t len = 1; len <= 14; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      const Text w = binary(bits, len);
      const auto fast = substring_complexity(w);
      const auto slow = brute_substrings(w);
      expect(fast.counts == slow.counts && fast.delta == slow.delta,
             "substring complexity differs on " + show(w));
      if (len <= 10) expect(bwt(w) == brute_bwt(w), "BWT differs on " + show(w));
      ++checked;
    }
  }
  std::mt19937_64 rng(kSeed + 7);
  for (int i = 0; i < 1000; ++i) {
    const Text w = random_text(rng, 200, 4);
    const auto fast = substring_complexity(w);
    const auto slow = brute_substrings(w);
    expect(fast.counts == slow.counts && fast.delta == slow.delta,
           "substring complexity differs on " + show(w));
  }
  for (int i = 0; i < 10000; ++i) {
    const Text w = random_text(rng, 200, 6);
    expect(inverse_bwt(bwt(w, BwtMode::kSentinel)) == w, "sentinel BWT round trip fails on " + show(w));
    const Text rev(w.rbegin(), w.rend());
    expect(delta(w) == delta(rev), "delta not reversal invariant on " + show(w));
  }
  res.detail = std::to_string(checked) +
               " exhaustive binary strings, 1000 random complexity checks, 10000 BWT round "
               "trips and reversals";
}

void a8(CriterionResult& res) {
  for (std::uint64_t n = 1; n <= 256; ++n) {
    const LSystem sys = families::zeros_one_system(n);
    expect(sys.alphabet.render(generate(sys)) == families::direct::zeros_one(n),
           "zeros_one_system wrong at n=" + std::to_string(n));
  }
  {
    const LSystem sys = families::zeros_one_system(10000);
    expect(sys.alphabet.render(generate(sys)) == families::direct::zeros_one(10000),
           "zeros_one_system wrong at n=10000");
  }
  double worst = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::uint64_t n = 9 + i * (10000 - 9) / 49;
    const LSystem sys = families::sqrt_system(n);
    expect(sys.alphabet.render(generate(sys)) == families::direct::zeros_one(n),
           "sqrt_system wrong at n=" + std::to_string(n));
    const double c = static_cast<double>(system_size(sys)) / std::sqrt(static_cast<double>(n));
    worst = std::max(worst, c);
    expect(c <= frozen::kSqrtSizeC, "sqrt_system size " + std::to_string(system_size(sys)) +
                                        " exceeds C*sqrt(n) at n=" + std::to_string(n));
  }
  for (std::uint64_t n = 1; n <= 20; ++n) {
    const LSystem sys = families::expanding_counterexample_system(n);
    expect(sys.alphabet.render(generate(sys)) == families::direct::zeros_one_zeros(n),
           "expanding system wrong at n=" + std::to_string(n));
  }
  {
    const std::uint64_t n = 40;
    const LSystem sys = families::expanding_counterexample_system(n);
    const std::uint64_t last = (std::uint64_t{1} << n) + n + 1;
    const std::pair<std::uint64_t, char32_t> spots[] = {
        {1, U'0'}, {n, U'0'}, {n + 1, U'1'}, {n + 2, U'0'}, {last / 2, U'0'}, {last, U'0'}};
    for (const auto& [pos, want] : spots) {
      const Text got = sys.alphabet.render(generate_slice(sys, pos, pos));
      expect(got == Text(1, want), "expanding system n=40 wrong at position " + std::to_string(pos));
    }
  }
  res.detail = "zeros-one n<=256 and 10000, 50 sqrt systems (max size/sqrt(n) " + fmt(worst) +
               " <= " + fmt(frozen::kSqrtSizeC, 2) + "), expanding n<=20 and n=40 spots";
}

void a9(CriterionResult& res) {
  NUSystem loop;
  loop.alphabet = Alphabet::from_ascii("a");
  loop.rules = {{Extract{0, 2, 1, 1}}};
  loop.coding = {0};
  loop.axiom = {Plain{0}};
  loop.level = 1;
  loop.length = 1;
  auto v = validate_nu(loop);
  const std::string self_witness = "extraction cycle: a(2)[1:1] -> a(2)[1:1]";
  expect(!v.ok() && v.violations.back() == self_witness,
         "self-loop not reported as \"" + self_witness + "\"");

  NUSystem pair;
  pair.alphabet = Alphabet::from_ascii("ab");
  pair.rules = {{Extract{1, 3, 1, 2}}, {Extract{0, 3, 1, 2}}};
  pair.coding = {0, 1};
  pair.axiom = {Plain{0}};
  pair.level = 1;
  pair.length = 2;
  v = validate_nu(pair);
  const auto cycle = ExtractionGraph::build(pair).find_cycle();
  expect(!v.ok() && cycle && cycle->size() == 2 &&
             std::set<Extract>(cycle->begin(), cycle->end()) ==
                 std::set<Extract>{Extract{0, 3, 1, 2}, Extract{1, 3, 1, 2}},
         "2-cycle witness wrong");

  std::uint64_t accepted = 0;
  for (std::uint64_t n = 16; n <= 4096; n *= 2) {
    for (const Text& x : theorem4_inputs(n)) {
      NUSystem sys = families::theorem4_nu(x);
      const auto check = validate_nu(sys);
      expect(check.ok(), "theorem4 system rejected for x=" + show(x) + ": " +
                             (check.violations.empty() ? "" : check.violations.front()));
      ++accepted;
      // Injecting b -> ... b(2)[1:1] must be caught.
      sys.rules[sys.alphabet.id(U'b')].emplace_back(Extract{sys.alphabet.id(U'b'), 2, 1, 1});
      expect(!validate_nu(sys).ok(), "injected cycle accepted for x=" + show(x));
    }
  }
  res.detail = "self-loop and 2-cycle witnesses correct; " + std::to_string(accepted) +
               " theorem4 systems accepted, injected cycles rejected";
}

struct Criterion {
  const char* id;
  const char* title;
  double budget;
  void (*body)(CriterionResult&);
};

const Criterion kCriteria[] = {
    {"A1", "engine matches naive expansion", 30, a1},
    {"A2", "lemma1 generation", 5, a2},
    {"A3", "delta grows like sqrt(n) on lemma1 strings", 60, a3},
    {"A4", "NU construction for Kociumaka strings", 30, a4},
    {"A5", "logarithmic r, z_e and runs on Kociumaka strings", 120, a5},
    {"A6", "delta <= b <= z <= z_no on tiny binary strings", 600, a6},
    {"A7", "measure oracles", 60, a7},
    {"A8", "small witness systems", 60, a8},
    {"A9", "NU cycle validation", 1, a9},
};

}  // namespace

std::vector<std::string> criterion_ids(VerifyLevel level) {
  std::vector<std::string> ids;
  for (const auto& c : kCriteria) {
    if (level == VerifyLevel::kFull || std::string(c.id) <= "A6") ids.push_back(c.id);
  }
  return ids;
}

CriterionResult run_criterion(const std::string& id) {
  for (const auto& c : kCriteria) {
    if (id != c.id) continue;
    CriterionResult res;
    res.id = c.id;
    res.title = c.title;
    res.budget_seconds = c.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(res);
      res.passed = true;
      while (!res.detail.empty() && (res.detail.back() == ' ' || res.detail.back() == ';')) {
        res.detail.pop_back();
      }
    } catch (const Mismatch& e) {
      res.detail = e.what();
    } catch (const std::exception& e) {
      res.detail = std::string("unexpected error: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (res.passed && res.seconds > res.budget_seconds) {
      res.passed = false;
      res.detail += " [over time budget of " + fmt(res.budget_seconds, 0) + " s]";
    }
    return res;
  }
  throw ParseError("unknown criterion \"" + id + "\"");
}

std::vector<CriterionResult> verify(VerifyLevel level,
                                    const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& id : criterion_ids(level)) {
    out.push_back(run_criterion(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.passed ? "PASS " : "FAIL ") + r.id + " " + r.title + " (" +
         fmt(r.seconds, 2) + " s): " + r.detail;
}

}  // namespace repetilab
