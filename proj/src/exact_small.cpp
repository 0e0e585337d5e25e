#include "repetilab/exact_small.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "repetilab/error.hpp"
#include "repetilab/lsys_engine.hpp"

namespace repetilab {

bool bms_decodable(TextView w, const BmsWitness& scheme) {
  const std::size_t n = w.size();
  constexpr std::int64_t kExplicit = -1;
  std::vector<std::int64_t> source(n, kExplicit);
  std::uint64_t expected = 1;
  for (const BmsPhrase& ph : scheme.phrases) {
    if (ph.start != expected || ph.length == 0 || ph.start - 1 + ph.length > n) {
      throw ContractViolation("macro-scheme phrases do not tile the string");
    }
    expected += ph.length;
    if (!ph.source) {
      if (ph.length != 1 || w[ph.start - 1] != ph.symbol) return false;
      continue;
    }
    const std::uint64_t src = *ph.source;
    if (src < 1 || src == ph.start || src - 1 + ph.length > n) return false;
    for (std::uint64_t k = 0; k < ph.length; ++k) {
      if (w[src - 1 + k] != w[ph.start - 1 + k]) return false;
      source[ph.start - 1 + k] = static_cast<std::int64_t>(src - 1 + k);
    }
  }
  if (expected != n + 1) throw ContractViolation("macro-scheme phrases do not tile the string");

  // Functional graph on positions: every walk must reach an explicit symbol.
  enum : std::uint8_t { kUnvisited, kActive, kDone };
  std::vector<std::uint8_t> state(n, kUnvisited);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<std::size_t> path;
    std::size_t x = p;
    while (state[x] == kUnvisited && source[x] != kExplicit) {
      state[x] = kActive;
      path.push_back(x);
      x = static_cast<std::size_t>(source[x]);
    }
    if (state[x] == kActive) return false;
    for (std::size_t q : path) state[q] = kDone;
    state[x] = kDone;
  }
  return true;
}

BmsWitness to_bms(const Parse& parse) {
  BmsWitness out;
  for (const Phrase& ph : parse.phrases) {
    BmsPhrase b;
    b.start = ph.start;
    b.length = ph.length;
    switch (ph.kind) {
      case Phrase::Kind::kLiteral:
        b.symbol = ph.symbol;
        break;
      case Phrase::Kind::kCopy:
        b.source = ph.source;
        break;
      case Phrase::Kind::kEndCopy:
        throw ContractViolation("LZ-End phrases do not map to single macro-scheme phrases");
    }
    out.phrases.push_back(b);
  }
  return out;
}

namespace {

class BmsSearch {
 public:
  BmsSearch(TextView w, std::uint64_t node_cap)
      : w_(w), n_(w.size()), node_cap_(node_cap), source_(n_, kUnassigned) {
    for (char32_t c : w_) {
      if (std::find(symbols_.begin(), symbols_.end(), c) == symbols_.end()) symbols_.push_back(c);
    }
    literals_.assign(symbols_.size(), 0);
    // remaining_[p] = bitmask of symbols occurring in w[p..].
    remaining_.assign(n_ + 1, 0);
    if (symbols_.size() <= 64) {
      for (std::size_t p = n_; p-- > 0;) {
        remaining_[p] = remaining_[p + 1] | (std::uint64_t{1} << symbol_index(w_[p]));
      }
    }
  }

  std::size_t distinct() const { return symbols_.size(); }

  std::optional<BmsWitness> search(std::uint64_t target) {
    target_ = target;
    chosen_.clear();
    if (!dfs(0)) return std::nullopt;
    BmsWitness out;
    std::uint64_t start = 1;
    for (const auto& [len, src] : chosen_) {
      BmsPhrase ph;
      ph.start = start;
      ph.length = len;
      if (src == kExplicit) {
        ph.symbol = w_[start - 1];
      } else {
        ph.source = static_cast<std::uint64_t>(src) + 1;
      }
      out.phrases.push_back(ph);
      start += len;
    }
    return out;
  }

 private:
  static constexpr std::int64_t kExplicit = -1;
  static constexpr std::int64_t kUnassigned = -2;

  std::size_t symbol_index(char32_t c) const {
    return static_cast<std::size_t>(std::find(symbols_.begin(), symbols_.end(), c) -
                                    symbols_.begin());
  }

  // Phrases still required from position `pos`: one per symbol without an
  // explicit phrase yet, or 1 if all are covered. Infinite if such a symbol
  // no longer occurs.
  std::uint64_t lower_bound(std::size_t pos) const {
    if (pos == n_) return 0;
    std::uint64_t missing = 0;
    for (std::size_t k = 0; k < symbols_.size(); ++k) {
      if (literals_[k] > 0) continue;
      if (symbols_.size() <= 64 && !(remaining_[pos] >> k & 1)) return ~std::uint64_t{0} / 2;
      ++missing;
    }
    return std::max<std::uint64_t>(missing, 1);
  }

  void count_node() {
    if (++nodes_ > node_cap_) {
      throw LimitExceeded("macro-scheme search exceeded the node cap of " +
                          std::to_string(node_cap_));
    }
  }

  // Assigns sources for [pos, pos+len) and reports whether a cycle closed.
  bool assign_creates_cycle(std::size_t pos, std::size_t len, std::int64_t src) {
    for (std::size_t k = 0; k < len; ++k) {
      source_[pos + k] = src == kExplicit ? kExplicit : src + static_cast<std::int64_t>(k);
    }
    if (src == kExplicit) return false;
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t q = pos + k;
      std::size_t x = q;
      for (std::size_t steps = 0; steps <= n_; ++steps) {
        const std::int64_t next = source_[x];
        if (next < 0) break;
        x = static_cast<std::size_t>(next);
        if (x == q) return true;
      }
    }
    return false;
  }

  void unassign(std::size_t pos, std::size_t len) {
    for (std::size_t k = 0; k < len; ++k) source_[pos + k] = kUnassigned;
  }

  bool dfs(std::size_t pos) {
    if (pos == n_) return true;
    if (chosen_.size() + lower_bound(pos) > target_) return false;

    // Explicit symbol.
    count_node();
    const std::size_t sym = symbol_index(w_[pos]);
    assign_creates_cycle(pos, 1, kExplicit);
    ++literals_[sym];
    chosen_.emplace_back(1, kExplicit);
    if (dfs(pos + 1)) return true;
    chosen_.pop_back();
    --literals_[sym];
    unassign(pos, 1);

    // Copies of length >= 2 from any other start, forward or backward.
    for (std::size_t len = 2; pos + len <= n_; ++len) {
      for (std::size_t j = 0; j + len <= n_; ++j) {
        if (j == pos || w_.compare(j, len, w_, pos, len) != 0) continue;
        count_node();
        const bool cycle = assign_creates_cycle(pos, len, static_cast<std::int64_t>(j));
        if (!cycle) {
          chosen_.emplace_back(len, static_cast<std::int64_t>(j));
          if (dfs(pos + len)) return true;
          chosen_.pop_back();
        }
        unassign(pos, len);
      }
    }
    return false;
  }

  TextView w_;
  std::size_t n_;
  std::uint64_t node_cap_;
  std::uint64_t nodes_ = 0;
  std::uint64_t target_ = 0;
  std::vector<std::int64_t> source_;
  std::vector<char32_t> symbols_;
  std::vector<std::uint64_t> literals_;
  std::vector<std::uint64_t> remaining_;
  std::vector<std::pair<std::size_t, std::int64_t>> chosen_;
};

}  // namespace

BmsWitness smallest_bms(TextView w, std::uint64_t limit, std::uint64_t node_cap) {
  if (w.empty()) throw ContractViolation("macro-scheme search requires a non-empty string");
  if (w.size() > limit) {
    throw LimitExceeded("macro-scheme search refuses strings longer than " +
                        std::to_string(limit) + " (got " + std::to_string(w.size()) + ")");
  }
  const std::uint64_t upper = lz76(w).size();
  BmsSearch search(w, node_cap);
  for (std::uint64_t target = std::max<std::uint64_t>(1, search.distinct()); target <= upper;
       ++target) {
    if (auto found = search.search(target)) return *found;
  }
  throw std::logic_error("LZ76 parse is a macro-scheme; search must succeed by its size");
}

namespace {

// Scalars for extra (non-output) symbols, skipping those used by w.
std::vector<char32_t> extra_scalars(const std::vector<char32_t>& used, std::size_t count) {
  std::vector<char32_t> out;
  const std::u32string pool = U"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  for (char32_t c = 0; out.size() < count; ++c) {
    const char32_t candidate = c < pool.size() ? pool[c] : 0xE000 + c;
    if (std::find(used.begin(), used.end(), candidate) == used.end()) out.push_back(candidate);
  }
  return out;
}

class LSystemEnumerator {
 public:
  LSystemEnumerator(TextView w, const LSystemBudget& budget)
      : w_(w), m_(w.size()), budget_(budget) {
    for (char32_t c : w) {
      if (std::find(targets_.begin(), targets_.end(), c) == targets_.end()) targets_.push_back(c);
    }
    d_max_ = budget.d_max.value_or(static_cast<std::uint64_t>(m_) * m_);
  }

  std::optional<LSystemSearchResult> run() {
    const std::uint64_t sigma_lo = targets_.size();
    for (std::uint64_t size = 5; size <= budget_.size_max; ++size) {
      for (std::uint64_t sigma = sigma_lo; sigma <= budget_.sigma_max; ++sigma) {
        for (std::uint64_t axiom_len = 1; axiom_len <= budget_.axiom_max; ++axiom_len) {
          if (size < axiom_len + sigma + 2) continue;
          const std::uint64_t rule_total = size - axiom_len - sigma - 2;
          if (rule_total < sigma) continue;
          if (try_shape(sigma, axiom_len, rule_total)) {
            result_.size = size;
            result_.nodes = nodes_;
            return result_;
          }
        }
      }
    }
    return std::nullopt;
  }

 private:
  bool try_shape(std::uint64_t sigma, std::uint64_t axiom_len, std::uint64_t rule_total) {
    sigma_ = sigma;
    std::vector<std::uint64_t> lengths;
    return compose(lengths, rule_total, axiom_len);
  }

  // Compositions of `remaining` into the rule lengths still unassigned.
  bool compose(std::vector<std::uint64_t>& lengths, std::uint64_t remaining,
               std::uint64_t axiom_len) {
    const std::uint64_t left = sigma_ - lengths.size();
    if (left == 1) {
      lengths.push_back(remaining);
      const bool found = try_lengths(lengths, axiom_len);
      lengths.pop_back();
      return found;
    }
    for (std::uint64_t first = 1; first + (left - 1) <= remaining; ++first) {
      lengths.push_back(first);
      if (compose(lengths, remaining - first, axiom_len)) return true;
      lengths.pop_back();
    }
    return false;
  }

  bool try_lengths(const std::vector<std::uint64_t>& lengths, std::uint64_t axiom_len) {
    std::uint64_t cells = 0;
    for (auto len : lengths) cells += len;
    std::vector<SymbolId> content(cells + axiom_len, 0);
    // Odometer over all rule contents and axioms.
    while (true) {
      count_node();
      std::vector<Word> rules(sigma_);
      std::size_t at = 0;
      for (std::size_t a = 0; a < sigma_; ++a) {
        rules[a].assign(content.begin() + static_cast<std::ptrdiff_t>(at),
                        content.begin() + static_cast<std::ptrdiff_t>(at + lengths[a]));
        at += lengths[a];
      }
      Word axiom(content.begin() + static_cast<std::ptrdiff_t>(at), content.end());
      if (check(rules, axiom)) return true;
      std::size_t i = content.size();
      while (i > 0 && content[i - 1] + 1 == sigma_) content[--i] = 0;
      if (i == 0) return false;
      ++content[i - 1];
    }
  }

  // Finds the smallest level whose length-m prefix can be coded onto w.
  bool check(const std::vector<Word>& rules, const Word& axiom) {
    Word prefix = axiom;
    if (prefix.size() > m_) prefix.resize(m_);
    Word next;
    for (std::uint64_t d = 0; d <= d_max_; ++d) {
      if (d > 0) {
        next.clear();
        for (SymbolId s : prefix) {
          next.insert(next.end(), rules[s].begin(), rules[s].end());
          if (next.size() >= m_) break;
        }
        if (next.size() > m_) next.resize(m_);
        if (next == prefix) return false;  // fixed from here on
        prefix.swap(next);
      }
      if (prefix.size() < m_) continue;
      std::vector<std::int64_t> coding(sigma_, -1);
      bool consistent = true;
      for (std::size_t i = 0; i < m_ && consistent; ++i) {
        const auto target = static_cast<std::int64_t>(target_index(w_[i]));
        if (coding[prefix[i]] == -1) {
          coding[prefix[i]] = target;
        } else if (coding[prefix[i]] != target) {
          consistent = false;
        }
      }
      if (consistent) {
        materialize(rules, axiom, coding, d);
        return true;
      }
    }
    return false;
  }

  std::size_t target_index(char32_t c) const {
    return static_cast<std::size_t>(std::find(targets_.begin(), targets_.end(), c) -
                                    targets_.begin());
  }

  // Ids 0..|targets|-1 are named after w's symbols, the rest get fresh names.
  void materialize(const std::vector<Word>& rules, const Word& axiom,
                   const std::vector<std::int64_t>& coding, std::uint64_t level) {
    std::vector<char32_t> scalars = targets_;
    for (char32_t c : extra_scalars(targets_, sigma_ - targets_.size())) scalars.push_back(c);
    LSystem& sys = result_.system;
    sys.alphabet = Alphabet(scalars);
    sys.rules = rules;
    sys.axiom = axiom;
    sys.coding.assign(sigma_, 0);
    for (std::size_t a = 0; a < sigma_; ++a) {
      sys.coding[a] = coding[a] >= 0 ? static_cast<SymbolId>(coding[a]) : 0;
    }
    sys.level = level;
    sys.length = m_;
  }

  void count_node() {
    if (++nodes_ > budget_.node_cap) {
      throw LimitExceeded("L-system search exceeded the node cap of " +
                          std::to_string(budget_.node_cap));
    }
  }

  TextView w_;
  std::size_t m_;
  LSystemBudget budget_;
  std::vector<char32_t> targets_;
  std::uint64_t d_max_ = 0;
  std::uint64_t sigma_ = 0;
  std::uint64_t nodes_ = 0;
  LSystemSearchResult result_;
};

}  // namespace

std::optional<LSystemSearchResult> bounded_smallest_lsystem(TextView w,
                                                            const LSystemBudget& budget) {
  if (w.empty()) throw ContractViolation("L-system search requires a non-empty string");
  return LSystemEnumerator(w, budget).run();
}

ComplexityProfile brute_substrings(TextView w) {
  if (w.empty()) throw ContractViolation("substring enumeration requires a non-empty string");
  if (w.size() > 1000) throw ContractViolation("brute-force substring enumeration is for |w| <= 1000");
  ComplexityProfile profile;
  for (std::size_t k = 1; k <= w.size(); ++k) {
    std::set<Text> seen;
    for (std::size_t i = 0; i + k <= w.size(); ++i) seen.emplace(w.substr(i, k));
    profile.counts.push_back(seen.size());
    const Rational ratio(seen.size(), k);
    if (k == 1 || ratio > profile.delta) {
      profile.delta = ratio;
      profile.delta_at = k;
    }
  }
  return profile;
}

Text brute_bwt(TextView w) {
  if (w.empty()) throw ContractViolation("BWT requires a non-empty string");
  if (w.size() > 1000) throw ContractViolation("brute-force BWT is for |w| <= 1000");
  std::vector<Text> rotations;
  for (std::size_t i = 0; i < w.size(); ++i) {
    rotations.push_back(Text(w.substr(i)) + Text(w.substr(0, i)));
  }
  std::sort(rotations.begin(), rotations.end());
  Text out;
  for (const Text& rot : rotations) out.push_back(rot.back());
  return out;
}

}  // namespace repetilab
