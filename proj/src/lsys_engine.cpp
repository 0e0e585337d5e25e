#include "repetilab/lsys_engine.hpp"

#include <algorithm>
#include <string>

#include "repetilab/error.hpp"

namespace repetilab {

LengthTable::LengthTable(const std::vector<Word>& rules, std::uint64_t cap)
    : LengthTable(rules, std::vector<std::uint64_t>(rules.size(), 0), cap) {}

LengthTable::LengthTable(std::vector<Word> plain_children, std::vector<std::uint64_t> inert_counts,
                         std::uint64_t cap)
    : children_(std::move(plain_children)), inert_(std::move(inert_counts)), cap_(cap) {
  if (cap_ == 0) throw ContractViolation("length table cap must be positive");
  data_.assign(sigma(), std::min<std::uint64_t>(1, cap_));
}

void LengthTable::ensure_level(std::uint64_t t) {
  const std::size_t s = sigma();
  while (!stable_ && rows() <= t) {
    const std::size_t prev = data_.size() - s;
    for (SymbolId a = 0; a < s; ++a) {
      std::uint64_t total = std::min(inert_[a], cap_);
      for (SymbolId b : children_[a]) {
        total = add(total, data_[prev + b], cap_);
        if (total >= cap_) break;
      }
      data_.push_back(total);
    }
    if (std::equal(data_.begin() + static_cast<std::ptrdiff_t>(prev),
                   data_.begin() + static_cast<std::ptrdiff_t>(prev + s),
                   data_.end() - static_cast<std::ptrdiff_t>(s))) {
      data_.resize(prev + s);
      stable_ = true;
    }
  }
}

namespace {

struct Frame {
  SymbolId sym;
  std::uint64_t level;
  std::uint64_t lo;  // 1-based, inclusive, within φ^level(sym)
  std::uint64_t hi;
};

// Walks the derivation tree of φ^t, emitting coded leaves in order.
class Descender {
 public:
  Descender(const LSystem& system, LengthTable& table) : system_(system), table_(table) {}

  // Appends τ(φ^t(w))[lo:hi]; caller has checked hi <= |φ^t(w)|.
  void emit_word(const Word& w, std::uint64_t t, std::uint64_t lo, std::uint64_t hi, Word& out) {
    table_.ensure_level(t);
    std::vector<Frame> stack;
    push_children(w, t, lo, hi, stack);
    run(stack, out);
  }

 private:
  void push_children(const Word& rhs, std::uint64_t t, std::uint64_t lo, std::uint64_t hi,
                     std::vector<Frame>& stack) {
    // Children overlapping [lo, hi], pushed in reverse so the leftmost pops first.
    const std::size_t base = stack.size();
    std::uint64_t offset = 0;  // symbols before the current child
    for (SymbolId b : rhs) {
      if (offset >= hi) break;
      const std::uint64_t len = table_.at(b, t);
      const std::uint64_t end = LengthTable::add(offset, len, table_.cap());
      if (end >= lo) {
        const std::uint64_t from = lo > offset ? lo - offset : 1;
        const std::uint64_t to = hi - offset < len ? hi - offset : len;
        stack.push_back({b, t, from, to});
      }
      offset = end;
    }
    std::reverse(stack.begin() + static_cast<std::ptrdiff_t>(base), stack.end());
  }

  void run(std::vector<Frame>& stack, Word& out) {
    const auto& rules = system_.rules;
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      // Unary chains and fixed symbols descend without branching.
      while (f.level > 0 && rules[f.sym].size() == 1) {
        if (rules[f.sym].front() == f.sym) {
          f.level = 0;
        } else {
          f.sym = rules[f.sym].front();
          --f.level;
        }
      }
      if (f.level == 0) {
        out.push_back(system_.coding[f.sym]);
        continue;
      }
      push_children(rules[f.sym], f.level - 1, f.lo, f.hi, stack);
    }
  }

  const LSystem& system_;
  LengthTable& table_;
};

std::uint64_t word_length(const LengthTable& table, const Word& w, std::uint64_t t) {
  std::uint64_t total = 0;
  for (SymbolId s : w) total = LengthTable::add(total, table.at(s, t), table.cap());
  return total;
}

std::string length_note(std::uint64_t len, const LengthTable& table) {
  if (len >= table.cap()) return "at least " + std::to_string(table.cap());
  return std::to_string(len);
}

void require_valid(const LSystem& system) {
  auto result = validate_lsystem(system);
  if (!result.ok()) throw ContractViolation("invalid L-system: " + result.violations.front());
}

}  // namespace

Word expand_symbol_full(const LSystem& system, SymbolId a, std::uint64_t levels,
                        std::uint64_t guard) {
  require_valid(system);
  if (a >= system.sigma()) throw ContractViolation("symbol outside alphabet");
  Word current{a};
  Word next;
  for (std::uint64_t t = 0; t < levels; ++t) {
    next.clear();
    for (SymbolId s : current) {
      const Word& rhs = system.rules[s];
      if (next.size() + rhs.size() > guard) {
        throw LimitExceeded("expansion too large: level " + std::to_string(t + 1) +
                            " exceeds guard of " + std::to_string(guard) + " symbols");
      }
      next.insert(next.end(), rhs.begin(), rhs.end());
    }
    current.swap(next);
  }
  for (SymbolId& s : current) s = system.coding[s];
  return current;
}

Word expand_full(const LSystem& system, std::uint64_t guard) {
  require_valid(system);
  Word out;
  for (SymbolId s : system.axiom) {
    Word part = expand_symbol_full(system, s, system.level, guard);
    if (out.size() + part.size() > guard) {
      throw LimitExceeded("expansion too large: exceeds guard of " + std::to_string(guard) +
                          " symbols");
    }
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Word generate_slice(const LSystem& system, std::uint64_t i, std::uint64_t j) {
  require_valid(system);
  if (i < 1 || i > j) throw ContractViolation("slice bounds must satisfy 1 <= i <= j");
  if (j > system.length) throw ContractViolation("slice end beyond the system length");
  LengthTable table(system.rules, system.length + 1);
  table.ensure_level(system.level);
  const std::uint64_t len = word_length(table, system.axiom, system.level);
  if (len < system.length) {
    throw EvalError("prefix longer than expansion: n = " + std::to_string(system.length) +
                    " but the expansion has length " + length_note(len, table));
  }
  Word out;
  out.reserve(j - i + 1);
  Descender(system, table).emit_word(system.axiom, system.level, i, j, out);
  return out;
}

Word generate(const LSystem& system) { return generate_slice(system, 1, system.length); }

Word extract(const LSystem& system, SymbolId a, std::uint64_t t, std::uint64_t i,
             std::uint64_t j) {
  require_valid(system);
  if (a >= system.sigma()) throw ContractViolation("symbol outside alphabet");
  if (i < 1 || i > j) throw ContractViolation("slice bounds must satisfy 1 <= i <= j");
  if (j >= LengthTable::kBigCap) throw ContractViolation("slice end too large");
  LengthTable table(system.rules, j + 1);
  table.ensure_level(t);
  if (table.at(a, t) < j) {
    throw EvalError("slice beyond expansion: requested end " + std::to_string(j) +
                    " but the expansion has length " + length_note(table.at(a, t), table));
  }
  Word out;
  out.reserve(j - i + 1);
  Descender(system, table).emit_word(Word{a}, t, i, j, out);
  return out;
}

Word fixed_point_prefix(const LSystem& system, std::uint64_t m) {
  require_valid(system);
  const VariantClasses classes = classify(system);
  if (!classes.prolongable) throw ContractViolation("fixed point requires a prolongable system");
  if (m < 1) throw ContractViolation("prefix length must be positive");
  const SymbolId a = *classes.prolongable_on;
  LengthTable table(system.rules, m + 1);
  std::uint64_t t = 0;
  while (table.at(a, t) < m) {
    if (t >= m) throw EvalError("growth stalled before reaching length " + std::to_string(m));
    ++t;
    table.ensure_level(t);
  }
  Word out;
  out.reserve(m);
  Descender(system, table).emit_word(Word{a}, t, 1, m, out);
  return out;
}

std::optional<std::uint64_t> expansion_length(const LSystem& system, std::uint64_t t) {
  require_valid(system);
  LengthTable table(system.rules, LengthTable::kBigCap);
  table.ensure_level(t);
  const std::uint64_t len = word_length(table, system.axiom, t);
  if (len >= LengthTable::kBigCap) return std::nullopt;
  return len;
}

}  // namespace repetilab
