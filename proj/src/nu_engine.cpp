#include "repetilab/nu_engine.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "repetilab/error.hpp"

namespace repetilab {

namespace {

template <typename Visit>
void for_each_extract(const NUSystem& system, Visit visit) {
  for (const TokenSeq& rhs : system.rules) {
    for (const NUToken& t : rhs) {
      if (const auto* e = std::get_if<Extract>(&t)) visit(*e);
    }
  }
  for (const NUToken& t : system.axiom) {
    if (const auto* e = std::get_if<Extract>(&t)) visit(*e);
  }
}

std::vector<Word> plain_children(const NUSystem& system) {
  std::vector<Word> children(system.sigma());
  for (SymbolId a = 0; a < system.rules.size() && a < children.size(); ++a) {
    for (const NUToken& t : system.rules[a]) {
      if (const auto* p = std::get_if<Plain>(&t)) children[a].push_back(p->sym);
    }
  }
  return children;
}

std::vector<std::uint64_t> inert_counts(const NUSystem& system) {
  std::vector<std::uint64_t> counts(system.sigma(), 0);
  for (SymbolId a = 0; a < system.rules.size() && a < counts.size(); ++a) {
    for (const NUToken& t : system.rules[a]) {
      if (const auto* e = std::get_if<Extract>(&t)) counts[a] += e->width();
    }
  }
  return counts;
}

}  // namespace

std::string describe_token(const Alphabet& alphabet, const Extract& token) {
  return alphabet.describe(token.sym) + "(" + std::to_string(token.level) + ")[" +
         std::to_string(token.from) + ":" + std::to_string(token.to) + "]";
}

ExtractionGraph ExtractionGraph::build(const NUSystem& system) {
  ExtractionGraph g;
  for_each_extract(system, [&](const Extract& e) { g.nodes.push_back(e); });
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  g.edges.resize(g.nodes.size());

  const std::size_t sigma = system.sigma();
  const std::vector<Word> children = plain_children(system);
  auto index_of = [&](const Extract& e) {
    return static_cast<std::size_t>(std::lower_bound(g.nodes.begin(), g.nodes.end(), e) -
                                    g.nodes.begin());
  };

  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    const Extract& token = g.nodes[u];
    if (token.sym >= sigma || token.level == 0) continue;
    // Breadth-first distances from token.sym over plain rule symbols.
    constexpr std::uint64_t kUnseen = ~std::uint64_t{0};
    std::vector<std::uint64_t> dist(sigma, kUnseen);
    std::deque<SymbolId> queue{token.sym};
    dist[token.sym] = 0;
    while (!queue.empty()) {
      SymbolId b = queue.front();
      queue.pop_front();
      if (dist[b] + 1 >= token.level) continue;
      for (SymbolId c : children[b]) {
        if (c < sigma && dist[c] == kUnseen) {
          dist[c] = dist[b] + 1;
          queue.push_back(c);
        }
      }
    }
    std::vector<std::size_t>& out = g.edges[u];
    for (SymbolId b = 0; b < sigma; ++b) {
      if (dist[b] == kUnseen || b >= system.rules.size()) continue;
      for (const NUToken& t : system.rules[b]) {
        if (const auto* e = std::get_if<Extract>(&t)) out.push_back(index_of(*e));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return g;
}

std::optional<std::vector<Extract>> ExtractionGraph::find_cycle() const {
  enum class Color { kWhite, kGray, kBlack };
  std::vector<Color> color(nodes.size(), Color::kWhite);
  std::vector<std::size_t> parent(nodes.size(), 0);
  // Iterative DFS; each stack entry is (node, next edge index).
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < nodes.size(); ++root) {
    if (color[root] != Color::kWhite) continue;
    stack.emplace_back(root, 0);
    color[root] = Color::kGray;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next == edges[u].size()) {
        color[u] = Color::kBlack;
        stack.pop_back();
        continue;
      }
      const std::size_t v = edges[u][next++];
      if (color[v] == Color::kGray) {
        std::vector<Extract> cycle{nodes[v]};
        for (std::size_t w = u; w != v; w = parent[w]) cycle.push_back(nodes[w]);
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (color[v] == Color::kWhite) {
        parent[v] = u;
        color[v] = Color::kGray;
        stack.emplace_back(v, 0);
      }
    }
  }
  return std::nullopt;
}

ValidationResult validate_nu(const NUSystem& system) {
  ValidationResult result = validate_nu_structure(system);
  if (auto cycle = ExtractionGraph::build(system).find_cycle()) {
    std::string text = "extraction cycle: ";
    for (const Extract& e : *cycle) text += describe_token(system.alphabet, e) + " -> ";
    text += describe_token(system.alphabet, cycle->front());
    result.violations.push_back(std::move(text));
  }
  return result;
}

struct NUEvaluator::Frame {
  const Word* inert;  // resolved extraction, or nullptr for a plain symbol
  SymbolId sym;
  std::uint64_t level;
  std::uint64_t lo;
  std::uint64_t hi;
};

NUEvaluator::NUEvaluator(const NUSystem& system, bool memoize)
    : system_(system),
      memoize_(memoize),
      table_(plain_children(system), inert_counts(system),
             system.length < LengthTable::kBigCap ? system.length + 1 : LengthTable::kBigCap) {
  ValidationResult check = validate_nu(system_);
  if (!check.ok()) throw ContractViolation("invalid NU-system: " + check.violations.front());
}

std::uint64_t NUEvaluator::seq_length(const TokenSeq& seq, std::uint64_t t) {
  table_.ensure_level(t);
  std::uint64_t total = 0;
  for (const NUToken& token : seq) {
    const std::uint64_t len = std::holds_alternative<Plain>(token)
                                  ? table_.at(std::get<Plain>(token).sym, t)
                                  : std::get<Extract>(token).width();
    total = LengthTable::add(total, len, table_.cap());
  }
  return total;
}

const Word& NUEvaluator::resolve(const Extract& token) {
  if (memoize_) {
    if (auto it = memo_.find(token); it != memo_.end()) return it->second;
  }
  table_.ensure_level(token.level);
  if (table_.at(token.sym, token.level) < token.to) {
    throw EvalError("slice beyond expansion: " + describe_token(system_.alphabet, token) +
                    " exceeds the level-" + std::to_string(token.level) + " expansion");
  }
  ++resolutions_;
  Word out;
  out.reserve(token.width());
  emit(TokenSeq{Plain{token.sym}}, token.level, token.from, token.to, out);
  if (memoize_) return memo_.emplace(token, std::move(out)).first->second;
  return scratch_.emplace_back(std::move(out));
}

void NUEvaluator::push_tokens(const TokenSeq& seq, std::uint64_t t, std::uint64_t lo,
                              std::uint64_t hi, std::vector<Frame>& stack) {
  const std::size_t base = stack.size();
  std::uint64_t offset = 0;
  for (const NUToken& token : seq) {
    if (offset >= hi) break;
    const auto* plain = std::get_if<Plain>(&token);
    const std::uint64_t len =
        plain ? table_.at(plain->sym, t) : std::get<Extract>(token).width();
    const std::uint64_t end = LengthTable::add(offset, len, table_.cap());
    if (end >= lo) {
      const std::uint64_t from = lo > offset ? lo - offset : 1;
      const std::uint64_t to = hi - offset < len ? hi - offset : len;
      if (plain) {
        stack.push_back({nullptr, plain->sym, t, from, to});
      } else {
        stack.push_back({&resolve(std::get<Extract>(token)), 0, 0, from, to});
      }
    }
    offset = end;
  }
  std::reverse(stack.begin() + static_cast<std::ptrdiff_t>(base), stack.end());
}

void NUEvaluator::emit(const TokenSeq& roots, std::uint64_t t, std::uint64_t lo, std::uint64_t hi,
                       Word& out) {
  table_.ensure_level(t);
  std::vector<Frame> stack;
  push_tokens(roots, t, lo, hi, stack);
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.inert) {
      out.insert(out.end(), f.inert->begin() + static_cast<std::ptrdiff_t>(f.lo - 1),
                 f.inert->begin() + static_cast<std::ptrdiff_t>(f.hi));
      continue;
    }
    const TokenSeq* rhs = &system_.rules[f.sym];
    while (f.level > 0 && rhs->size() == 1 && std::holds_alternative<Plain>(rhs->front())) {
      const SymbolId next = std::get<Plain>(rhs->front()).sym;
      if (next == f.sym) {
        f.level = 0;
      } else {
        f.sym = next;
        --f.level;
        rhs = &system_.rules[f.sym];
      }
    }
    if (f.level == 0) {
      out.push_back(system_.coding[f.sym]);
      continue;
    }
    push_tokens(*rhs, f.level - 1, f.lo, f.hi, stack);
  }
}

Word NUEvaluator::generate_slice(std::uint64_t i, std::uint64_t j) {
  if (i < 1 || i > j) throw ContractViolation("slice bounds must satisfy 1 <= i <= j");
  if (j > system_.length) throw ContractViolation("slice end beyond the system length");
  const std::uint64_t len = seq_length(system_.axiom, system_.level);
  if (len < system_.length) {
    throw EvalError("prefix longer than expansion: n = " + std::to_string(system_.length) +
                    " but the expansion has length " +
                    (len >= table_.cap() ? "at least " + std::to_string(table_.cap())
                                         : std::to_string(len)));
  }
  Word out;
  out.reserve(j - i + 1);
  emit(system_.axiom, system_.level, i, j, out);
  return out;
}

Word NUEvaluator::generate() { return generate_slice(1, system_.length); }

Word resolve_extraction(const NUSystem& system, const Extract& token) {
  NUEvaluator evaluator(system);
  return evaluator.resolve(token);
}

Word nu_generate(const NUSystem& system) { return NUEvaluator(system).generate(); }

}  // namespace repetilab
