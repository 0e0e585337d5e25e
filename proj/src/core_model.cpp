#include "repetilab/core_model.hpp"

#include <algorithm>

#include "repetilab/error.hpp"
#include "repetilab/utf8.hpp"

namespace repetilab {

Alphabet::Alphabet(std::vector<char32_t> scalars) : scalars_(std::move(scalars)) {
  if (scalars_.empty()) throw ContractViolation("alphabet must not be empty");
  for (SymbolId id = 0; id < scalars_.size(); ++id) {
    if (!index_.emplace(scalars_[id], id).second) {
      throw ContractViolation("duplicate alphabet symbol '" + utf8::render(scalars_[id], true) +
                              "'");
    }
  }
}

Alphabet Alphabet::from_ascii(std::string_view chars) {
  return Alphabet(std::vector<char32_t>(chars.begin(), chars.end()));
}

std::optional<SymbolId> Alphabet::find(char32_t scalar) const {
  auto it = index_.find(scalar);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymbolId Alphabet::id(char32_t scalar) const {
  auto found = find(scalar);
  if (!found) {
    throw ContractViolation("symbol '" + utf8::render(scalar, true) + "' not in alphabet");
  }
  return *found;
}

Word Alphabet::word(std::u32string_view text) const {
  Word w;
  w.reserve(text.size());
  for (char32_t c : text) w.push_back(id(c));
  return w;
}

Word Alphabet::word_ascii(std::string_view text) const {
  Word w;
  w.reserve(text.size());
  for (char c : text) w.push_back(id(static_cast<unsigned char>(c)));
  return w;
}

std::u32string Alphabet::render(const Word& w) const {
  std::u32string out;
  out.reserve(w.size());
  for (SymbolId s : w) out.push_back(scalar(s));
  return out;
}

std::string Alphabet::describe(SymbolId id) const {
  if (id < scalars_.size()) return utf8::render(scalars_[id], true);
  return "#" + std::to_string(id);
}

std::vector<SymbolId> identity_coding(std::size_t sigma) {
  std::vector<SymbolId> coding(sigma);
  for (SymbolId a = 0; a < sigma; ++a) coding[a] = a;
  return coding;
}

TokenSeq plain_tokens(const Word& w) {
  TokenSeq out;
  out.reserve(w.size());
  for (SymbolId s : w) out.emplace_back(Plain{s});
  return out;
}

NUSystem to_nu(const LSystem& system) {
  NUSystem nu;
  nu.alphabet = system.alphabet;
  for (const Word& rhs : system.rules) nu.rules.push_back(plain_tokens(rhs));
  nu.coding = system.coding;
  nu.axiom = plain_tokens(system.axiom);
  nu.level = system.level;
  nu.length = system.length;
  return nu;
}

namespace {

// Shared checks for the alphabet, coding, level and length.
void check_frame(const Alphabet& alphabet, std::size_t rule_count,
                 const std::vector<SymbolId>& coding, std::uint64_t level, std::uint64_t length,
                 std::vector<std::string>& out) {
  const std::size_t sigma = alphabet.size();
  if (sigma == 0) out.emplace_back("empty alphabet");
  if (rule_count != sigma) {
    out.emplace_back("rule table has " + std::to_string(rule_count) + " entries for " +
                     std::to_string(sigma) + " symbols");
  }
  if (coding.size() != sigma) {
    out.emplace_back("coding has " + std::to_string(coding.size()) + " entries for " +
                     std::to_string(sigma) + " symbols");
  }
  for (SymbolId a = 0; a < coding.size(); ++a) {
    if (coding[a] >= sigma) {
      out.emplace_back("coding maps " + alphabet.describe(a) + " to unknown symbol " +
                       alphabet.describe(coding[a]));
    }
  }
  if (length == 0) out.emplace_back("length must be positive");
  // d <= n^2; for n >= 2^32 the square exceeds every 64-bit level.
  if (length < (std::uint64_t{1} << 32) && level > length * length) {
    out.emplace_back("level " + std::to_string(level) + " exceeds length^2 = " +
                     std::to_string(length * length));
  }
}

}  // namespace

ValidationResult validate_lsystem(const LSystem& system) {
  ValidationResult result;
  auto& out = result.violations;
  const std::size_t sigma = system.sigma();
  check_frame(system.alphabet, system.rules.size(), system.coding, system.level, system.length,
              out);
  for (SymbolId a = 0; a < system.rules.size(); ++a) {
    const Word& rhs = system.rules[a];
    if (rhs.empty()) out.push_back("empty rule for " + system.alphabet.describe(a));
    for (SymbolId b : rhs) {
      if (b >= sigma) {
        out.push_back("rule for " + system.alphabet.describe(a) + " uses unknown symbol " +
                      system.alphabet.describe(b));
      }
    }
  }
  if (system.axiom.empty()) out.emplace_back("empty axiom");
  for (SymbolId s : system.axiom) {
    if (s >= sigma) out.push_back("unknown axiom symbol " + system.alphabet.describe(s));
  }
  return result;
}

namespace {

void check_tokens(const NUSystem& system, const TokenSeq& seq, const std::string& where,
                  std::vector<std::string>& out) {
  const std::size_t sigma = system.sigma();
  const Alphabet& alphabet = system.alphabet;
  for (const NUToken& token : seq) {
    if (const auto* plain = std::get_if<Plain>(&token)) {
      if (plain->sym >= sigma) {
        out.push_back(where + " uses unknown symbol " + alphabet.describe(plain->sym));
      }
      continue;
    }
    const auto& ext = std::get<Extract>(token);
    const std::string name = alphabet.describe(ext.sym) + "(" + std::to_string(ext.level) + ")[" +
                             std::to_string(ext.from) + ":" + std::to_string(ext.to) + "]";
    if (ext.sym >= sigma) out.push_back(where + " extracts from unknown symbol in " + name);
    if (ext.from < 1 || ext.from > ext.to) {
      out.push_back(where + " has empty or inverted slice " + name);
    }
    if (ext.to > system.length) {
      out.push_back(where + " slice end exceeds length " + std::to_string(system.length) +
                    " in " + name);
    }
    if (ext.level > system.length) {
      out.push_back(where + " level exceeds length " + std::to_string(system.length) + " in " +
                    name);
    }
  }
}

}  // namespace

ValidationResult validate_nu_structure(const NUSystem& system) {
  ValidationResult result;
  auto& out = result.violations;
  check_frame(system.alphabet, system.rules.size(), system.coding, system.level, system.length,
              out);
  for (SymbolId a = 0; a < system.rules.size(); ++a) {
    const std::string where = "rule for " + system.alphabet.describe(a);
    if (system.rules[a].empty()) out.push_back("empty rule for " + system.alphabet.describe(a));
    check_tokens(system, system.rules[a], where, out);
  }
  if (system.axiom.empty()) out.emplace_back("empty axiom");
  check_tokens(system, system.axiom, "axiom", out);
  return result;
}

std::uint64_t system_size(const LSystem& system) {
  std::uint64_t total = 0;
  for (const Word& rhs : system.rules) total += rhs.size();
  return total + system.axiom.size() + system.sigma() + 2;
}

namespace {

std::uint64_t token_size(const TokenSeq& seq) {
  std::uint64_t total = 0;
  for (const NUToken& t : seq) total += std::holds_alternative<Extract>(t) ? 4 : 1;
  return total;
}

}  // namespace

std::uint64_t nu_size(const NUSystem& system) {
  std::uint64_t total = 0;
  for (const TokenSeq& rhs : system.rules) total += token_size(rhs);
  return total + token_size(system.axiom) + system.sigma() + 2;
}

std::uint64_t rules_width(const LSystem& system) {
  std::uint64_t width = 0;
  for (const Word& rhs : system.rules) width = std::max<std::uint64_t>(width, rhs.size());
  return width;
}

VariantClasses classify(const LSystem& system) {
  VariantClasses c;
  const auto& rules = system.rules;
  c.expanding = !rules.empty() &&
                std::all_of(rules.begin(), rules.end(), [](const Word& r) { return r.size() >= 2; });
  c.uniform = c.expanding && std::all_of(rules.begin(), rules.end(), [&](const Word& r) {
                return r.size() == rules.front().size();
              });
  if (system.axiom.size() == 1) {
    const SymbolId a = system.axiom.front();
    if (a < rules.size() && rules[a].size() >= 2 && rules[a].front() == a) {
      c.prolongable = true;
      c.prolongable_on = a;
    }
  }
  c.identity_coding = true;
  for (SymbolId a = 0; a < system.coding.size(); ++a) {
    if (system.coding[a] != a) c.identity_coding = false;
  }
  c.class_lm = c.prolongable;
  c.class_ld = c.identity_coding;
  c.class_le = c.expanding;
  c.class_lu = c.uniform;
  c.class_lp = c.prolongable && c.identity_coding;
  c.class_la = c.prolongable && c.uniform;
  return c;
}

std::string describe(const VariantClasses& c, const Alphabet& alphabet) {
  std::vector<std::string> parts;
  if (c.prolongable) parts.push_back("prolongable(" + alphabet.describe(*c.prolongable_on) + ")");
  if (c.expanding) parts.emplace_back("expanding");
  if (c.uniform) parts.emplace_back("uniform");
  if (c.identity_coding) parts.emplace_back("identity-coding");
  if (c.class_lm) parts.emplace_back("ℓ_m");
  if (c.class_ld) parts.emplace_back("ℓ_d");
  if (c.class_le) parts.emplace_back("ℓ_e");
  if (c.class_lu) parts.emplace_back("ℓ_u");
  if (c.class_lp) parts.emplace_back("ℓ_p");
  if (c.class_la) parts.emplace_back("ℓ_a");
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out.empty() ? "unrestricted" : out;
}

}  // namespace repetilab
