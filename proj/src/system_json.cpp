#include "repetilab/system_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "repetilab/error.hpp"
#include "repetilab/utf8.hpp"

namespace repetilab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ParseError("unknown field \"" + key + "\" in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\" in " + where);
  return *it;
}

std::uint64_t as_u64(const json& value, const std::string& what) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
    throw ParseError(what + " must be a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

char32_t as_scalar(const json& value, const std::string& what) {
  if (!value.is_string()) throw ParseError(what + " must be a string");
  std::u32string s = utf8::decode(value.get<std::string>());
  if (s.size() != 1) throw ParseError(what + " must be exactly one Unicode scalar");
  return s.front();
}

SymbolId symbol(const Alphabet& alphabet, const json& value, const std::string& what) {
  char32_t c = as_scalar(value, what);
  auto id = alphabet.find(c);
  if (!id) throw ParseError("unknown " + what + " '" + utf8::render(c, true) + "'");
  return *id;
}

Word symbol_string(const Alphabet& alphabet, const json& value, const std::string& what) {
  if (!value.is_string()) throw ParseError(what + " must be a string");
  Word w;
  for (char32_t c : utf8::decode(value.get<std::string>())) {
    auto id = alphabet.find(c);
    if (!id) throw ParseError("unknown " + what + " symbol '" + utf8::render(c, true) + "'");
    w.push_back(*id);
  }
  return w;
}

TokenSeq token_array(const Alphabet& alphabet, const json& value, const std::string& what) {
  if (!value.is_array()) throw ParseError(what + " must be a token array");
  TokenSeq seq;
  for (const json& item : value) {
    if (item.is_string()) {
      seq.emplace_back(Plain{symbol(alphabet, item, what + " symbol")});
      continue;
    }
    if (!item.is_object()) throw ParseError(what + " tokens must be strings or {\"ext\":...}");
    reject_unknown_fields(item, {"ext"}, what + " token");
    const json& ext = require(item, "ext", what + " token");
    if (!ext.is_object()) throw ParseError("\"ext\" must be an object");
    reject_unknown_fields(ext, {"sym", "level", "from", "to"}, "extraction token");
    Extract e;
    e.sym = symbol(alphabet, require(ext, "sym", "extraction token"), "extraction symbol");
    e.level = as_u64(require(ext, "level", "extraction token"), "extraction level");
    e.from = as_u64(require(ext, "from", "extraction token"), "extraction start");
    e.to = as_u64(require(ext, "to", "extraction token"), "extraction end");
    seq.emplace_back(e);
  }
  return seq;
}

template <typename Rhs, typename ParseRhs>
std::vector<Rhs> rule_table(const Alphabet& alphabet, const json& rules, ParseRhs parse_rhs) {
  if (!rules.is_object()) throw ParseError("\"rules\" must be an object");
  std::vector<Rhs> table(alphabet.size());
  for (const auto& [key, rhs] : rules.items()) {
    SymbolId a = symbol(alphabet, json(key), "rule symbol");
    table[a] = parse_rhs(rhs, "rule for '" + key + "'");
  }
  return table;
}

std::vector<SymbolId> coding_table(const Alphabet& alphabet, const json& obj) {
  auto it = obj.find("coding");
  if (it == obj.end()) return identity_coding(alphabet.size());
  if (!it->is_object()) throw ParseError("\"coding\" must be an object");
  std::vector<SymbolId> coding(alphabet.size());
  std::vector<bool> seen(alphabet.size(), false);
  for (const auto& [key, target] : it->items()) {
    SymbolId a = symbol(alphabet, json(key), "coding symbol");
    coding[a] = symbol(alphabet, target, "coding target");
    seen[a] = true;
  }
  for (SymbolId a = 0; a < seen.size(); ++a) {
    if (!seen[a]) throw ParseError("coding has no entry for '" + alphabet.describe(a) + "'");
  }
  return coding;
}

Alphabet parse_alphabet(const json& value) {
  if (!value.is_array() || value.empty()) throw ParseError("\"alphabet\" must be a non-empty array");
  std::vector<char32_t> scalars;
  std::set<char32_t> seen;
  for (const json& item : value) {
    char32_t c = as_scalar(item, "alphabet entry");
    if (!seen.insert(c).second) {
      throw ParseError("duplicate alphabet symbol '" + utf8::render(c, true) + "'");
    }
    scalars.push_back(c);
  }
  return Alphabet(std::move(scalars));
}

ordered_json symbol_json(const Alphabet& alphabet, SymbolId id) {
  return utf8::encode(alphabet.scalar(id));
}

ordered_json tokens_json(const Alphabet& alphabet, const TokenSeq& seq) {
  ordered_json arr = ordered_json::array();
  for (const NUToken& token : seq) {
    if (const auto* p = std::get_if<Plain>(&token)) {
      arr.push_back(symbol_json(alphabet, p->sym));
    } else {
      const auto& e = std::get<Extract>(token);
      ordered_json ext;
      ext["sym"] = symbol_json(alphabet, e.sym);
      ext["level"] = e.level;
      ext["from"] = e.from;
      ext["to"] = e.to;
      ordered_json wrapper;
      wrapper["ext"] = std::move(ext);
      arr.push_back(std::move(wrapper));
    }
  }
  return arr;
}

template <typename System>
ordered_json frame_json(const System& system, const char* kind) {
  ordered_json out;
  out["kind"] = kind;
  ordered_json alphabet = ordered_json::array();
  for (SymbolId a = 0; a < system.sigma(); ++a) alphabet.push_back(symbol_json(system.alphabet, a));
  out["alphabet"] = std::move(alphabet);
  return out;
}

}  // namespace

AnySystem parse_system(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("system description must be a JSON object");
  reject_unknown_fields(doc, {"kind", "alphabet", "rules", "coding", "axiom", "level", "length"},
                        "system");
  const json& kind = require(doc, "kind", "system");
  if (!kind.is_string()) throw ParseError("\"kind\" must be a string");
  Alphabet alphabet = parse_alphabet(require(doc, "alphabet", "system"));
  const std::uint64_t level = as_u64(require(doc, "level", "system"), "level");
  const std::uint64_t length = as_u64(require(doc, "length", "system"), "length");

  if (kind == "lsystem") {
    LSystem system;
    system.rules = rule_table<Word>(alphabet, require(doc, "rules", "system"),
                                    [&](const json& rhs, const std::string& what) {
                                      return symbol_string(alphabet, rhs, what);
                                    });
    system.coding = coding_table(alphabet, doc);
    system.axiom = symbol_string(alphabet, require(doc, "axiom", "system"), "axiom");
    system.alphabet = std::move(alphabet);
    system.level = level;
    system.length = length;
    return system;
  }
  if (kind == "nusystem") {
    NUSystem system;
    system.rules = rule_table<TokenSeq>(alphabet, require(doc, "rules", "system"),
                                        [&](const json& rhs, const std::string& what) {
                                          return token_array(alphabet, rhs, what);
                                        });
    system.coding = coding_table(alphabet, doc);
    system.axiom = token_array(alphabet, require(doc, "axiom", "system"), "axiom");
    system.alphabet = std::move(alphabet);
    system.level = level;
    system.length = length;
    return system;
  }
  throw ParseError("unknown system kind \"" + kind.get<std::string>() + "\"");
}

AnySystem load_system(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

std::string to_json(const LSystem& system) {
  ordered_json out = frame_json(system, "lsystem");
  ordered_json rules = ordered_json::object();
  ordered_json coding = ordered_json::object();
  for (SymbolId a = 0; a < system.sigma(); ++a) {
    const std::string key = utf8::encode(system.alphabet.scalar(a));
    rules[key] = utf8::encode(system.alphabet.render(system.rules.at(a)));
    coding[key] = symbol_json(system.alphabet, system.coding.at(a));
  }
  out["rules"] = std::move(rules);
  out["coding"] = std::move(coding);
  out["axiom"] = utf8::encode(system.alphabet.render(system.axiom));
  out["level"] = system.level;
  out["length"] = system.length;
  return out.dump();
}

std::string to_json(const NUSystem& system) {
  ordered_json out = frame_json(system, "nusystem");
  ordered_json rules = ordered_json::object();
  ordered_json coding = ordered_json::object();
  for (SymbolId a = 0; a < system.sigma(); ++a) {
    const std::string key = utf8::encode(system.alphabet.scalar(a));
    rules[key] = tokens_json(system.alphabet, system.rules.at(a));
    coding[key] = symbol_json(system.alphabet, system.coding.at(a));
  }
  out["rules"] = std::move(rules);
  out["coding"] = std::move(coding);
  out["axiom"] = tokens_json(system.alphabet, system.axiom);
  out["level"] = system.level;
  out["length"] = system.length;
  return out.dump();
}

}  // namespace repetilab
