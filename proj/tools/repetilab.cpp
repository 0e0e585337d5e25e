#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "repetilab/core_model.hpp"
#include "repetilab/error.hpp"
#include "repetilab/exact_small.hpp"
#include "repetilab/experiments.hpp"
#include "repetilab/families.hpp"
#include "repetilab/lsys_engine.hpp"
#include "repetilab/measures.hpp"
#include "repetilab/nu_engine.hpp"
#include "repetilab/system_json.hpp"
#include "repetilab/utf8.hpp"
#include "repetilab/verify.hpp"

namespace rl = repetilab;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kCap = 3 };

struct Globals {
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double timeout = 60.0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rl::ParseError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A text file holds one string; a single trailing line break is dropped.
rl::Text read_text(const std::string& path) {
  std::string bytes = read_file(path);
  if (!bytes.empty() && bytes.back() == '\n') bytes.pop_back();
  if (!bytes.empty() && bytes.back() == '\r') bytes.pop_back();
  return rl::utf8::decode(bytes);
}

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw rl::ParseError("cannot write " + g.output);
  out << text;
}

std::string render(const rl::Text& w, bool hex) {
  std::string out;
  for (char32_t c : w) out += rl::utf8::render(c, hex);
  return out;
}

rl::SymbolId symbol_id(const rl::Alphabet& alphabet, const std::string& name) {
  const rl::Text t = rl::utf8::decode(name);
  if (t.size() != 1) throw rl::ParseError("symbol must be a single scalar: \"" + name + "\"");
  const auto id = alphabet.find(t[0]);
  if (!id) throw rl::ParseError("unknown symbol \"" + name + "\"");
  return *id;
}

std::vector<std::uint64_t> parse_numbers(const std::string& list, std::size_t expected,
                                         const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw rl::ParseError("bad number \"" + item + "\" in " + what);
    }
  }
  if (expected && out.size() != expected) throw rl::ParseError("bad " + what);
  return out;
}

// "k=v" items, from repeated flags or a comma-separated list.
rl::families::FamilyParams parse_params(const std::vector<std::string>& items) {
  rl::families::FamilyParams params;
  for (const auto& raw : items) {
    std::stringstream in(raw);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw rl::ParseError("expected key=value, got \"" + item + "\"");
      params[item.substr(0, eq)] = parse_numbers(item.substr(eq + 1), 1, item.substr(0, eq))[0];
    }
  }
  return params;
}

int cmd_expand(const Globals& g, const std::string& path, std::optional<std::uint64_t> prefix,
               const std::string& slice, bool hex) {
  const rl::AnySystem any = rl::load_system(path);
  rl::Text out;
  if (const auto* sys = std::get_if<rl::LSystem>(&any)) {
    const auto v = rl::validate_lsystem(*sys);
    if (!v.ok()) throw rl::ParseError("invalid L-system: " + v.violations.front());
    if (!slice.empty()) {
      const std::string sym = slice.substr(0, slice.find(','));
      const auto nums = parse_numbers(slice.substr(sym.size() + 1), 3, "--slice");
      out = sys->alphabet.render(
          rl::extract(*sys, symbol_id(sys->alphabet, sym), nums[0], nums[1], nums[2]));
    } else if (prefix) {
      out = sys->alphabet.render(rl::generate_slice(*sys, 1, *prefix));
    } else {
      out = sys->alphabet.render(rl::generate(*sys));
    }
  } else {
    const auto& nu = std::get<rl::NUSystem>(any);
    rl::NUEvaluator eval(nu);
    if (!slice.empty()) {
      const std::string sym = slice.substr(0, slice.find(','));
      const auto nums = parse_numbers(slice.substr(sym.size() + 1), 3, "--slice");
      out = nu.alphabet.render(
          eval.resolve(rl::Extract{symbol_id(nu.alphabet, sym), nums[0], nums[1], nums[2]}));
    } else if (prefix) {
      out = nu.alphabet.render(eval.generate_slice(1, *prefix));
    } else {
      out = nu.alphabet.render(eval.generate());
    }
  }
  emit(g, render(out, hex) + "\n");
  return kOk;
}

int cmd_validate(const Globals& g, const std::string& path) {
  const rl::AnySystem any = rl::load_system(path);
  const rl::ValidationResult v = std::holds_alternative<rl::LSystem>(any)
                                     ? rl::validate_lsystem(std::get<rl::LSystem>(any))
                                     : rl::validate_nu(std::get<rl::NUSystem>(any));
  std::string text;
  if (v.ok()) {
    text = "ok\n";
  } else {
    for (const auto& msg : v.violations) text += msg + "\n";
  }
  emit(g, text);
  return v.ok() ? kOk : kFailed;
}

int cmd_classify(const Globals& g, const std::string& path) {
  const rl::AnySystem any = rl::load_system(path);
  const auto* sys = std::get_if<rl::LSystem>(&any);
  if (!sys) throw rl::ParseError("classify expects an L-system");
  const auto v = rl::validate_lsystem(*sys);
  if (!v.ok()) throw rl::ParseError("invalid L-system: " + v.violations.front());
  emit(g, rl::describe(rl::classify(*sys), sys->alphabet) + "\n");
  return kOk;
}

std::pair<std::string, rl::families::FamilyParams> parse_family_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, {}};
  return {spec.substr(0, colon), parse_params({spec.substr(colon + 1)})};
}

int cmd_measure(const Globals& g, const std::string& input, const std::string& family,
                const std::string& measures, const std::string& bwt_mode) {
  if (input.empty() == family.empty()) throw rl::ParseError("give exactly one of --input or --family");
  const auto which = rl::MeasureSelection::parse(measures);
  const auto mode = rl::parse_bwt_mode(bwt_mode);
  std::vector<rl::MeasureReport> reports;
  if (!input.empty()) {
    reports.push_back(rl::measure_text(input, read_text(input), which, mode));
  } else {
    const auto [name, params] = parse_family_spec(family);
    for (const auto& item : rl::families::family_iter(name, params)) {
      reports.push_back(rl::measure_text(item.label, rl::families::realize(item.member), which, mode));
    }
  }
  if (g.format == "json") {
    emit(g, rl::measure_json(reports) + "\n");
  } else {
    std::string text = rl::measure_csv_header() + "\n";
    for (const auto& r : reports) text += rl::measure_csv_row(r) + "\n";
    emit(g, text);
  }
  return kOk;
}

int cmd_family(Globals g, const std::string& name, const std::vector<std::string>& params,
               const std::string& emit_what, const std::string& out_path) {
  if (!out_path.empty()) g.output = out_path;
  const auto items = rl::families::family_iter(name, parse_params(params));
  ordered_json arr = ordered_json::array();
  std::string text;
  for (const auto& item : items) {
    std::string body;
    if (emit_what == "string") {
      body = rl::utf8::encode(rl::families::realize(item.member));
    } else if (const auto* sys = std::get_if<rl::LSystem>(&item.member)) {
      body = rl::to_json(*sys);
    } else if (const auto* nu = std::get_if<rl::NUSystem>(&item.member)) {
      body = rl::to_json(*nu);
    } else {
      throw rl::ParseError("family \"" + name + "\" produces strings, not systems");
    }
    text += body + "\n";
    ordered_json o;
    o["label"] = item.label;
    if (emit_what == "string") o["string"] = body;
    else o["system"] = ordered_json::parse(body);
    arr.push_back(std::move(o));
  }
  emit(g, g.format == "json" ? arr.dump(2) + "\n" : text);
  return kOk;
}

int cmd_bruteforce(const Globals& g, const std::string& what, const std::string& input,
                   const std::vector<std::string>& budget_items) {
  const rl::Text w = read_text(input);
  const auto params = parse_params(budget_items);
  ordered_json out;
  if (what == "bms") {
    for (const auto& [k, v] : params) {
      if (k != "limit" && k != "node_cap") throw rl::ParseError("unknown budget key \"" + k + "\"");
    }
    const auto witness = rl::smallest_bms(w, params.count("limit") ? params.at("limit") : rl::kDefaultBmsLimit,
                                          params.count("node_cap") ? params.at("node_cap") : rl::kDefaultNodeCap);
    out["b"] = witness.b();
    out["phrases"] = ordered_json::array();
    for (const auto& ph : witness.phrases) {
      ordered_json p;
      p["start"] = ph.start;
      p["length"] = ph.length;
      if (ph.source) p["source"] = *ph.source;
      else p["symbol"] = rl::utf8::encode(ph.symbol);
      out["phrases"].push_back(std::move(p));
    }
  } else if (what == "lsystem") {
    rl::LSystemBudget budget;
    for (const auto& [k, v] : params) {
      if (k == "sigma_max") budget.sigma_max = v;
      else if (k == "size_max") budget.size_max = v;
      else if (k == "d_max") budget.d_max = v;
      else if (k == "axiom_max") budget.axiom_max = v;
      else if (k == "node_cap") budget.node_cap = v;
      else throw rl::ParseError("unknown budget key \"" + k + "\"");
    }
    const auto found = rl::bounded_smallest_lsystem(w, budget);
    out["found"] = found.has_value();
    if (found) {
      out["size"] = found->size;
      out["nodes"] = found->nodes;
      out["system"] = ordered_json::parse(rl::to_json(found->system));
    }
  } else {
    throw rl::ParseError("--what must be bms or lsystem");
  }
  emit(g, out.dump(2) + "\n");
  return kOk;
}

int cmd_experiment(const Globals& g, const std::string& name, const std::string& grid,
                   const std::string& bwt_mode) {
  rl::ExperimentSpec spec;
  spec.name = name;
  if (!grid.empty()) spec.grid = parse_numbers(grid, 0, "--grid");
  spec.seed = g.seed;
  spec.jobs = g.jobs;
  spec.timeout_seconds = g.timeout;
  spec.bwt_mode = rl::parse_bwt_mode(bwt_mode);
  const auto table = rl::run_experiment(spec);
  emit(g, g.format == "json" ? rl::render_json(spec, table) + "\n" : rl::render_csv(spec, table));
  return kOk;
}

int cmd_verify(const Globals& g, const std::string& level) {
  if (level != "quick" && level != "full") throw rl::ParseError("--level must be quick or full");
  std::string text;
  bool ok = true;
  rl::verify(level == "full" ? rl::VerifyLevel::kFull : rl::VerifyLevel::kQuick,
             [&](const rl::CriterionResult& r) {
               const std::string line = rl::format_result(r) + "\n";
               if (g.output.empty()) std::cout << line << std::flush;
               text += line;
               ok = ok && r.passed;
             });
  if (!g.output.empty()) emit(g, text);
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L-systems, NU-systems and repetitiveness measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("repetilab ") + rl::kVersion);

  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", g.output, "Write output to PATH");
  app.add_option("--seed", g.seed, "Experiment seed");
  app.add_option("--jobs", g.jobs, "Parallel cells (0 = all cores)");
  app.add_option("--timeout", g.timeout, "Per-cell timeout in seconds")->check(CLI::PositiveNumber);
  app.fallthrough();

  std::string system_path, slice, input, family, measures = "delta,r,z,zno,ze,runs",
                                                 bwt_mode = "rotations", name, emit_what = "string",
                                                 out_path, what, grid, level = "quick";
  std::optional<std::uint64_t> prefix;
  std::vector<std::string> params, budget;
  bool hex = false;

  auto* expand = app.add_subcommand("expand", "Print the string a system generates");
  expand->add_option("--system", system_path)->required();
  expand->add_option("--prefix", prefix, "Only the first m symbols");
  expand->add_option("--slice", slice, "a,t,i,j: symbols i..j of a expanded t times");
  expand->add_flag("--hex", hex, "Escape non-printable symbols as \\u{XXXX}");

  auto* validate = app.add_subcommand("validate", "Check a system and report violations");
  validate->add_option("--system", system_path)->required();

  auto* classify = app.add_subcommand("classify", "Print the variant classes of an L-system");
  classify->add_option("--system,path", system_path)->required();

  auto* measure = app.add_subcommand("measure", "Repetitiveness measures of a string");
  measure->add_option("--input", input, "UTF-8 text file");
  measure->add_option("--family", family, "name:k=v,... family members");
  measure->add_option("--measures", measures);
  measure->add_option("--bwt-mode", bwt_mode)->check(CLI::IsMember({"rotations", "sentinel"}));

  auto* fam = app.add_subcommand("family", "Emit members of a built-in family");
  fam->add_option("--name", name)->required();
  fam->add_option("--param", params, "k=v (repeatable)");
  fam->add_option("--emit", emit_what)->check(CLI::IsMember({"string", "system"}));
  fam->add_option("-o", out_path, "Output file");

  auto* brute = app.add_subcommand("bruteforce", "Exact search on a tiny string");
  brute->add_option("--what", what)->required()->check(CLI::IsMember({"bms", "lsystem"}));
  brute->add_option("--input", input)->required();
  brute->add_option("--budget", budget, "k=v,... search limits");

  auto* experiment = app.add_subcommand("experiment", "Run a growth experiment");
  experiment->add_option("--name", name)->required();
  experiment->add_option("--grid", grid, "Comma-separated grid values");
  experiment->add_option("--bwt-mode", bwt_mode)->check(CLI::IsMember({"rotations", "sentinel"}));

  auto* ver = app.add_subcommand("verify", "Run the acceptance suite");
  ver->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*expand) return cmd_expand(g, system_path, prefix, slice, hex);
    if (*validate) return cmd_validate(g, system_path);
    if (*classify) return cmd_classify(g, system_path);
    if (*measure) return cmd_measure(g, input, family, measures, bwt_mode);
    if (*fam) return cmd_family(g, name, params, emit_what, out_path);
    if (*brute) return cmd_bruteforce(g, what, input, budget);
    if (*experiment) return cmd_experiment(g, name, grid, bwt_mode);
    if (*ver) return cmd_verify(g, level);
  } catch (const rl::LimitExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
