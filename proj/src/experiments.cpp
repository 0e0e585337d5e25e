#include "repetilab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "repetilab/core_model.hpp"
#include "repetilab/error.hpp"
#include "repetilab/families.hpp"
#include "repetilab/lsys_engine.hpp"
#include "repetilab/nu_engine.hpp"

namespace repetilab {

namespace {

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string opt(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

}  // namespace

MeasureSelection MeasureSelection::parse(const std::string& list) {
  MeasureSelection sel{false, false, false, false, false, false};
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "delta") sel.delta = true;
    else if (item == "r") sel.r = true;
    else if (item == "z") sel.z = true;
    else if (item == "zno" || item == "z_no") sel.z_no = true;
    else if (item == "ze" || item == "z_e") sel.z_e = true;
    else if (item == "runs") sel.runs = true;
    else throw ParseError("unknown measure \"" + item + "\"");
  }
  return sel;
}

MeasureReport measure_text(const std::string& source, TextView w, const MeasureSelection& which,
                           BwtMode mode) {
  MeasureReport rep;
  rep.source = source;
  rep.n = w.size();
  if (which.delta) rep.delta = delta(w);
  if (which.r && !w.empty()) rep.r = r_measure(w, mode);
  if (which.z) rep.z = lz76(w).size();
  if (which.z_no) rep.z_no = lz_no(w).size();
  if (which.z_e) rep.z_e = lz_end(w).size();
  if (which.runs && !w.empty()) rep.runs_w = rle_runs(w);
  return rep;
}

std::string measure_csv_header() { return "source,n,delta_num,delta_den,delta,r,z,z_no,z_e,runs_w"; }

std::string measure_csv_row(const MeasureReport& rep) {
  std::string out = rep.source + "," + std::to_string(rep.n) + ",";
  if (rep.delta) {
    out += std::to_string(rep.delta->num()) + "," + std::to_string(rep.delta->den()) + "," +
           fixed(rep.delta->to_double());
  } else {
    out += ",,";
  }
  for (const auto* v : {&rep.r, &rep.z, &rep.z_no, &rep.z_e, &rep.runs_w}) out += "," + opt(*v);
  return out;
}

std::string measure_json(const std::vector<MeasureReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    nlohmann::ordered_json o;
    o["source"] = rep.source;
    o["n"] = rep.n;
    if (rep.delta) {
      o["delta_num"] = rep.delta->num();
      o["delta_den"] = rep.delta->den();
      o["delta"] = rep.delta->to_double();
    }
    const std::pair<const char*, const std::optional<std::uint64_t>*> fields[] = {
        {"r", &rep.r},       {"z", &rep.z},           {"z_no", &rep.z_no},
        {"z_e", &rep.z_e},   {"runs_w", &rep.runs_w}, {"b", &rep.b},
        {"system_size", &rep.system_size},            {"nu_size", &rep.nu_size}};
    for (const auto& [key, value] : fields) {
      if (*value) o[key] = **value;
    }
    arr.push_back(std::move(o));
  }
  return arr.dump(2);
}

namespace {

using Row = std::vector<std::string>;
using CellFn = std::function<Row(std::uint64_t value, std::uint64_t cell_seed)>;

struct Experiment {
  std::vector<std::string> columns;
  std::vector<std::uint64_t> grid;
  CellFn cell;
};

double log2d(std::uint64_t n) { return std::log2(static_cast<double>(n)); }

Experiment make_experiment(const std::string& name, BwtMode mode) {
  if (name == "lemma1-delta") {
    return {{"d", "n", "system_size", "delta_num", "delta_den", "delta", "delta_over_sqrt_n"},
            pow2_grid(4, 10),
            [](std::uint64_t d, std::uint64_t) -> Row {
              const LSystem sys = families::lemma1_system(d);
              const Text s = sys.alphabet.render(generate(sys));
              const Rational dl = delta(s);
              return {std::to_string(s.size()), std::to_string(system_size(sys)),
                      std::to_string(dl.num()), std::to_string(dl.den()), fixed(dl.to_double()),
                      fixed(dl.to_double() / std::sqrt(static_cast<double>(s.size())))};
            }};
  }
  if (name == "kociumaka-r") {
    return {{"n", "r", "r_over_log2n"}, pow2_grid(8, 16), [mode](std::uint64_t n, std::uint64_t) -> Row {
              const auto r = r_measure(families::kociumaka_string(n), mode);
              return {std::to_string(r), fixed(static_cast<double>(r) / log2d(n))};
            }};
  }
  if (name == "prefixed-kociumaka-ze") {
    return {{"n", "z_e", "z_e_over_log2n"}, pow2_grid(8, 16), [](std::uint64_t n, std::uint64_t) -> Row {
              const auto ze = lz_end(families::prefixed_kociumaka(n)).size();
              return {std::to_string(ze), fixed(static_cast<double>(ze) / log2d(n))};
            }};
  }
  if (name == "kociumaka-runs") {
    return {{"n", "runs_w", "runs_over_log2n"}, pow2_grid(8, 16), [](std::uint64_t n, std::uint64_t) -> Row {
              const auto runs = rle_runs(families::kociumaka_string(n));
              return {std::to_string(runs), fixed(static_cast<double>(runs) / log2d(n))};
            }};
  }
  if (name == "theorem4") {
    return {{"n", "k", "nu_size", "delta_num", "delta_den", "delta", "z", "r"},
            pow2_grid(4, 12),
            [mode](std::uint64_t n, std::uint64_t cell_seed) -> Row {
              std::mt19937_64 rng(cell_seed);
              const Text x = families::kociumaka_string(n, families::random_shifts(n, rng));
              const NUSystem sys = families::theorem4_nu(x);
              const Text w = sys.alphabet.render(nu_generate(sys));
              const Rational dl = delta(w);
              return {std::to_string(std::count(x.begin(), x.end(), U'1')),
                      std::to_string(nu_size(sys)), std::to_string(dl.num()),
                      std::to_string(dl.den()), fixed(dl.to_double()),
                      std::to_string(lz76(w).size()), std::to_string(r_measure(w, mode))};
            }};
  }
  if (name == "witnesses") {
    return {{"n", "zeros_one_size", "sqrt_size", "sqrt_size_over_sqrt_n"},
            pow2_grid(4, 14),
            [](std::uint64_t n, std::uint64_t) -> Row {
              const auto zs = system_size(families::zeros_one_system(n));
              const auto ss = system_size(families::sqrt_system(n));
              return {std::to_string(zs), std::to_string(ss),
                      fixed(static_cast<double>(ss) / std::sqrt(static_cast<double>(n)))};
            }};
  }
  throw ParseError("unknown experiment \"" + name + "\"");
}

// SplitMix64 finalizer; decorrelates per-cell seeds.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Pool {
  std::mutex m;
  std::condition_variable cv;
  std::vector<Row> results;
  std::vector<bool> finished;
  std::vector<bool> abandoned;
};

}  // namespace

std::vector<std::string> experiment_names() {
  return {"lemma1-delta", "kociumaka-r", "prefixed-kociumaka-ze", "kociumaka-runs", "theorem4",
          "witnesses"};
}

std::vector<std::uint64_t> pow2_grid(unsigned lo, unsigned hi) {
  std::vector<std::uint64_t> out;
  for (unsigned e = lo; e <= hi && e < 64; ++e) out.push_back(std::uint64_t{1} << e);
  return out;
}

std::vector<std::uint64_t> default_grid(const std::string& name) {
  return make_experiment(name, BwtMode::kRotations).grid;
}

ExperimentTable run_experiment(const ExperimentSpec& spec) {
  Experiment exp = make_experiment(spec.name, spec.bwt_mode);
  std::vector<std::uint64_t> grid = spec.grid.empty() ? exp.grid : spec.grid;
  if (grid.empty()) throw ParseError("experiment grid is empty");
  std::sort(grid.begin(), grid.end());

  const std::size_t cells = grid.size();
  unsigned width = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  auto pool = std::make_shared<Pool>();
  pool->results.resize(cells);
  pool->finished.assign(cells, false);
  pool->abandoned.assign(cells, false);

  using Clock = std::chrono::steady_clock;
  const auto budget = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(spec.timeout_seconds));
  std::map<std::size_t, Clock::time_point> running;
  std::size_t next = 0;

  std::unique_lock lock(pool->m);
  for (;;) {
    while (running.size() < width && next < cells) {
      const std::size_t idx = next++;
      const std::uint64_t value = grid[idx];
      const std::uint64_t cell_seed = mix(spec.seed ^ mix(idx));
      // Cells that overrun are abandoned, not killed; the thread owns
      // everything it touches so it can finish in the background.
      std::thread([pool, idx, value, cell_seed, fn = exp.cell] {
        Row row;
        try {
          row = fn(value, cell_seed);
        } catch (const std::exception& e) {
          row = {std::string("error: ") + e.what()};
        }
        std::lock_guard guard(pool->m);
        if (!pool->abandoned[idx]) pool->results[idx] = std::move(row);
        pool->finished[idx] = true;
        pool->cv.notify_all();
      }).detach();
      running.emplace(idx, Clock::now() + budget);
    }
    const auto now = Clock::now();
    for (auto it = running.begin(); it != running.end();) {
      if (pool->finished[it->first]) {
        it = running.erase(it);
      } else if (now >= it->second) {
        pool->abandoned[it->first] = true;
        pool->results[it->first] = {"error: timeout after " + fixed(spec.timeout_seconds) + " s"};
        it = running.erase(it);
      } else {
        ++it;
      }
    }
    if (running.empty() && next == cells) break;
    if (running.size() == width || next == cells) {
      auto earliest = Clock::time_point::max();
      for (const auto& [idx, deadline] : running) earliest = std::min(earliest, deadline);
      pool->cv.wait_until(lock, earliest);
    }
  }

  ExperimentTable table;
  table.columns = exp.columns;
  for (std::size_t i = 0; i < cells; ++i) {
    Row row{std::to_string(grid[i])};
    row.insert(row.end(), pool->results[i].begin(), pool->results[i].end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_csv(const ExperimentSpec& spec, const ExperimentTable& table,
                       bool with_timestamp) {
  std::string out = "# repetilab " + std::string(kVersion) + " experiment=" + spec.name +
                    " seed=" + std::to_string(spec.seed) +
                    " bwt_mode=" + to_string(spec.bwt_mode) + "\n";
  if (with_timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out += "# generated " + std::string(buf) + "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

namespace {

// Cells are rendered text; numbers go back to JSON numbers.
nlohmann::ordered_json cell_json(const std::string& cell) {
  if (!cell.empty() && cell.find_first_not_of("0123456789") == std::string::npos) {
    return std::stoull(cell);
  }
  if (!cell.empty() && cell.find_first_not_of("0123456789.") == std::string::npos) {
    return std::stod(cell);
  }
  return cell;
}

}  // namespace

std::string render_json(const ExperimentSpec& spec, const ExperimentTable& table) {
  nlohmann::ordered_json doc;
  doc["tool"] = "repetilab";
  doc["version"] = kVersion;
  doc["experiment"] = spec.name;
  doc["seed"] = spec.seed;
  doc["bwt_mode"] = to_string(spec.bwt_mode);
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json o;
    if (row.size() == 2 && row[1].rfind("error: ", 0) == 0) {
      o[table.columns[0]] = cell_json(row[0]);
      o["error"] = row[1].substr(7);
    } else {
      for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
        o[table.columns[i]] = cell_json(row[i]);
      }
    }
    doc["rows"].push_back(std::move(o));
  }
  return doc.dump(2);
}

}  // namespace repetilab
