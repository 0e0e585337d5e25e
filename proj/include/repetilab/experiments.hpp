#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repetilab/measures.hpp"
#include "repetilab/rational.hpp"

namespace repetilab {

inline constexpr const char* kVersion = "0.1.0";

struct MeasureSelection {
  bool delta = true;
  bool r = true;
  bool z = true;
  bool z_no = true;
  bool z_e = true;
  bool runs = true;

  // Comma-separated subset of delta,r,z,zno,ze,runs. Throws ParseError.
  static MeasureSelection parse(const std::string& list);
};

struct MeasureReport {
  std::string source;
  std::uint64_t n = 0;
  std::optional<Rational> delta;
  std::optional<std::uint64_t> r, z, z_no, z_e, runs_w;
  std::optional<std::uint64_t> b;
  std::optional<std::uint64_t> system_size, nu_size;
};

MeasureReport measure_text(const std::string& source, TextView w, const MeasureSelection& which,
                           BwtMode mode = BwtMode::kRotations);

// `source,n,delta_num,delta_den,delta,r,z,z_no,z_e,runs_w`; absent values are empty.
std::string measure_csv_header();
std::string measure_csv_row(const MeasureReport& report);
std::string measure_json(const std::vector<MeasureReport>& reports);

struct ExperimentSpec {
  std::string name;
  std::vector<std::uint64_t> grid;  // empty selects the default grid
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  BwtMode bwt_mode = BwtMode::kRotations;
  double timeout_seconds = 60.0;
};

struct ExperimentTable {
  std::vector<std::string> columns;
  // Rows in grid order; each row starts with the grid value (n, or d for
  // lemma1-delta). Failed cells hold a single "error: ..." entry after it.
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> experiment_names();
std::vector<std::uint64_t> default_grid(const std::string& name);
// Powers of two 2^lo..2^hi.
std::vector<std::uint64_t> pow2_grid(unsigned lo, unsigned hi);

// Runs every cell of the grid, up to spec.jobs at a time. Throws ParseError
// for an unknown experiment or an empty grid.
ExperimentTable run_experiment(const ExperimentSpec& spec);

// Header comments (version, seed, BWT mode, then a timestamp line unless
// disabled) followed by the table.
std::string render_csv(const ExperimentSpec& spec, const ExperimentTable& table,
                       bool with_timestamp = true);
std::string render_json(const ExperimentSpec& spec, const ExperimentTable& table);

}  // namespace repetilab
