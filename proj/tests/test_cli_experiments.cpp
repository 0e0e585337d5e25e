#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "repetilab/error.hpp"
#include "repetilab/experiments.hpp"
#include "repetilab/families.hpp"
#include "repetilab/verify.hpp"

using namespace repetilab;

TEST_CASE("measure report rows") {
  const auto rep = measure_text("abab", U"abab", MeasureSelection{});
  CHECK(measure_csv_header() == "source,n,delta_num,delta_den,delta,r,z,z_no,z_e,runs_w");
  CHECK(measure_csv_row(rep) == "abab,4,2,1,2.000000,2,3,3,3,4");

  const auto partial = measure_text("x", U"aaaa", MeasureSelection::parse("z,runs"));
  CHECK(measure_csv_row(partial) == "x,4,,,,,2,,,1");
  CHECK_THROWS_AS(MeasureSelection::parse("delta,bogus"), ParseError);

  const auto doc = nlohmann::json::parse(measure_json({rep}));
  CHECK(doc[0]["delta_num"] == 2);
  CHECK(doc[0]["z_e"] == 3);
}

TEST_CASE("experiments are deterministic and independent of parallelism") {
  ExperimentSpec spec;
  spec.name = "theorem4";
  spec.grid = pow2_grid(4, 8);
  spec.seed = 42;
  spec.jobs = 1;
  const auto serial = run_experiment(spec);
  spec.jobs = 4;
  const auto parallel = run_experiment(spec);
  CHECK(serial.rows == parallel.rows);
  CHECK(render_csv(spec, serial, false) == render_csv(spec, parallel, false));
  REQUIRE(serial.rows.size() == 5);
  CHECK(serial.rows.front().front() == "16");

  spec.seed = 43;
  CHECK(run_experiment(spec).rows != serial.rows);

  const std::string csv = render_csv(spec, serial);
  CHECK(csv.rfind("# repetilab ", 0) == 0);
  CHECK(csv.find("seed=43") != std::string::npos);
  CHECK(csv.find("bwt_mode=rotations") != std::string::npos);
  CHECK(csv.find("# generated ") != std::string::npos);
}

TEST_CASE("rows are sorted and failures become error rows") {
  ExperimentSpec spec;
  spec.name = "witnesses";
  spec.grid = {64, 4, 16};  // sqrt witness needs n >= 9
  const auto table = run_experiment(spec);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][0] == "4");
  CHECK(table.rows[0][1].rfind("error: ", 0) == 0);
  CHECK(table.rows[1][0] == "16");
  CHECK(table.rows[1].size() == table.columns.size());
}

TEST_CASE("timeouts produce error rows") {
  ExperimentSpec spec;
  spec.name = "lemma1-delta";
  spec.grid = {1024};
  spec.timeout_seconds = 1e-6;
  const auto table = run_experiment(spec);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][1].find("timeout") != std::string::npos);
}

TEST_CASE("experiment catalogue") {
  for (const auto& name : experiment_names()) CHECK_FALSE(default_grid(name).empty());
  CHECK(default_grid("kociumaka-r") == pow2_grid(8, 16));
  CHECK(default_grid("lemma1-delta").front() == 16);
  ExperimentSpec bad;
  bad.name = "nonesuch";
  CHECK_THROWS_AS(run_experiment(bad), ParseError);

  ExperimentSpec lemma;
  lemma.name = "lemma1-delta";
  lemma.grid = {16};
  const auto row = run_experiment(lemma).rows.at(0);
  CHECK(row.at(1) == std::to_string(1 + 16 * 17 / 2 + 16));
  CHECK(row.at(2) == "11");
}

TEST_CASE("verification criteria are addressable") {
  CHECK(criterion_ids(VerifyLevel::kQuick).size() == 6);
  CHECK(criterion_ids(VerifyLevel::kFull).size() == 9);
  const auto res = run_criterion("A9");
  CHECK(res.passed);
  CHECK(format_result(res).rfind("PASS A9 ", 0) == 0);
  CHECK_THROWS_AS(run_criterion("A0"), ParseError);
}
