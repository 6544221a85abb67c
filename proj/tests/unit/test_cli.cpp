#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "app.hpp"
#include "csv.hpp"
#include "esdr/error.hpp"
#include "esdr/simgen.hpp"
#include "experiments.hpp"
#include "helpers.hpp"
#include "report.hpp"

using namespace esdr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "esdr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("esdr_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

cli::CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return cli::parse_csv(in);
}

}  // namespace

TEST_CASE("CSV ingest") {
  SUBCASE("one response column out of eleven") {
    const auto sim = generate({Model::ex1, 400, 10, 1});
    Matrix all(400, 11);
    all << sim.data.x(), sim.data.y();
    std::ostringstream text;
    cli::write_csv(text, cli::default_header(10, 1), all);
    const Dataset data = cli::dataset_from_table(parse(text.str()), {});
    CHECK(data.n() == 400);
    CHECK(data.p() == 10);
    CHECK(data.s() == 1);
    CHECK(data.x() == sim.data.x());  // 17 significant digits round-trip exactly
    CHECK(data.y() == sim.data.y());
  }

  SUBCASE("named response columns") {
    const auto table = parse("a,y1,b,y2,c\n1,2,3,4,5\n2,3,4,5,7\n0,1,0,1,0\n5,5,5,5,1\n3,3,1,1,2\n");
    const Dataset data = cli::dataset_from_table(table, {"y1", "y2"});
    CHECK(data.s() == 2);
    CHECK(data.p() == 3);
    CHECK(data.y()(1, 1) == 5.0);
    CHECK(data.x()(1, 2) == 7.0);
    CHECK_THROWS_WITH_AS(cli::dataset_from_table(table, {"z"}), doctest::Contains("not found"), Error);
  }

  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(parse("x,x,y\n1,2,3\n"), doctest::Contains("duplicate"), Error);
    CHECK_THROWS_WITH_AS(parse("x,y\n1,nan\n"), doctest::Contains("non-finite"), Error);
    CHECK_THROWS_WITH_AS(parse("x,y\n1,abc\n"), doctest::Contains("non-numeric"), Error);
    CHECK_THROWS_WITH_AS(parse("x,y\n1,2,3\n"), doctest::Contains("expected 2 cells"), Error);
    CHECK_THROWS_WITH_AS(parse(""), doctest::Contains("header"), Error);
    CHECK_THROWS_WITH_AS(parse("x,y\n"), doctest::Contains("no data rows"), Error);
    CHECK_THROWS_AS(parse("x,y\n1,\n"), Error);
  }
}

TEST_CASE("fit command") {
  const fs::path dir = scratch_dir("fit");
  const std::string csv = (dir / "ex1.csv").string();
  REQUIRE(run_cli({"generate", "--model", "ex1", "--n", "200", "--seed", "4", "-o", csv}).code == cli::exit_ok);

  SUBCASE("fixed dimension") {
    const std::string report = (dir / "fit.json").string();
    const auto r = run_cli({"fit", csv, "--method", "rmave", "--family", "cf", "--m", "15", "--dim", "2", "-o", report});
    REQUIRE(r.code == cli::exit_ok);
    const auto doc = nlohmann::json::parse(slurp(report));
    CHECK(doc["basis"]["rows"] == 10);
    CHECK(doc["basis"]["cols"] == 2);
    CHECK(doc["basis"]["values"].size() == 20);
    CHECK(doc.contains("objective_trace"));
    CHECK(doc["diagnostics"].contains("converged"));
    CHECK(doc["config"]["m"] == 15);
    CHECK(doc.contains("timestamp"));
    CHECK(!doc.contains("cv_curve"));
    for (const auto& v : doc["basis"]["values"]) CHECK(v.get<double>() == cli::round_significant(v.get<double>()));
  }

  SUBCASE("--dim auto reports the CV curve") {
    const auto r = run_cli({"fit", csv, "--m", "5", "--dim", "auto", "--d-max", "3"});
    REQUIRE(r.code == cli::exit_ok);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.contains("cv_curve"));
    CHECK(doc["cv_curve"]["values"].size() == 4);
    CHECK(doc["dimension"] == doc["cv_curve"]["d_hat"]);
  }

  SUBCASE("Box-Cox on negative responses is shifted and noted") {
    const auto r = run_cli({"fit", csv, "--family", "boxcox", "--dim", "2", "--method", "opg"});
    REQUIRE(r.code == cli::exit_ok);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["diagnostics"]["notes"].size() == 1);
    CHECK(doc["diagnostics"]["notes"][0].get<std::string>().find("shift") != std::string::npos);
  }

  SUBCASE("usage and data errors exit with 2") {
    CHECK(run_cli({"fit", csv, "--dim", "11"}).code == cli::exit_usage);
    CHECK(run_cli({"fit", csv, "--dim", "two"}).code == cli::exit_usage);
    CHECK(run_cli({"fit", csv, "--method", "sir"}).code == cli::exit_usage);
    CHECK(run_cli({"fit", csv, "--varsigma", "0.4"}).code == cli::exit_usage);
    CHECK(run_cli({"fit", csv, "--response-cols", "nope"}).code == cli::exit_usage);
    CHECK(run_cli({"fit", (dir / "missing.csv").string()}).code == cli::exit_usage);
    const std::string bad = write_file(dir / "bad.csv", "x1,x2,y\n1,2,3\n4,oops,6\n");
    const auto r = run_cli({"fit", bad, "--dim", "1"});
    CHECK(r.code == cli::exit_usage);
    CHECK(r.err.find("non-numeric") != std::string::npos);
    CHECK(run_cli({}).code == cli::exit_usage);
    CHECK(run_cli({"--help"}).code == cli::exit_ok);
  }
}

TEST_CASE("generate writes the true basis") {
  const fs::path dir = scratch_dir("generate");
  const auto r = run_cli({"generate", "--model", "F", "--n", "50", "--basis-output", (dir / "b0.csv").string(), "-o",
                          (dir / "data.csv").string()});
  REQUIRE(r.code == cli::exit_ok);
  const auto b0 = cli::read_csv((dir / "b0.csv").string());
  CHECK(b0.values.rows() == 10);
  CHECK(b0.values.cols() == 1);
  CHECK(cli::read_csv((dir / "data.csv").string()).values.rows() == 50);
  CHECK(run_cli({"generate", "--model", "nope"}).code == cli::exit_usage);
}

TEST_CASE("experiment cells") {
  cli::ExperimentSpec spec;
  spec.name = "table4";
  const auto cells = cli::build_cells(spec);
  CHECK(cells.size() == 4 * 2 * 3);
  spec.name = "fig2";
  const auto fig2 = cli::build_cells(spec);
  REQUIRE(fig2.size() == 5);
  CHECK(fig2.front().x == doctest::Approx(0.1));
  spec.name = "table3";
  CHECK(cli::build_cells(spec).front().metric == cli::Metric::dimension);
  spec.name = "ex8";
  CHECK(cli::build_cells(spec).front().norm == NormKind::frobenius);
  spec.name = "table9";
  CHECK_THROWS_AS(cli::build_cells(spec), Error);
  spec.name = "custom";
  spec.models = {"modelQ"};
  CHECK_THROWS_AS(cli::build_cells(spec), Error);

  // Variants of a table share datasets; replicates and models do not.
  CHECK(cli::data_seed(1, Model::modelD, 400, 10, 0) == cli::data_seed(1, Model::modelD, 400, 10, 0));
  CHECK(cli::data_seed(1, Model::modelD, 400, 10, 0) != cli::data_seed(1, Model::modelD, 400, 10, 1));
  CHECK(cli::data_seed(1, Model::modelD, 400, 10, 0) != cli::data_seed(1, Model::modelE, 400, 10, 0));
}

TEST_CASE("summaries skip failed replicates") {
  cli::CellResult row;
  row.replicates = {{0.1, -1, false, ""}, {0.0, -1, true, "boom"}, {0.3, -1, false, ""}};
  cli::summarize(row);
  CHECK(row.failures == 1);
  CHECK(row.mean == doctest::Approx(0.2));
  CHECK(row.sd == doctest::Approx(std::sqrt(0.02)));
}

TEST_CASE("bench results are identical for any worker count and reproducible on disk") {
  cli::ExperimentSpec spec;
  spec.name = "custom";
  spec.models = {"modelF", "ex1"};
  spec.n = {120};
  spec.p = {6};
  spec.m = {5};
  spec.replicates = 4;
  spec.seed = 11;

  spec.threads = 1;
  const cli::ResultTable serial = cli::run_experiment(spec);
  spec.threads = 3;
  const cli::ResultTable parallel = cli::run_experiment(spec);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t r = 0; r < serial.rows.size(); ++r)
    for (std::size_t k = 0; k < serial.rows[r].replicates.size(); ++k)
      CHECK(serial.rows[r].replicates[k].value == parallel.rows[r].replicates[k].value);

  const fs::path a = scratch_dir("bench_a");
  const fs::path b = scratch_dir("bench_b");
  cli::write_result_files(serial, spec, a);
  cli::write_result_files(parallel, spec, b);
  for (const char* file : {"custom.csv", "custom_replicates.csv"}) CHECK(slurp(a / file) == slurp(b / file));
  auto ja = nlohmann::json::parse(slurp(a / "custom.json"));
  auto jb = nlohmann::json::parse(slurp(b / "custom.json"));
  ja.erase("timestamp");
  jb.erase("timestamp");
  CHECK(ja == jb);

  // Aggregates are recomputable exactly from the per-replicate file.
  std::istringstream reps(slurp(a / "custom_replicates.csv"));
  std::istringstream aggregate(slurp(a / "custom.csv"));
  std::string line;
  std::getline(reps, line);
  std::getline(aggregate, line);
  for (const auto& expected : serial.rows) {
    cli::CellResult recomputed;
    for (std::size_t k = 0; k < expected.replicates.size(); ++k) {
      REQUIRE(std::getline(reps, line));
      std::vector<std::string> cells;
      std::stringstream fields(line);
      for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
      REQUIRE(cells.size() >= 5);
      recomputed.replicates.push_back({std::stod(cells[4]), -1, cells[3] != "ok", ""});
    }
    cli::summarize(recomputed);
    REQUIRE(std::getline(aggregate, line));
    std::vector<std::string> cells;
    std::stringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 11);
    CHECK(std::stod(cells[9]) == recomputed.mean);
    CHECK(std::stod(cells[10]) == recomputed.sd);
  }
}
