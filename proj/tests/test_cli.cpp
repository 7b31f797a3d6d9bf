#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "doctest.h"

using namespace testing_support;

namespace {

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kDecaying = R"({"A": [[-2]], "x0": [1], "t0": 0, "alpha": "1/3",
  "grid": {"start": 0.05, "end": 1.0, "step": 0.05}})";

}  // namespace

TEST_CASE("solve writes a decreasing trajectory") {
  const auto cfg = write_file("decay.json", kDecaying);
  const auto out = (scratch_dir() / "decay.csv").string();
  const auto r = run_cli("solve --config " + cfg + " --out " + out);
  REQUIRE(r.exit_code == 0);
  std::string header;
  const auto rows = parse_csv(read_file(out), &header);
  CHECK(header == "t,x1");
  REQUIRE(rows.size() == 20);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].size() == 2);
    if (k > 0) CHECK(rows[k][1] < rows[k - 1][1]);
  }
}

TEST_CASE("solve output is byte-identical across runs") {
  const auto cfg = write_file("det.json", R"({"A": [[0, 1], [2, 1]], "x0": [1, 0], "alpha": "3/7",
    "grid": {"start": 0.0, "end": 0.5, "step": 0.05}, "method": "rectangle"})");
  const auto a = (scratch_dir() / "det_a.csv").string();
  const auto b = (scratch_dir() / "det_b.csv").string();
  REQUIRE(run_cli("solve --config " + cfg + " --out " + a).exit_code == 0);
  REQUIRE(run_cli("solve --config " + cfg + " --out " + b).exit_code == 0);
  const auto text = read_file(a);
  CHECK(text == read_file(b));
  const auto rows = parse_csv(text);
  CHECK(rows.size() == 10);
  CHECK(rows[0].size() == 3);
}

TEST_CASE("alpha = 1 reproduces the classical exponential") {
  const auto cfg = write_file("classical.json", R"({"A": [[-1, 0.5], [0, 2]], "x0": [1, 1], "t0": 0.5, "alpha": 1,
    "grid": {"times": [0.75, 1.0, 1.5]}})");
  const auto out = (scratch_dir() / "classical.csv").string();
  REQUIRE(run_cli("solve --config " + cfg + " --out " + out).exit_code == 0);
  const auto rows = parse_csv(read_file(out));
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    const double u = row[0] - 0.5;
    const double x2 = std::exp(2.0 * u);
    const double x1 = std::exp(-u) + 0.5 * (std::exp(2.0 * u) - std::exp(-u)) / 3.0;
    CHECK(std::abs(row[1] - x1) <= 1e-10);
    CHECK(std::abs(row[2] - x2) <= 1e-10);
  }
}

TEST_CASE("schema errors exit with 2 and name the field") {
  const auto out = (scratch_dir() / "unused.csv").string();
  auto r = run_cli("solve --config " + write_file("bad1.json", R"({"A": [[1, 2]], "x0": [1], "alpha": 0.5,
    "grid": {"times": [1]}})") + " --out " + out);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("A[0]") != std::string::npos);

  r = run_cli("solve --config " + write_file("bad2.json", R"({"A": [[1]], "x0": [1], "alpha": "1/3"})") + " --out " +
              out);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("grid") != std::string::npos);

  r = run_cli("solve --config " + write_file("bad3.json", "{\"A\": [[1]],\n \"x0\": [1,}") + " --out " + out);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find(":2:") != std::string::npos);

  r = run_cli("solve --config " + write_file("bad4.json", R"({"A": [[1]], "x0": [1], "alpha": "1/3",
    "grid": {"times": [1]}, "method": "euler"})") + " --out " + out);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("method") != std::string::npos);

  r = run_cli("solve --config " + scratch_dir().string() + "/missing.json --out " + out);
  CHECK(r.exit_code == 2);

  r = run_cli("solve --out " + out);
  CHECK(r.exit_code == 2);
}

TEST_CASE("solver errors exit with 3 and name the variant") {
  const auto out = (scratch_dir() / "unused.csv").string();
  auto r = run_cli("solve --config " + write_file("singular.json", R"({"A": [[0, 1], [0, 1]], "x0": [1, 1],
    "alpha": "1/3", "grid": {"times": [0.5, 1]}})") + " --out " + out);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("ZeroEigenvalue") != std::string::npos);

  r = run_cli("solve --config " + write_file("norep.json", R"({"A": [[-1]], "x0": [1], "alpha": 0.5,
    "grid": {"times": [1]}})") + " --out " + out);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("NoRepresentation") != std::string::npos);

  r = run_cli("solve --config " + write_file("rot.json", R"({"A": [[0, 1], [-1, 0]], "x0": [1, 0], "alpha": 1,
    "grid": {"times": [1]}, "eps_ladder": [0.01, 0.001]})") + " --out " + out);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("ComplexSpectrum") != std::string::npos);
}

TEST_CASE("table") {
  const auto cfg = write_file("table1.json", R"({"a": -2, "alphas": ["1/3", "3/7", "199/203", "1999/2003", 1],
    "interval": [0.01, 1.01], "h": 0.01, "method": "rectangle"})");
  const auto a = (scratch_dir() / "table_a.csv").string();
  const auto b = (scratch_dir() / "table_b.csv").string();
  REQUIRE(run_cli("table --config " + cfg + " --out " + a).exit_code == 0);
  REQUIRE(run_cli("table --config " + cfg + " --out " + b).exit_code == 0);
  CHECK(read_file(a) == read_file(b));
  std::string header;
  const auto rows = parse_csv(read_file(a), &header);
  CHECK(header == "alpha,sup_dev,nev");
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows.back()[2] < rows[i][2]);

  const auto empty = write_file("table_empty.json", R"({"a": -2, "alphas": [], "interval": [0.01, 1.01], "h": 0.01})");
  CHECK(run_cli("table --config " + empty + " --out " + a).exit_code == 2);
}

TEST_CASE("mlf") {
  auto r = run_cli("mlf 1 1 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "2.7182818284590451\n");
  r = run_cli("mlf 0.5 1 0");
  CHECK(r.output == "1\n");
  r = run_cli("mlf 0.5 1 1");
  CHECK(std::abs(std::stod(r.output) - 5.008980080762283) <= 1e-14);
  r = run_cli("mlf 0.5 1 50");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("DomainError") != std::string::npos);
}

TEST_CASE("stability exit codes") {
  auto r = run_cli("stability --config " + write_file("st0.json", R"({"A": [[-2, 0], [0, -1]]})"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("AsymptoticallyStable") != std::string::npos);
  CHECK(run_cli("stability --config " + write_file("st1.json", R"({"A": [[2]]})")).exit_code == 4);
  CHECK(run_cli("stability --config " + write_file("st2.json", R"({"A": [[0, 1], [-1, 0]]})")).exit_code == 5);
}

TEST_CASE("verbose banner lists defaults") {
  const auto cfg = write_file("verbose.json", kDecaying);
  const auto r = run_cli("solve -v --config " + cfg + " --out " + (scratch_dir() / "verbose.csv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("tol=") != std::string::npos);
  CHECK(r.output.find("simpson_tol=") != std::string::npos);
  CHECK(r.output.find("skip=1") != std::string::npos);
}
