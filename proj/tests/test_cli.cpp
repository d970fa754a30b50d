#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mnarcor/csv.hpp"
#include "mnarcor/inference.hpp"

using namespace mnarcor;

namespace {

const std::string kCli = MNARCOR_CLI_PATH;
const std::string kData = MNARCOR_TEST_DATA_DIR;
const std::string kCase0 = kData + "/cases/case_00.csv";

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kAnalyzeArgs =
    "analyze --input " + kCase0 +
    " --target target --partner partner --adjust age,hypertension"
    " --mechanism A --gamma-min 0 --gamma-max 0.5";

}  // namespace

TEST_CASE("analyze emits a full json report") {
  const std::string out = "/tmp/mnarcor_cli_analyze.json";
  REQUIRE(run(kAnalyzeArgs + " --out " + out) == 0);
  nlohmann::json doc;
  std::ifstream(out) >> doc;

  CHECK(doc["mechanism"] == "A");
  CHECK(doc["n_rows"] == 250);
  CHECK(doc["p"] == 4);
  CHECK(doc["alpha"] == 0.05);
  CHECK(doc["grid_points"] == 101);
  REQUIRE(doc["trace"].size() == 101);
  REQUIRE(doc["regularity"].size() == 5);
  for (const auto& c : doc["regularity"]) CHECK(c["pass"] == true);
  CHECK(doc["uncertainty_region"]["failures"] == 0);

  // the emitted numbers are exactly the library's numbers
  const Dataset ds =
      dataset_from_table(read_csv(kCase0), "target", "partner", {"age", "hypertension"});
  const UncertaintyRegion ur =
      uncertainty_region(ds, Mechanism::A, GammaBox(0.0, 0.5), 0.05, 101);
  CHECK(doc["uncertainty_region"]["lower"].get<double>() == ur.lower);
  CHECK(doc["uncertainty_region"]["upper"].get<double>() == ur.upper);
  CHECK(doc["trace"][0]["gamma1"].get<double>() == 0.0);
  CHECK(doc["trace"][100]["gamma1"].get<double>() == 0.5);
  CHECK(doc["trace"][50]["rho"].get<double>() == ur.grid[50].rho_hat);
  for (const auto& pt : doc["trace"]) CHECK(pt["status"] == "ok");
}

TEST_CASE("analyze csv trace format") {
  const std::string out = "/tmp/mnarcor_cli_analyze.csv";
  REQUIRE(run(kAnalyzeArgs + " --format csv --out " + out) == 0);
  const std::string text = slurp(out);
  int lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 102);  // header plus one row per grid point
  CHECK(text.rfind("gamma1,gamma2,rho,lower,upper,status\n", 0) == 0);
}

TEST_CASE("analyze output is byte stable across runs") {
  const std::string a = "/tmp/mnarcor_cli_a.json", b = "/tmp/mnarcor_cli_b.json";
  REQUIRE(run(kAnalyzeArgs + " --out " + a) == 0);
  REQUIRE(run(kAnalyzeArgs + " --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("analyze exit codes") {
  CHECK(run("analyze --input /nonexistent.csv --target target --partner partner"
            " --adjust age,hypertension") == 2);
  CHECK(run(kAnalyzeArgs + " --mechanism Q") == 3);
  CHECK(run("analyze --input " + kCase0 +
            " --target target --partner partner --adjust age,hypertension"
            " --gamma-min 0.5 --gamma-max 0.1") == 3);
  CHECK(run("analyze --input " + kCase0 +
            " --target target --partner partner --adjust age,hypertension"
            " --gamma-min 0 --gamma-max 2") == 3);
  CHECK(run("analyze --input " + kCase0 +
            " --target target --partner partner --adjust age,hypertension"
            " --mechanism B") == 4);  // masks are not shared: pattern mismatch
  CHECK(run("analyze --input " + kCase0 +
            " --target target --partner nope --adjust age,hypertension") == 3);
  CHECK(run("analyze") == 3);  // missing required options
}

TEST_CASE("simulate writes report and per-replicate files") {
  const std::string base = "/tmp/mnarcor_cli_sim";
  REQUIRE(run("simulate --n 150 --gamma0 0.5 --reps 6 --seed 77 --ur 0,0.5"
              " --grid 21 --out " + base) == 0);

  nlohmann::json doc;
  std::ifstream(base + ".json") >> doc;
  CHECK(doc["replicates"] == 6);
  CHECK(doc["failed"] == 0);
  CHECK(doc["n"] == 150);
  CHECK(doc["gamma0"] == 0.5);
  CHECK(doc["true_rho"].get<double>() ==
        doctest::Approx(0.35901098714230027).epsilon(1e-12));
  for (const char* m : {"cc_ci", "oracle_ci", "ur"}) {
    CHECK(doc[m]["replicates"] == 6);
    CHECK(doc[m]["empirical_coverage"].get<double>() >= 0.0);
    CHECK(doc[m]["empirical_coverage"].get<double>() <= 1.0);
  }

  const std::string csv = slurp(base + ".csv");
  int lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 1 + 3 * 6);  // header plus three methods per replicate
  CHECK(csv.rfind("replicate,method,lower,upper,width,covered\n", 0) == 0);
}

TEST_CASE("simulate rejects bad configuration") {
  CHECK(run("simulate --reps 0") == 3);
  CHECK(run("simulate --gamma0 1.5 --reps 2") == 3);
  CHECK(run("simulate --ur 0.5 --reps 2") == 3);
  CHECK(run("simulate --ur bogus,values --reps 2") == 3);
}
