#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "rdclass/cli.hpp"
#include "rdclass/csv.hpp"

using namespace rdclass;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rdclass_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const std::string kBinary = fixtures::instance_path("binary_p1_0.3.json");
const std::string kFirst = fixtures::instance_path("three_label_parametric_cost.json");
const std::string kSecond = fixtures::instance_path("three_label_two_letter.json");

}  // namespace

TEST_CASE("binary-curve output") {
  const auto r = run({"binary-curve", "--p1", "0.3", "--grid-size", "21"});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == "p2,error_probability,mutual_information_bits");
  CHECK(rows[1] == "0,0.3,1");
  CHECK(rows[5] == "0.1,0.34,0.531004406");
  CHECK(rows[21] == "0.5,0.5,0");

  const auto clean = run({"binary-curve", "--p1", "0", "--grid-size", "5"});
  for (std::size_t i = 1; i < lines(clean.out).size(); ++i) {
    const auto row = lines(clean.out)[i];
    const auto first = row.substr(0, row.find(','));
    const auto second = row.substr(first.size() + 1, row.find(',', first.size() + 1) - first.size() - 1);
    CHECK(first == second);
  }
}

TEST_CASE("exit codes") {
  CHECK(run({"binary-curve", "--p1", "0.6"}).code == kExitUsage);
  CHECK(run({"binary-curve", "--p1", "abc"}).code == kExitUsage);
  CHECK(run({"no-such-command"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"binary-curve", "--output", "/nonexistent-dir/x.csv"}).code == kExitIo);
  CHECK(run({"sweep", "/nonexistent.json", "--budget-grid", "0:1:3"}).code == kExitIo);
  CHECK(run({"sweep", kBinary, "--budget-grid", "0:1"}).code == kExitUsage);
  CHECK(run({"sweep", kBinary, "--budget-grid", "1:0:3"}).code == kExitUsage);
  CHECK(run({"sweep", kFirst, "--budget-grid", "0:1:3", "--cost-param", "c"}).code == kExitUsage);
  CHECK(run({"ib-sweep", kSecond, "--beta-grid", "0:10:3"}).code == kExitUsage);
  const auto io = run({"binary-curve", "--output", "/nonexistent-dir/x.csv"});
  CHECK(io.err.find("/nonexistent-dir/x.csv") != std::string::npos);
}

TEST_CASE("sweep output") {
  const auto r = run({"sweep", kFirst, "--budget-grid", "0:0.7:20", "--cost-param", "c=1"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  const auto pts = read_sweep(in, {"y1", "y2", "y3"});
  REQUIRE(pts.size() == 20);
  double previous = 1e300;
  for (const auto& p : pts) {
    if (p.status != SolveStatus::optimal) continue;
    CHECK(p.mi <= previous + 1e-6);
    previous = p.mi;
  }

  const auto below = run({"sweep", kBinary, "--budget-grid", "0:0.25:4"});
  REQUIRE(below.code == kExitOk);
  for (std::size_t i = 1; i < lines(below.out).size(); ++i)
    CHECK(lines(below.out)[i].ends_with(",,,,infeasible"));
}

TEST_CASE("binary sweep agrees with the closed-form curve") {
  const auto sweep_run = run({"sweep", kBinary, "--budget-grid", "0.3:0.5:21"});
  REQUIRE(sweep_run.code == kExitOk);
  std::istringstream in(sweep_run.out);
  const auto pts = read_sweep(in, {"y1", "y2"});
  REQUIRE(pts.size() == 21);
  for (const auto& p : pts) {
    REQUIRE(p.status == SolveStatus::optimal);
    CHECK(std::abs(p.mi - fixtures::one_minus_h2((p.budget - 0.3) / 0.4)) <= 1e-3);
  }
}

TEST_CASE("ib-sweep output is reproducible") {
  const auto a = scratch("ib_a.csv");
  const auto b = scratch("ib_b.csv");
  REQUIRE(run({"ib-sweep", kSecond, "--seed", "9", "--output", a.string()}).code == kExitOk);
  REQUIRE(run({"ib-sweep", kSecond, "--seed", "9", "--output", b.string()}).code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a.string() + ".meta.json") == slurp(b.string() + ".meta.json"));

  std::istringstream in(slurp(a));
  const auto rows = read_ib(in);
  REQUIRE(rows.size() == 41);
  CHECK(rows[0].beta == 0.0);
  CHECK(rows[0].mi <= 1e-9);
  CHECK(std::abs(rows[0].cost - 0.25005) <= 1e-9);

  const auto huge = run({"ib-sweep", kBinary, "--beta-grid", "1e6:1e6:1"});
  REQUIRE(huge.code == kExitOk);
  std::istringstream hin(huge.out);
  const auto hrows = read_ib(hin);
  REQUIRE(hrows.size() == 1);
  CHECK(std::abs(hrows[0].cost - 0.3) <= 1e-6);
}

TEST_CASE("sweep metadata sidecar") {
  const auto path = scratch("sweep.csv");
  REQUIRE(run({"sweep", kSecond, "--budget-grid", "0.1:0.3:3", "--output", path.string()}).code ==
          kExitOk);
  const auto meta = nlohmann::json::parse(slurp(path.string() + ".meta.json"));
  CHECK(meta["instance_digest"] == instance_digest(fixtures::two_letter()));
  CHECK(meta["canonical"] == true);
  CHECK(meta["decoding"].get<std::string>().find("minimum") != std::string::npos);
}

TEST_CASE("verify command") {
  const auto pass = run({"verify", kBinary, "--epsilon", "0.34", "--step", "0.01", "--seed", "1"});
  CHECK(pass.code == kExitOk);
  CHECK(pass.out.find("FAIL") == std::string::npos);
  CHECK(pass.out.find("PASS solver mi") != std::string::npos);
  CHECK(pass.out.find("PASS monte carlo") != std::string::npos);

  const auto infeasible = run({"verify", kBinary, "--epsilon", "0.2", "--step", "0.01"});
  CHECK(infeasible.code == kExitOk);
  CHECK(infeasible.out.find("infeasible (0 of") != std::string::npos);

  const auto path = scratch("four_letters.json");
  std::ofstream(path) << R"({"labels": ["a", "b"], "data_letters": ["p", "q", "r", "s"],
    "prior": [0.5, 0.5], "generation": [[0.4, 0.3, 0.2, 0.1], [0.1, 0.2, 0.3, 0.4]],
    "compressed_size": 4})";
  const auto refused = run({"verify", path.string(), "--epsilon", "0.4", "--step", "0.02"});
  CHECK(refused.code == kExitUsage);
  CHECK(refused.err.find("refused") != std::string::npos);
}

TEST_CASE("verification failures exit with status 3") {
  // Too few samples for the Monte Carlo estimate to land within 3 standard errors.
  const auto r = run({"verify", kBinary, "--epsilon", "0.34", "--step", "0.02", "--samples", "1",
                      "--seed", "1"});
  CHECK(r.code == kExitVerifyFailed);
  CHECK(r.out.find("FAIL monte carlo") != std::string::npos);
}
