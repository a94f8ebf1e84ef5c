#include "nikishin/cli/config.hpp"
#include "nikishin/cli/io.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace nikishin::cli;
namespace fs = std::filesystem;

namespace {

const std::string kTool = NIKISHIN_TOOL;
const fs::path kScratch = TEST_SCRATCH;

json small_config() {
  return json::parse(R"({
    "problem": {"R": 2, "q": [1.0, 1.0],
                "components": [{"b": 1.0, "a": 1.0, "mass": 1.0}, {"b": 1.0, "a": 1.0, "mass": 1.0}]},
    "discretization": {"n": 200, "r_min": 1e-3, "margin": 20},
    "solver": {"seed": 1}
  })");
}

std::string write_config(const std::string& name, const json& j) {
  fs::create_directories(kScratch);
  const fs::path p = kScratch / (name + ".json");
  std::ofstream(p) << j.dump(2);
  return p.string();
}

struct Run {
  int code;
  std::string err;
};

Run run(const std::string& args) {
  fs::create_directories(kScratch);
  const fs::path err = kScratch / "stderr.txt";
  const std::string cmd = kTool + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out_dir(const std::string& name) { return (kScratch / name).string(); }

}  // namespace

TEST_CASE("config defaults, round trip and hash") {
  auto cfg = parse_config(json::object());
  CHECK(cfg.problem.R == 2);
  CHECK(cfg.problem.q == std::vector<double>{1.0, 1.0});
  CHECK(cfg.discretization.n == 800);
  CHECK(cfg.solver.kkt_tol == 1e-9);
  CHECK(example_strength(cfg) == 1.0);

  const json resolved = to_json(cfg);
  auto again = parse_config(resolved);
  CHECK(to_json(again) == resolved);
  CHECK(config_hash(again) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);

  auto j = small_config();
  j["discretization"]["n"] = 300;
  CHECK(config_hash(parse_config(j)) != config_hash(parse_config(small_config())));
}

TEST_CASE("config errors name the offending key") {
  auto expect_key = [](const json& j, const std::string& key) {
    try {
      parse_config(j);
      FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
      CHECK(e.key() == key);
    }
  };
  auto j = small_config();
  j["solver"]["tolerance"] = 1.0;
  expect_key(j, "solver.tolerance");
  j = small_config();
  j["discretization"]["n"] = 4;
  expect_key(j, "discretization.n");
  j = small_config();
  j["problem"]["q"] = json::array({1.0});
  expect_key(j, "problem.q");
  j = small_config();
  j["solver"]["kkt_tol"] = "tiny";
  expect_key(j, "solver.kkt_tol");
}

TEST_CASE("problem construction from config") {
  auto j = small_config();
  j["problem"]["components"][1]["a"] = 2.0;
  auto cfg = parse_config(j);
  auto prob = make_problem(cfg);
  CHECK(prob.potentials[1].log_strength() == 2.0);
  CHECK(prob.potentials[1].sign() == -1);
  CHECK_FALSE(example_strength(cfg).has_value());
  CHECK(make_solve_config(cfg).masses == std::vector<double>{1.0, 1.0});
  CHECK(make_grid_spec(cfg).n == 200);
}

TEST_CASE("csv schema") {
  fs::create_directories(kScratch);
  const std::string p = (kScratch / "t.csv").string();
  CurveRow row{1.5, "+", {{0.0, 0.0}, {1.0, -2.0}}, {{0.5, 0.0}, {-0.5, 0.0}}};
  write_csv(p, curve_header(2), {curve_fields(row)});
  auto t = read_csv(p);
  CHECK(t.header == curve_header(2));
  CHECK(t.number(0, t.column("C2_im")) == -2.0);
  CHECK_THROWS_AS(t.column("C3_re"), ConfigError);
  CHECK_THROWS_AS(read_csv((kScratch / "missing.csv").string()), ConfigError);
}

TEST_CASE("solve, verify, curve end to end with exit codes") {
  const std::string cfg = write_config("small", small_config());
  const std::string dir = out_dir("small");
  fs::remove_all(dir);

  REQUIRE(run("solve --config " + cfg + " --out " + dir + " --threads 1").code == 0);
  const std::string dens1 = slurp(fs::path(dir) / "densities.csv");
  const std::string rep1 = slurp(fs::path(dir) / "report.json");
  REQUIRE(run("solve --config " + cfg + " --out " + dir + " --threads 4").code == 0);
  CHECK(slurp(fs::path(dir) / "densities.csv") == dens1);
  CHECK(slurp(fs::path(dir) / "report.json") == rep1);

  auto rep = read_json((fs::path(dir) / "report.json").string());
  CHECK(rep["variational"]["pass"] == true);
  REQUIRE(rep["components"].size() == 2);
  CHECK(rep["components"][0]["support"].size() == 1);
  CHECK(rep["components"][1]["support"].size() == 1);
  CHECK(rep["sign_calibration"]["sigma"] == 1);

  CHECK(run("verify --config " + cfg + " --out " + dir).code == 0);
  CHECK(fs::exists(fs::path(dir) / "verify.json"));

  REQUIRE(run("curve --config " + cfg + " --out " + dir).code == 0);
  auto bp = read_json((fs::path(dir) / "branchpoints.json").string());
  CHECK(bp["branchpoint_count"] == 4);
  CHECK(bp["c1_max_abs"].get<double>() <= 1e-10);
  CHECK(bp["pole_gaps"].size() >= 1);
  auto curve = read_csv((fs::path(dir) / "curve.csv").string());
  CHECK(curve.header.front() == "x");
  CHECK(curve.rows.size() > 100);

  auto c = run("compare --config " + cfg + " --out " + dir);
  CHECK((c.code == 0 || c.code == 3));
  auto cmp = read_json((fs::path(dir) / "compare.json").string());
  CHECK(cmp["variants"].size() == 2);

  // verify against a different discretization is a configuration error
  auto j = small_config();
  j["discretization"]["n"] = 201;
  CHECK(run("verify --config " + write_config("other", j) + " --out " + dir).code == 2);
}

TEST_CASE("configuration failures exit with 2") {
  auto j = small_config();
  j["discretization"]["n"] = 4;
  auto r = run("solve --config " + write_config("n4", j) + " --out " + out_dir("n4"));
  CHECK(r.code == 2);
  CHECK(r.err.find("discretization.n") != std::string::npos);

  j = small_config();
  j["bogus"] = 1;
  CHECK(run("solve --config " + write_config("bogus", j) + " --out " + out_dir("bogus")).code == 2);

  j = small_config();
  j["problem"]["components"][0]["a"] = 0.0;
  j["problem"]["components"][1]["a"] = 0.0;
  j["problem"]["strict_admissibility"] = true;
  r = run("solve --config " + write_config("strict", j) + " --out " + out_dir("strict"));
  CHECK(r.code == 2);
  CHECK(r.err.find("[A5]") != std::string::npos);

  fs::remove_all(out_dir("empty"));
  CHECK(run("curve --config " + write_config("small", small_config()) + " --out " + out_dir("empty")).code == 2);
  CHECK(run("example --a -1 --out " + out_dir("neg")).code == 2);
  CHECK(run("solve").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("non-convergence and window exhaustion") {
  auto j = small_config();
  j["solver"]["max_iterations"] = 2;
  const std::string dir = out_dir("nc");
  fs::remove_all(dir);
  CHECK(run("solve --config " + write_config("nc", j) + " --out " + dir).code == 3);
  CHECK(fs::exists(fs::path(dir) / "densities.csv"));
  auto rep = read_json((fs::path(dir) / "report.json").string());
  CHECK(rep["converged"] == false);

  j = small_config();
  j["discretization"]["r_max"] = 1.5;
  j["discretization"]["max_doublings"] = 0;
  CHECK(run("solve --config " + write_config("win", j) + " --out " + out_dir("win")).code == 4);
}

TEST_CASE("closed-form example outputs") {
  const std::string dir = out_dir("ex0");
  REQUIRE(run("example --a 0 --out " + dir).code == 0);
  auto ex = read_json((fs::path(dir) / "exponents.json").string());
  REQUIRE(ex["fits"].size() >= 2);
  bool origin = false;
  for (const auto& f : ex["fits"])
    if (std::abs(f["exponent"].get<double>() + 2.0 / 3.0) < 0.02) origin = true;
  CHECK(origin);
  auto bp = read_json((fs::path(dir) / "branchpoints.json").string());
  CHECK(bp["triple_point"]["monodromy_cycles"] == json::array({3}));

  const std::string d1 = out_dir("ex1");
  REQUIRE(run("example --a 1 --out " + d1).code == 0);
  // the closed-form curve compared against itself
  auto self = run("compare --a 1 --variant 3 --out " + d1);
  CHECK(self.code == 0);
  auto cmp = read_json((fs::path(d1) / "compare.json").string());
  CHECK(cmp["variants"][0]["c3_relative_error"].get<double>() == 0.0);
  CHECK(cmp["c2_relative_error"].get<double>() == 0.0);
  CHECK(cmp["adjudicated_c0"] == 3);
  CHECK(run("example --a 1 --variant 4 --out " + d1).code == 2);
}

TEST_CASE("admissibility report") {
  const std::string dir = out_dir("adm");
  REQUIRE(run("admissibility --config " + write_config("small", small_config()) + " --out " + dir).code == 0);
  auto j = read_json((fs::path(dir) / "admissibility.json").string());
  CHECK(j["admissibility"]["conditions"].size() == 5);
}
