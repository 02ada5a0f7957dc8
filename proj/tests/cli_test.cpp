#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support/schema_validate.hpp"
#include "wordsolve/json_io.hpp"

using namespace wordsolve;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const fs::path& scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("wordsolve_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  fs::path out = scratch_dir() / "stdout.txt";
  fs::path err = scratch_dir() / "stderr.txt";
  std::string cmd = env_prefix + std::string(WORDSOLVE_CLI_BIN) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

Json load_schema(const std::string& name) {
  return Json::parse(read_file(fs::path(WORDSOLVE_SCHEMA_DIR) / name));
}

void check_schema(const std::string& schema_name, const Json& instance) {
  auto errors = testsupport::validate(load_schema(schema_name), instance);
  for (const auto& e : errors) UNSCOPED_INFO(e);
  CHECK(errors.empty());
}

fs::path fixture_word(const std::string& name, const std::string& body) {
  fs::path path = scratch_dir() / name;
  write_file(path, body);
  return path;
}

}  // namespace

TEST_CASE("analyze: reports, schema, determinism") {
  fs::path file = fixture_word("commutator.json", R"({
    "variables": 2,
    "coefficients": {},
    "word": "x1 x2 x1^-1 x2^-1"
  })");
  RunResult r = run_cli("analyze " + file.string());
  REQUIRE(r.exit_code == 0);
  Json report = Json::parse(r.out);
  check_schema("pipeline_report.schema.json", report);
  check_schema("classification_report.schema.json", report["classification"]);
  CHECK(report["classification"]["thm14_primes"]["kind"] == "ALL_PRIMES_NOT_DIVIDING");
  CHECK(report["solve"].is_null());

  RunResult again = run_cli("analyze " + file.string());
  CHECK(again.out == r.out);  // byte-identical rerun
}

TEST_CASE("analyze: parse errors exit 3") {
  fs::path unknown = fixture_word("unknown.json", R"({
    "variables": 2, "coefficients": {}, "word": "g9 x1"
  })");
  CHECK(run_cli("analyze " + unknown.string()).exit_code == 3);

  fs::path range = fixture_word("range.json", R"({
    "variables": 2, "coefficients": {}, "word": "x3"
  })");
  CHECK(run_cli("analyze " + range.string()).exit_code == 3);

  fs::path badjson = fixture_word("bad.json", "{not json");
  CHECK(run_cli("analyze " + badjson.string()).exit_code == 3);

  CHECK(run_cli("analyze " + (scratch_dir() / "missing.json").string()).exit_code == 3);
}

TEST_CASE("analyze: invalid matrices exit 4") {
  fs::path bad = fixture_word("badmatrix.json", R"({
    "variables": 1,
    "coefficients": {"g1": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[2.0,0.0]]]},
    "word": "g1 x1"
  })");
  CHECK(run_cli("analyze " + bad.string()).exit_code == 4);
}

TEST_CASE("cohomology tasks") {
  SECTION("top-class at p = 3") {
    RunResult r = run_cli("cohomology --p 3 --task top-class");
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(r.out);
    check_schema("cohomology_report.schema.json", report);
    CHECK(report["result"]["in_J"] == false);
    CHECK(report["result"]["sign"] == 1);
    CHECK(report["result"]["monomial"] == "y^2⊗y1y2");
    CHECK(report["result"]["degree"] == 8);
  }
  SECTION("hopf-check at p = 3") {
    RunResult r = run_cli("cohomology --p 3 --task hopf-check");
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(r.out);
    check_schema("cohomology_report.schema.json", report);
    CHECK(report["adopted"]["coassociative"] == true);
    CHECK(report["adopted"]["degenerate_all_primitive"] == false);
    CHECK(report["printed_literal"]["degenerate_all_primitive"] == true);
  }
  SECTION("word-coeff at p = 5 with terms 2,3,1") {
    RunResult r = run_cli("cohomology --p 5 --task word-coeff --terms 2,3,1");
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(r.out);
    check_schema("cohomology_report.schema.json", report);
    CHECK(report["b"] == 6);
    CHECK(report["results"][0]["i"] == 2);
    CHECK(report["results"][0]["coefficient"] == 1);  // 6 mod 5
    CHECK(report["results"][0]["units"] == "a2");
    CHECK(report["matches_heisenberg"] == true);
  }
  SECTION("word-coeff with pinned units") {
    RunResult r = run_cli("cohomology --p 5 --task word-coeff --terms 2,3,1 --pin-units");
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(r.out);
    // a_2 pinned to -(2-1) = 4 mod 5; coefficient absorbs the unit value
    CHECK(report["results"][0]["pinned"] == true);
    CHECK(report["results"][0]["coefficient"] == 4);
    CHECK(report["results"][0]["units"] == "1");
    // a_p stays symbolic
    CHECK(report["results"][3]["pinned"] == false);
    CHECK(report["results"][3]["units"] == "a5");
  }
  SECTION("power-map at p = 3, n = 2") {
    RunResult r = run_cli("cohomology --p 3 --task power-map --n 2");
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(r.out);
    check_schema("cohomology_report.schema.json", report);
    CHECK(report["images"]["y1"] == "2*y^0.{1}");
    CHECK(report["linear_part_ok"] == true);
  }
  SECTION("unsupported p exits 6") {
    CHECK(run_cli("cohomology --p 11 --task top-class").exit_code == 6);
    CHECK(run_cli("cohomology --p 4 --task hopf-check").exit_code == 6);
  }
  SECTION("word-coeff without terms exits 3") {
    CHECK(run_cli("cohomology --p 3 --task word-coeff").exit_code == 3);
  }
}

TEST_CASE("solve: trivial single-variable word") {
  fs::path file = fixture_word("single.json", R"({
    "variables": 1, "coefficients": {}, "word": "x1"
  })");
  RunResult r = run_cli("solve " + file.string() + " --dim 3 --target haar:7 --seed 1");
  REQUIRE(r.exit_code == 0);
  Json report = Json::parse(r.out);
  check_schema("pipeline_report.schema.json", report);
  CHECK(report["solve"]["status"] == "solved");
  CHECK(report["solve"]["residual"].get<double>() <= 1e-8);
  CHECK(report["solve"]["restart_index"] == 0);
}

TEST_CASE("solve: obstruction summary and thm14 gate") {
  fs::path comm = fixture_word("commutator2.json", R"({
    "variables": 2,
    "coefficients": {"g1": "haar:11", "g2": "haar:12"},
    "word": "g1 x1 g2 x2 g1^-1 x1^-1 g2^-1 x2^-1"
  })");
  SECTION("verify-obstruction adds the cohomology summary") {
    RunResult r = run_cli("solve " + comm.string() +
                          " --dim 3 --seed 2 --verify-obstruction --require-thm14");
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(r.out);
    check_schema("pipeline_report.schema.json", report);
    CHECK(report["cohomology"]["p"] == 3);
    CHECK(report["cohomology"]["in_J"] == false);
    CHECK(report["cohomology"]["coefficient"] == 1);  // b = 1 mod 3
    CHECK(report["solve"]["status"] == "solved");
  }
  SECTION("gamma_3 content is refused under --require-thm14") {
    fs::path gamma3 = fixture_word("gamma3.json", R"({
      "variables": 2, "coefficients": {},
      "word": "x1 x2 x1^-1 x2^-1 x1 x2 x1 x2^-1 x1^-2"
    })");
    CHECK(run_cli("solve " + gamma3.string() + " --dim 5 --require-thm14").exit_code ==
          7);
  }
  SECTION("non-prime dimension is refused under --require-thm14") {
    CHECK(run_cli("solve " + comm.string() + " --dim 4 --require-thm14").exit_code == 7);
  }
  SECTION("the criterion gate respects the exception primes") {
    fs::path cubed = fixture_word("cubed.json", R"({
      "variables": 2, "coefficients": {},
      "word": "x1 x2 x1^-1 x2^-1 x1 x2 x1^-1 x2^-1 x1 x2 x1^-1 x2^-1"
    })");
    // b = 3: refused at p = 3, admitted at p = 5
    CHECK(run_cli("solve " + cubed.string() +
                  " --dim 3 --require-thm14 --max-iters 10 --restarts 1")
              .exit_code == 7);
    RunResult ok = run_cli("solve " + cubed.string() + " --dim 5 --require-thm14 --seed 3");
    CHECK(ok.exit_code == 0);
  }
}

TEST_CASE("solve: budget exhaustion exits 2") {
  fs::path comm = fixture_word("commutator3.json", R"({
    "variables": 2, "coefficients": {}, "word": "x1 x2 x1^-1 x2^-1"
  })");
  RunResult r = run_cli("solve " + comm.string() +
                        " --dim 2 --target haar:5 --max-iters 1 --restarts 1");
  CHECK(r.exit_code == 2);
  Json report = Json::parse(r.out);
  CHECK(report["solve"]["status"] == "not_found");
}

TEST_CASE("solve: determinism across thread counts and env caps") {
  fs::path comm = fixture_word("commutator4.json", R"({
    "variables": 2, "coefficients": {}, "word": "x1 x2 x1^-1 x2^-1"
  })");
  std::string args = "solve " + comm.string() + " --dim 2 --target haar:9 --seed 21";
  RunResult one = run_cli(args + " --threads 1");
  RunResult two = run_cli(args + " --threads 2");
  RunResult env = run_cli(args, "WORDSOLVE_THREADS=2 ");
  REQUIRE(one.exit_code == 0);
  CHECK(one.out == two.out);
  CHECK(one.out == env.out);
}

TEST_CASE("scan: reports rates and stays deterministic") {
  fs::path comm = fixture_word("commutator5.json", R"({
    "variables": 2, "coefficients": {}, "word": "x1 x2 x1^-1 x2^-1"
  })");
  RunResult r =
      run_cli("scan " + comm.string() + " --dim 2 --targets 3 --seed 31");
  REQUIRE(r.exit_code == 0);
  Json report = Json::parse(r.out);
  check_schema("scan_report.schema.json", report);
  CHECK(report["num_targets"] == 3);
  CHECK(report["success_rate"] == 1.0);

  RunResult again =
      run_cli("scan " + comm.string() + " --dim 2 --targets 3 --seed 31");
  CHECK(again.out == r.out);

  SECTION("tiny budget keeps exit 0 with rates in the report") {
    RunResult starved = run_cli("scan " + comm.string() +
                                " --dim 2 --targets 1 --max-iters 1 --restarts 1");
    CHECK(starved.exit_code == 0);
    Json rep = Json::parse(starved.out);
    CHECK(rep["success_rate"] == 0.0);
    CHECK(rep["worst_residual"].is_null());
  }
}

TEST_CASE("solve: dimension conflicts exit 4") {
  fs::path file = fixture_word("dimconflict.json", R"({
    "variables": 1,
    "coefficients": {"g1": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]},
    "word": "g1 x1"
  })");
  CHECK(run_cli("solve " + file.string() + " --dim 3").exit_code == 4);
}
