// File formats and the command-line front end (spawned as a subprocess).
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qdes/io.hpp"

using namespace qdes;
using nlohmann::json;

namespace {

std::string data_dir() {
  const char* d = std::getenv("QDES_DATA");
  return d ? d : "../data";
}

std::string qdes_bin() {
  const char* b = std::getenv("QDES_BIN");
  return b ? b : "";
}

int run_cli(const std::string& args) {
  std::string cmd = qdes_bin() + " " + args + " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("job serialization round trip") {
  json root = io::parse_file(data_dir() + "/design_2-4-3-3_q2_c3.json");
  io::JobSpec job = io::job_from_json(root);
  CHECK(job.v == 4);
  CHECK(job.k == 3);
  CHECK(job.lambda2 == 3);
  CHECK(job.q == 2);
  REQUIRE(job.generators.size() == 1);
  CHECK(job.generators[0].at(0, 3) == 1);

  io::JobSpec again = io::job_from_json(json{{"job", io::job_to_json(job)}});
  CHECK(again.v == job.v);
  CHECK(again.generators == job.generators);
}

TEST_CASE("matrix serialization round trip") {
  TacticalMatrix m;
  m.sizes = {3, 3};
  m.lengths = {2, 2, 2};
  m.rho = {1, 2, 0, 0, 2, 1};
  m.kappa = {1, 3, 0, 0, 3, 1};
  TacticalMatrix back = io::matrix_from_json(io::matrix_to_json(m), "test");
  CHECK(back == m);
}

TEST_CASE("input validation diagnostics") {
  CHECK_THROWS_WITH_AS(io::job_from_json(json{{"design", {{"q", 2}}}}),
                       doctest::Contains("missing field 'v'"), InputError);
  json bad = json::parse(R"({
    "design": {"q": 2, "v": 3, "k": 2, "lambda2": 1},
    "generators": [[[0,1,0],[1,0,0],[0,0,2]]]
  })");
  CHECK_THROWS_WITH_AS(io::job_from_json(bad),
                       doctest::Contains("out of field range"), InputError);
  CHECK_THROWS_AS(io::parse_file("/nonexistent/file.json"), InputError);

  FieldSpec f(2, 3);
  CHECK_THROWS_WITH_AS(
      io::subspace_from_json(json::parse("[[1,0,0],[1,0,0]]"), f, "blk"),
      doctest::Contains("linearly dependent"), InputError);
}

TEST_CASE("cli stages chain and exit codes hold") {
  if (qdes_bin().empty()) {
    MESSAGE("QDES_BIN not set; skipping subprocess checks");
    return;
  }
  const std::string fix = data_dir() + "/design_2-4-3-3_q2_c3.json";

  SUBCASE("params and orbits succeed") {
    CHECK(run_cli("params --input " + fix) == 0);
    CHECK(run_cli("orbits --input " + fix) == 0);
    CHECK(run_cli("sigma --input " + fix) == 0);
  }

  SUBCASE("inadmissible parameters exit 1") {
    spit("inadmissible.json", R"({
      "design": {"q": 2, "v": 6, "k": 3, "lambda2": 1},
      "generators": []
    })");
    CHECK(run_cli("params --input inadmissible.json") == 1);
  }

  SUBCASE("bad input exits 2") {
    CHECK(run_cli("params --input no_such_file.json") == 2);
    spit("broken.json", "{ not json");
    CHECK(run_cli("params --input broken.json") == 2);
    // sigma is a binary-field operation.
    spit("ternary.json", R"({
      "design": {"q": 3, "v": 3, "k": 2, "lambda2": 1},
      "generators": [[[1,0,0],[0,1,0],[0,0,1]]]
    })");
    CHECK(run_cli("sigma --input ternary.json") == 2);
  }

  SUBCASE("enumerate, filter, construct, verify accept each other's files") {
    CHECK(run_cli("enumerate --input " + fix + " --output step_enum.json") ==
          0);
    CHECK(run_cli("filter --input step_enum.json --output step_filt.json") ==
          0);
    CHECK(run_cli("construct --input step_filt.json --output step_cons.json") ==
          0);
    CHECK(run_cli("verify --input step_cons.json --output step_ver.json") == 0);

    json enum_out = io::parse_file("step_enum.json");
    CHECK(enum_out.at("matrices").size() == 2);
    json filt_out = io::parse_file("step_filt.json");
    CHECK(filt_out.at("accepted").size() == 1);
    CHECK(filt_out.at("rejected").size() == 1);
    json cons_out = io::parse_file("step_cons.json");
    CHECK(cons_out.at("designs").size() == 1);
    CHECK(cons_out.at("designs")[0].at("verified").get<bool>());
    json ver_out = io::parse_file("step_ver.json");
    CHECK(ver_out.at("results")[0].at("valid").get<bool>());
  }

  SUBCASE("byte-identical output for identical runs and any worker count") {
    CHECK(run_cli("enumerate --input " + fix + " --output det_a.json") == 0);
    CHECK(run_cli("enumerate --input " + fix + " --output det_b.json") == 0);
    CHECK(slurp("det_a.json") == slurp("det_b.json"));
    CHECK(run_cli("enumerate --jobs 3 --input " + fix +
                  " --output det_c.json") == 0);
    CHECK(slurp("det_a.json") == slurp("det_c.json"));
  }

  SUBCASE("verify accepts a bare block list and flags a broken one") {
    json d = io::parse_file(data_dir() + "/design_hyperplanes_gf2_4.json");
    json bare{{"job", d.at("job")},
              {"blocks", d.at("designs")[0].at("blocks")}};
    spit("bare_design.json", bare.dump());
    CHECK(run_cli("verify --input bare_design.json") == 0);

    bare["blocks"].erase(0);
    spit("bare_broken.json", bare.dump());
    CHECK(run_cli("verify --input bare_broken.json") == 1);
  }
}
