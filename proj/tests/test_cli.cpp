#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cli_harness.hpp"
#include "doctest.h"
#include "json.hpp"

using cliharness::RunResult;
using cliharness::TempDir;
using cliharness::run_cli;
using Json = nlohmann::ordered_json;

namespace {

const char* kWorkedExact = R"({
  "p": ["1/1", "0/1"], "q": ["1/2", "1/2"],
  "p_prime": ["3/4", "1/4"], "q_prime": ["1/2", "1/2"],
  "gamma": 0.1, "mode": "exact", "backend": "rational"
})";

const char* kReversedExact = R"({
  "p": ["3/4", "1/4"], "q": ["1/2", "1/2"],
  "p_prime": ["1/1", "0/1"], "q_prime": ["1/2", "1/2"],
  "gamma": 0.1, "mode": "exact", "backend": "rational"
})";

// needs a catalyst: no direct channel exists (D_inf increases)
const char* kCatalytic = R"({
  "p": ["19/20", "1/20"], "q": ["1/2", "1/2"],
  "p_prime": ["13/20", "7/20"], "q_prime": ["1/3", "2/3"],
  "gamma": 0.5, "mode": "exact", "backend": "rational"
})";

}  // namespace

TEST_CASE("divergence: worked table contains the frozen values") {
  TempDir dir;
  std::string file = dir.file("inst.json", kWorkedExact);
  RunResult res = run_cli("divergence " + file);
  REQUIRE(res.exit_code == 0);
  Json rep = Json::parse(res.output);
  bool found_ln2 = false, found_target = false;
  for (const auto& v : rep["table"]["D(p||q)"])
    if (v.is_number() && std::abs(v.get<double>() - 0.6931471805599453) < 1e-9) found_ln2 = true;
  for (const auto& v : rep["table"]["D(p'||q')"])
    if (v.is_number() && std::abs(v.get<double>() - 0.130812035941137) < 1e-6) found_target = true;
  CHECK(found_ln2);
  CHECK(found_target);

  // explicit alpha list with infinities
  RunResult res2 = run_cli("divergence " + file + " --alpha -inf 0 1 inf");
  REQUIRE(res2.exit_code == 0);
  Json rep2 = Json::parse(res2.output);
  CHECK(rep2["table"]["alpha"].size() == 4);
}

TEST_CASE("divergence: p = q gives the zero column") {
  TempDir dir;
  std::string file = dir.file("inst.json", R"({
    "p": ["1/2","1/2"], "q": ["1/2","1/2"],
    "p_prime": ["1/2","1/2"], "q_prime": ["1/2","1/2"],
    "mode": "approximate", "epsilon": 0.1, "backend": "rational"
  })");
  RunResult res = run_cli("divergence " + file);
  REQUIRE(res.exit_code == 0);
  Json rep = Json::parse(res.output);
  for (const auto& v : rep["table"]["D(p||q)"]) {
    REQUIRE(v.is_number());
    CHECK(std::abs(v.get<double>()) <= 1e-12);
  }
}

TEST_CASE("malformed input exits 2 with context on stderr") {
  TempDir dir;
  CHECK(run_cli("divergence " + dir.file("bad.json", "{ not json")).exit_code == 2);
  CHECK(run_cli("check " + dir.file("missing.json", R"({"p": [1, 0]})")).exit_code == 2);
  CHECK(run_cli("check " + dir.file("field.json", R"({
    "p": [1, 0], "q": ["1/2", "oops"],
    "p_prime": [1, 0], "q_prime": ["1/2", "1/2"],
    "mode": "exact"})")).exit_code == 2);
  CHECK(run_cli("divergence /nonexistent/file.json").exit_code == 2);
}

TEST_CASE("check: exit codes are the contract") {
  TempDir dir;
  CHECK(run_cli("check " + dir.file("a.json", kWorkedExact)).exit_code == 0);
  CHECK(run_cli("check " + dir.file("b.json", kReversedExact)).exit_code == 1);
  // equal relative spectra in exact mode is a hypothesis error
  CHECK(run_cli("check " + dir.file("c.json", R"({
    "p": ["1/1","0/1"], "q": ["1/2","1/2"],
    "p_prime": ["1/1","0/1"], "q_prime": ["1/2","1/2"],
    "mode": "exact"})")).exit_code == 2);
}

TEST_CASE("relmaj: verdicts, witness emission, stdin input") {
  TempDir dir;
  std::string self = dir.file("self.json", R"({
    "p": ["1/1","0/1"], "q": ["1/2","1/2"],
    "p_prime": ["1/1","0/1"], "q_prime": ["1/2","1/2"],
    "mode": "exact"})");
  RunResult res = run_cli("relmaj " + self + " --emit-witness");
  REQUIRE(res.exit_code == 0);
  Json rep = Json::parse(res.output);
  CHECK(rep["lp_feasible"] == true);
  CHECK(rep["blackwell"] == true);
  CHECK(rep["witness"]["orientation"] == "output-major");
  CHECK(rep["witness"]["entries"][0][0] == "1/1");
  CHECK(rep["witness"]["entries"][1][0] == "0/1");

  std::string feasible = dir.file("feasible.json", R"({
    "p": ["1/1","0/1"], "q": ["1/2","1/2"],
    "p_prime": ["1/2","1/2"], "q_prime": ["1/2","1/2"],
    "mode": "exact"})");
  CHECK(run_cli("relmaj " + feasible).exit_code == 0);

  std::string infeasible = dir.file("infeasible.json", R"({
    "p": ["1/2","1/2"], "q": ["1/2","1/2"],
    "p_prime": ["1/1","0/1"], "q_prime": ["1/2","1/2"],
    "mode": "exact"})");
  RunResult res3 = run_cli("relmaj " + infeasible);
  CHECK(res3.exit_code == 1);
  Json rep3 = Json::parse(res3.output);
  CHECK(rep3["lp_feasible"] == false);
  CHECK(rep3["blackwell"] == false);

  RunResult piped = run_cli(std::string("relmaj - < ") + infeasible);
  CHECK(piped.exit_code == 1);

  // float backend: inputs are rationalized and the report records the pair used
  std::string floats = dir.file("floats.json", R"({
    "p": [0.3333333333333333, 0.6666666666666667], "q": [0.5, 0.5],
    "p_prime": [0.5, 0.5], "q_prime": [0.5, 0.5],
    "mode": "approximate", "epsilon": 0.1, "backend": "float"})");
  RunResult fres = run_cli("relmaj " + floats);
  REQUIRE(fres.exit_code == 0);
  Json frep = Json::parse(fres.output);
  CHECK(frep["rationalized"] == true);
  CHECK(frep["rationalization"]["p"][0] == "1/3");
}

TEST_CASE("catalyze/verify: certificate round trip across processes") {
  TempDir dir;
  std::string inst = dir.file("inst.json", kWorkedExact);
  std::string cert_path = dir.join("cert.json");
  RunResult found = run_cli("catalyze " + inst + " --out " + cert_path);
  REQUIRE(found.exit_code == 0);
  Json rep = Json::parse(found.output);
  CHECK(rep["found"] == true);
  CHECK(rep["verify"]["pass"] == true);

  RunResult verified = run_cli("verify " + cert_path);
  CHECK(verified.exit_code == 0);
  Json vrep = Json::parse(verified.output);
  CHECK(vrep["pass"] == true);
  CHECK(vrep["converse_audit"]["pass"] == true);

  // tamper one channel entry: the tool reports the failing check and exits 1
  std::ifstream in(cert_path);
  Json cert = Json::parse(in);
  cert["channel"]["entries"][0][0] = 0.123456;
  std::string tampered = dir.file("tampered.json", cert.dump());
  RunResult bad = run_cli("verify " + tampered);
  CHECK(bad.exit_code == 1);
  Json brep = Json::parse(bad.output);
  CHECK(brep["pass"] == false);
  CHECK(brep.contains("first_failing_check"));
}

TEST_CASE("catalyze: identity instance verifies end to end") {
  TempDir dir;
  std::string inst = dir.file("ident.json", R"({
    "p": ["2/3","1/3"], "q": ["1/2","1/2"],
    "p_prime": ["2/3","1/3"], "q_prime": ["1/2","1/2"],
    "gamma": 0.25, "epsilon": 0.1, "mode": "approximate"})");
  std::string cert_path = dir.join("cert.json");
  REQUIRE(run_cli("catalyze " + inst + " --out " + cert_path).exit_code == 0);
  CHECK(run_cli("verify " + cert_path).exit_code == 0);
}

TEST_CASE("catalyze: exit codes for condition-false and starvation") {
  TempDir dir;
  CHECK(run_cli("catalyze " + dir.file("rev.json", kReversedExact)).exit_code == 2);
  // budget 1 admits only the direct probe, which fails on the catalytic instance
  CHECK(run_cli("catalyze " + dir.file("cat.json", kCatalytic) + " --budget 1").exit_code == 1);
  // with budget the same instance resolves
  std::string cert_path = dir.join("cert.json");
  CHECK(run_cli("catalyze " + dir.file("cat2.json", kCatalytic) + " --budget 100 --max-dim 3 --out " +
                cert_path)
            .exit_code == 0);
  CHECK(run_cli("verify " + cert_path).exit_code == 0);
}

TEST_CASE("reports are byte-stable under fixed seed") {
  TempDir dir;
  std::string inst = dir.file("inst.json", kWorkedExact);
  RunResult a = run_cli("catalyze " + inst + " --seed 0");
  RunResult b = run_cli("catalyze " + inst + " --seed 0");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);

  RunResult c = run_cli("check " + inst);
  RunResult d = run_cli("check " + inst);
  CHECK(c.output == d.output);

  // --timing intentionally breaks byte-stability and is off by default
  Json rep = Json::parse(a.output);
  CHECK_FALSE(rep.contains("timing_ms"));
  RunResult timed = run_cli("check " + inst + " --timing");
  CHECK(Json::parse(timed.output).contains("timing_ms"));
}
