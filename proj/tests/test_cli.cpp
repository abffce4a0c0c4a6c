#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using Json = nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// spawn the installed binary the same way a user would
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CONVCERT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n = 0;
  while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = out;
  return r;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("convcert_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& name, const std::string& body) const {
    const auto file = path / name;
    std::ofstream out(file);
    out << body;
    return file.string();
  }
};

Json parse_report(const RunResult& r) {
  Json report = Json::parse(r.out);
  REQUIRE(report.contains("command"));
  REQUIRE(report.contains("input"));
  REQUIRE(report.contains("input_digest"));
  REQUIRE(report.contains("result"));
  REQUIRE(report.contains("version"));
  REQUIRE(report.contains("elapsed_seconds"));
  return report;
}

std::string strip_elapsed(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.find("elapsed_seconds") != std::string::npos) continue;
    kept += line;
    kept += '\n';
  }
  return kept;
}

const char* kIdentityEntropy =
    R"({"family": "w_entropy", "W": [[1, 0], [0, 1]]})";
const char* kSquareCoupling =
    R"({"family": "power_posy", "k": 2, "W": [[0, 0.5], [0.5, 0]]})";
const char* kOnesExp = R"({"family": "w_exp", "W": [[1, 1], [1, 1]]})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("certify reports and exit codes per verdict") {
  TempDir dir;
  const auto certified = dir.write("ok.json", kIdentityEntropy);
  RunResult ok = run_cli("certify " + certified);
  CHECK(ok.code == 0);
  Json report = parse_report(ok);
  CHECK(report["command"] == "certify");
  CHECK(report["result"]["verdict"] == "certified_convex");
  CHECK(report["result"]["rule"] == "w_log_m_matrix");

  const auto violated = dir.write("violated.json", kSquareCoupling);
  RunResult vio = run_cli("certify " + violated);
  CHECK(vio.code == 2);
  CHECK(parse_report(vio)["result"]["verdict"] == "conditions_violated");

  const auto nonconvex = dir.write("nonconvex.json", kOnesExp);
  RunResult non = run_cli("certify " + nonconvex);
  CHECK(non.code == 3);
  Json nr = parse_report(non);
  CHECK(nr["result"]["verdict"] == "not_convex");
  CHECK(nr["result"]["rule"] == "exp_bilinear_diagonality");
}

TEST_CASE("eval grad hess agree with the hand values") {
  TempDir dir;
  const auto entropy = dir.write("e.json", kIdentityEntropy);
  RunResult ev = run_cli("eval " + entropy);
  CHECK(ev.code == 64);  // no point given

  const auto with_point = dir.write(
      "ep.json", R"({"family": "w_entropy", "W": [[1, 0], [0, 1]], "point": [1, 1]})");
  RunResult val = run_cli("eval " + with_point);
  CHECK(val.code == 0);
  CHECK(parse_report(val)["result"]["value"] == doctest::Approx(0.0));

  dir.write("w.csv", "0,0.5\n0.5,0\n");
  const std::string csv = (dir.path / "w.csv").string();
  RunResult hess =
      run_cli("hess --csv " + csv + " --family power_posy --k 2 --point 1,1");
  CHECK(hess.code == 0);
  Json h = parse_report(hess)["result"]["hessian"];
  CHECK(h[0][0] == doctest::Approx(2.0));
  CHECK(h[0][1] == doctest::Approx(4.0));
  CHECK(h[1][0] == doctest::Approx(4.0));
  CHECK(h[1][1] == doctest::Approx(2.0));

  RunResult grad =
      run_cli("grad --csv " + csv + " --family power_posy --k 2 --point 1,2");
  CHECK(grad.code == 0);
  Json g = parse_report(grad)["result"]["gradient"];
  CHECK(g[0] == doctest::Approx(8.0));
  CHECK(g[1] == doctest::Approx(4.0));
}

TEST_CASE("falsify finds witnesses and reports constructions") {
  TempDir dir;
  const auto coupled = dir.write("p.json", kSquareCoupling);
  RunResult found = run_cli("falsify " + coupled + " --seed 42 --samples 200");
  CHECK(found.code == 3);
  Json fr = parse_report(found);
  CHECK(fr["result"]["found"] == true);
  CHECK(fr["result"]["counterexample"]["construction"] == "sampled");
  CHECK(fr["result"]["counterexample"]["curvature"].get<double>() < 0.0);

  const auto exp_ones = dir.write("x.json", kOnesExp);
  RunResult directed = run_cli("falsify " + exp_ones);
  CHECK(directed.code == 3);
  Json dr = parse_report(directed);
  CHECK(dr["result"]["counterexample"]["construction"] == "directed_m");
  CHECK(dr["result"]["counterexample"].contains("M"));

  const auto certified = dir.write("c.json", kIdentityEntropy);
  RunResult none = run_cli("falsify " + certified + " --samples 300 --seed 1");
  CHECK(none.code == 0);
  Json nr = parse_report(none);
  CHECK(nr["result"]["found"] == false);
  CHECK(nr["result"]["samples"] == 300);
}

TEST_CASE("reports are byte deterministic apart from timing") {
  TempDir dir;
  const auto coupled = dir.write("p.json", kSquareCoupling);
  RunResult a = run_cli("falsify " + coupled + " --seed 42");
  RunResult b = run_cli("falsify " + coupled + " --seed 42");
  CHECK(a.code == b.code);
  CHECK(strip_elapsed(a.out) == strip_elapsed(b.out));
  CHECK(strip_elapsed(a.out) != strip_elapsed(run_cli("falsify " + coupled +
                                                      " --seed 43")
                                                  .out));
}

TEST_CASE("sos witness and refusal") {
  TempDir dir;
  const auto ok = dir.write(
      "s.json", R"({"family": "power_posy", "k": 2, "W": [[1, 0], [0, 1]]})");
  RunResult good = run_cli("sos " + ok);
  CHECK(good.code == 0);
  Json gr = parse_report(good);
  CHECK(gr["result"]["witness"]["square_terms"].size() == 2);
  CHECK(gr["result"]["max_residual"].get<double>() <= 1e-10);
  CHECK(gr["result"]["verification_points"] == 100);

  const auto bad = dir.write("b.json", kSquareCoupling);
  RunResult refused = run_cli("sos " + bad);
  CHECK(refused.code == 2);
  Json rr = parse_report(refused);
  CHECK(rr["result"]["witness"].is_null());
  CHECK(rr["result"].contains("message"));
}

TEST_CASE("minimize on the simplex and the exhausted line search") {
  TempDir dir;
  const auto entropy = dir.write(
      "m.json",
      R"({"family": "w_entropy", "W": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
          "p0": [0.5, 0.3, 0.2], "constraint": "simplex"})");
  RunResult solved = run_cli("minimize " + entropy);
  CHECK(solved.code == 0);
  Json sr = parse_report(solved);
  CHECK(sr["result"]["termination"] == "gradient_tol");
  CHECK(sr["result"]["minimizer"][0].get<double>() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  CHECK(sr["result"]["warned_uncertified"] == false);

  const auto hopeless = dir.write(
      "h.json",
      R"({"family": "w_exp", "W": [[1]], "p0": [1],
          "constraint": "orthant", "options": {"linear_term": [-1e100]}})");
  RunResult failed = run_cli("minimize " + hopeless);
  CHECK(failed.code == 4);
  CHECK(parse_report(failed)["result"]["termination"] == "linesearch_fail");
}

TEST_CASE("input error exit codes") {
  TempDir dir;
  const auto malformed = dir.write("bad.json", "{\"family\": ");
  CHECK(run_cli("certify " + malformed).code == 64);

  const auto unknown = dir.write(
      "unknown.json", R"({"family": "w_entropy", "W": [[1]], "surprise": 1})");
  CHECK(run_cli("certify " + unknown).code == 64);

  const auto mismatch = dir.write(
      "mismatch.json",
      R"({"family": "w_entropy", "W": [[1, 0], [0, 1]], "point": [1]})");
  CHECK(run_cli("eval " + mismatch).code == 65);

  const auto boundary = dir.write(
      "boundary.json",
      R"({"family": "w_entropy", "W": [[1, 0], [0, 1]], "point": [0, 1]})");
  CHECK(run_cli("eval " + boundary).code == 66);

  // --csv and a problem file are mutually exclusive
  const auto fine = dir.write("fine.json", kIdentityEntropy);
  dir.write("w.csv", "1,0\n0,1\n");
  CHECK(run_cli("certify " + fine + " --csv " + (dir.path / "w.csv").string()).code ==
        64);
  CHECK(run_cli("certify --csv " + (dir.path / "w.csv").string()).code == 64);
}

TEST_CASE("output flag writes the report to a file") {
  TempDir dir;
  const auto problem = dir.write("p.json", kIdentityEntropy);
  const auto report_path = (dir.path / "report.json").string();
  RunResult r = run_cli("certify " + problem + " --output " + report_path);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(report_path);
  REQUIRE(in.good());
  Json report = Json::parse(in);
  CHECK(report["result"]["verdict"] == "certified_convex");
  CHECK(report["version"].is_string());
}

TEST_CASE("digest tracks the canonical input") {
  TempDir dir;
  // the same problem through a file and through csv flags digests equal
  dir.write("w.csv", "1,0\n0,1\n");
  const auto inline_form = dir.write(
      "inline.json", R"({"family": "w_entropy", "W": [[1.0, 0.0], [0.0, 1.0]]})");
  Json a = parse_report(run_cli("certify " + inline_form));
  Json b = parse_report(run_cli("certify --csv " + (dir.path / "w.csv").string() +
                                " --family w_entropy"));
  CHECK(a["input_digest"] == b["input_digest"]);
  CHECK(a["input"] == b["input"]);
}

}  // TEST_SUITE
