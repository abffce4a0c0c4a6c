#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "convcert/problem_io.hpp"
#include "testutil.hpp"

using namespace convcert;
using namespace testutil;

namespace {

// scratch directory cleaned up with the process
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("convcert_io_" + std::to_string(::getpid()));
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

Json base_problem() {
  Json j;
  j["family"] = "w_entropy";
  j["W"] = Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 1.0})});
  return j;
}

}  // namespace

TEST_SUITE("problem_io") {

TEST_CASE("digest is a stable content hash") {
  CHECK(digest_hex("") == "cbf29ce484222325");
  CHECK(digest_hex("a") == "af63dc4c8601ec8c");
  CHECK(digest_hex("abc") == digest_hex("abc"));
  CHECK(digest_hex("abc") != digest_hex("abd"));
  CHECK(digest_hex("x").size() == 16);
}

TEST_CASE("vector and matrix json round trips") {
  Vec v(3);
  v << 1.5, -2.0, 0.25;
  CHECK((vec_from_json(vec_to_json(v)) - v).cwiseAbs().maxCoeff() == 0.0);

  Mat a(2, 3);
  a << 1, 2, 3, 4, 5, 6;
  CHECK((mat_from_json(mat_to_json(a)) - a).cwiseAbs().maxCoeff() == 0.0);

  CHECK(thrown_code([] { vec_from_json(Json::array()); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { vec_from_json(Json{{"a", 1}}); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] {
          mat_from_json(Json::array({Json::array({1.0, 2.0}), Json::array({3.0})}));
        }) == ErrorCode::ParseError);
}

TEST_CASE("csv matrices") {
  TempDir dir;
  const auto good = dir.write("w.csv", "1.0, 2.0\n3.0,4.5\n");
  Mat a = load_csv_matrix(good);
  REQUIRE(a.rows() == 2);
  REQUIRE(a.cols() == 2);
  CHECK(a(0, 1) == 2.0);
  CHECK(a(1, 1) == 4.5);

  // carriage returns and trailing blank lines are tolerated
  const auto crlf = dir.write("crlf.csv", "1,0\r\n0,1\r\n\n");
  CHECK((load_csv_matrix(crlf) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  const auto ragged = dir.write("ragged.csv", "1,2\n3\n");
  CHECK(thrown_code([&] { load_csv_matrix(ragged); }) == ErrorCode::ParseError);
  const auto junk = dir.write("junk.csv", "1,two\n3,4\n");
  CHECK(thrown_code([&] { load_csv_matrix(junk); }) == ErrorCode::ParseError);
  const auto empty = dir.write("empty.csv", "\n");
  CHECK(thrown_code([&] { load_csv_matrix(empty); }) == ErrorCode::ParseError);
  CHECK(thrown_code([&] { load_csv_matrix((dir.path / "missing.csv").string()); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("minimal problem parses with defaults") {
  Problem prob = problem_from_json(base_problem(), "");
  CHECK(prob.spec.family == Family::WEntropy);
  CHECK(prob.spec.w.rows() == 2);
  CHECK_FALSE(prob.point.has_value());
  CHECK_FALSE(prob.p0.has_value());
  CHECK(prob.constraint.empty());
  CHECK(prob.seed == 0);
  CHECK(prob.samples == 2000);
  CHECK_FALSE(prob.tol.has_value());
  CHECK(prob.options.max_iters == 200);
}

TEST_CASE("full problem fields land where they should") {
  Json j = base_problem();
  j["point"] = Json::array({1.0, 2.0});
  j["p0"] = Json::array({0.25, 0.75});
  j["constraint"] = "simplex";
  j["seed"] = 17;
  j["options"] = Json{{"max_iters", 50},
                      {"grad_tol", 1e-8},
                      {"samples", 100},
                      {"tol", 1e-7},
                      {"linear_term", Json::array({-1.0, -1.0})}};
  Problem prob = problem_from_json(j, "");
  CHECK(prob.point->size() == 2);
  CHECK((*prob.p0)(1) == 0.75);
  CHECK(prob.constraint == "simplex");
  CHECK(prob.seed == 17);
  CHECK(prob.samples == 100);
  CHECK(*prob.tol == 1e-7);
  CHECK(prob.options.max_iters == 50);
  CHECK(prob.options.grad_tol == 1e-8);
  REQUIRE(prob.options.linear_term.has_value());
  CHECK((*prob.options.linear_term)(0) == -1.0);
}

TEST_CASE("unknown fields are rejected") {
  Json j = base_problem();
  j["werd"] = 1;
  CHECK(thrown_code([&] { problem_from_json(j, ""); }) == ErrorCode::ParseError);

  Json k = base_problem();
  k["options"] = Json{{"max_its", 3}};
  CHECK(thrown_code([&] { problem_from_json(k, ""); }) == ErrorCode::ParseError);
}

TEST_CASE("malformed problems") {
  CHECK(thrown_code([] { problem_from_json(Json::array(), ""); }) ==
        ErrorCode::ParseError);

  Json no_family = base_problem();
  no_family.erase("family");
  CHECK(thrown_code([&] { problem_from_json(no_family, ""); }) == ErrorCode::ParseError);

  Json bad_family = base_problem();
  bad_family["family"] = "entropy_w";
  CHECK(thrown_code([&] { problem_from_json(bad_family, ""); }) ==
        ErrorCode::InvalidSpec);

  Json no_w = base_problem();
  no_w.erase("W");
  CHECK(thrown_code([&] { problem_from_json(no_w, ""); }) == ErrorCode::ParseError);

  Json bad_constraint = base_problem();
  bad_constraint["constraint"] = "ball";
  CHECK(thrown_code([&] { problem_from_json(bad_constraint, ""); }) ==
        ErrorCode::ParseError);

  Json negative_seed = base_problem();
  negative_seed["seed"] = -4;
  CHECK(thrown_code([&] { problem_from_json(negative_seed, ""); }) ==
        ErrorCode::ParseError);

  Json bad_samples = base_problem();
  bad_samples["options"] = Json{{"samples", 0}};
  CHECK(thrown_code([&] { problem_from_json(bad_samples, ""); }) ==
        ErrorCode::ParseError);

  Json bad_k = base_problem();
  bad_k["family"] = "power_posy";
  bad_k["k"] = 1;
  CHECK(thrown_code([&] { problem_from_json(bad_k, ""); }) == ErrorCode::InvalidK);
}

TEST_CASE("vector lengths must match W") {
  Json j = base_problem();
  j["point"] = Json::array({1.0, 2.0, 3.0});
  CHECK(thrown_code([&] { problem_from_json(j, ""); }) == ErrorCode::DimensionMismatch);

  Json k = base_problem();
  k["options"] = Json{{"linear_term", Json::array({1.0})}};
  CHECK(thrown_code([&] { problem_from_json(k, ""); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("csv references resolve against the problem directory") {
  TempDir dir;
  dir.write("w.csv", "2,0\n0,2\n");
  const auto file = dir.write("prob.json",
                              "{\"family\": \"w_entropy\", \"W\": \"w.csv\"}");
  Problem prob = load_problem(file);
  CHECK(prob.spec.w(0, 0) == 2.0);
  // the echo inlines the matrix so the report stands on its own
  CHECK(prob.echo.at("W").is_array());

  CHECK(thrown_code([&] { load_problem((dir.path / "absent.json").string()); }) ==
        ErrorCode::ParseError);
  const auto broken = dir.write("broken.json", "{\"family\": ");
  CHECK(thrown_code([&] { load_problem(broken); }) == ErrorCode::ParseError);
}

TEST_CASE("echo is canonical and idempotent") {
  Json j = base_problem();
  j["seed"] = 12;
  j["point"] = Json::array({1.0, 2.0});
  Problem first = problem_from_json(j, "");

  Problem second = problem_from_json(first.echo, "");
  CHECK(second.echo == first.echo);
  CHECK(second.spec.family == first.spec.family);
  CHECK((second.spec.w - first.spec.w).cwiseAbs().maxCoeff() == 0.0);
  CHECK((*second.point - *first.point).cwiseAbs().maxCoeff() == 0.0);
  CHECK(second.seed == first.seed);

  // defaults are spelled out in the echo
  CHECK(first.echo.at("options").at("max_iters") == 200);
  CHECK(first.echo.at("options").at("samples") == 2000);
  CHECK(first.echo.at("seed") == 12);
  // k only appears for the family that uses it
  CHECK_FALSE(first.echo.contains("k"));

  Json pw = base_problem();
  pw["family"] = "power_posy";
  pw["k"] = 3;
  Problem third = problem_from_json(pw, "");
  CHECK(third.echo.at("k") == 3);
  CHECK(problem_from_json(third.echo, "").echo == third.echo);
}

}  // TEST_SUITE
