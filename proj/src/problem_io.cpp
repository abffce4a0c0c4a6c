#include "convcert/problem_io.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "convcert/errors.hpp"

namespace convcert {

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ParseError, "cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void reject_unknown_fields(const Json& j, const std::set<std::string>& allowed,
                           const char* where) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      raise(ErrorCode::ParseError,
            std::string("unknown field \"") + item.key() + "\" in " + where);
}

double number_at(const Json& j, const char* what) {
  if (!j.is_number())
    raise(ErrorCode::ParseError, std::string(what) + " must be a number");
  return j.get<double>();
}

int int_at(const Json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    raise(ErrorCode::ParseError, std::string(what) + " must be an integer");
  return j.get<int>();
}

double parse_csv_cell(const std::string& cell, const std::string& path) {
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    raise(ErrorCode::ParseError, "bad number \"" + cell + "\" in " + path);
  }
  while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
  if (used != cell.size())
    raise(ErrorCode::ParseError, "bad number \"" + cell + "\" in " + path);
  return value;
}

void parse_options(const Json& j, Problem& problem) {
  if (!j.is_object())
    raise(ErrorCode::ParseError, "options must be an object");
  reject_unknown_fields(j,
                        {"max_iters", "grad_tol", "step_shrink", "armijo_c",
                         "boundary_margin", "linear_term", "samples", "tol"},
                        "options");
  SolveOptions& o = problem.options;
  if (j.contains("max_iters")) o.max_iters = int_at(j["max_iters"], "max_iters");
  if (j.contains("grad_tol")) o.grad_tol = number_at(j["grad_tol"], "grad_tol");
  if (j.contains("step_shrink")) o.step_shrink = number_at(j["step_shrink"], "step_shrink");
  if (j.contains("armijo_c")) o.armijo_c = number_at(j["armijo_c"], "armijo_c");
  if (j.contains("boundary_margin"))
    o.boundary_margin = number_at(j["boundary_margin"], "boundary_margin");
  if (j.contains("linear_term")) o.linear_term = vec_from_json(j["linear_term"]);
  if (j.contains("samples")) {
    problem.samples = int_at(j["samples"], "samples");
    if (problem.samples < 1) raise(ErrorCode::ParseError, "samples must be >= 1");
  }
  if (j.contains("tol")) {
    problem.tol = number_at(j["tol"], "tol");
    if (!(*problem.tol > 0.0)) raise(ErrorCode::ParseError, "tol must be positive");
  }
}

}  // namespace

std::string digest_hex(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    raise(ErrorCode::ParseError, "vector must be a non-empty array of numbers");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_at(j[i], "vector entry");
  return v;
}

Json mat_to_json(const Mat& a) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    out.push_back(row);
  }
  return out;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    raise(ErrorCode::ParseError, "matrix must be a non-empty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].empty())
      raise(ErrorCode::ParseError, "matrix rows must be non-empty arrays");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols)
      raise(ErrorCode::ParseError, "matrix rows have unequal lengths");
  }
  Mat a(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number_at(j[r][c], "matrix entry");
  return a;
}

Mat load_csv_matrix(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(parse_csv_cell(cell, path));
    if (!rows.empty() && row.size() != rows.front().size())
      raise(ErrorCode::ParseError, "rows have unequal lengths in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(ErrorCode::ParseError, "no rows in " + path);
  Mat a(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return a;
}

Problem problem_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) raise(ErrorCode::ParseError, "problem must be a JSON object");
  reject_unknown_fields(
      j, {"family", "k", "W", "point", "p0", "options", "seed", "constraint"},
      "problem");
  if (!j.contains("family") || !j["family"].is_string())
    raise(ErrorCode::ParseError, "problem needs a \"family\" string");
  if (!j.contains("W")) raise(ErrorCode::ParseError, "problem needs a \"W\" matrix");

  Problem problem;
  problem.spec.family = family_from_tag(j["family"].get<std::string>());
  if (j.contains("k")) problem.spec.k = int_at(j["k"], "k");

  const Json& w = j["W"];
  if (w.is_string()) {
    std::filesystem::path csv(w.get<std::string>());
    if (csv.is_relative() && !base_dir.empty()) csv = std::filesystem::path(base_dir) / csv;
    problem.spec.w = load_csv_matrix(csv.string());
  } else {
    problem.spec.w = mat_from_json(w);
  }

  if (j.contains("point")) problem.point = vec_from_json(j["point"]);
  if (j.contains("p0")) problem.p0 = vec_from_json(j["p0"]);
  if (j.contains("constraint")) {
    if (!j["constraint"].is_string())
      raise(ErrorCode::ParseError, "constraint must be a string");
    problem.constraint = j["constraint"].get<std::string>();
    if (problem.constraint != "simplex" && problem.constraint != "orthant")
      raise(ErrorCode::ParseError, "constraint must be \"simplex\" or \"orthant\"");
  }
  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      raise(ErrorCode::ParseError, "seed must be a nonnegative integer");
    problem.seed = s.get<std::uint64_t>();
  }
  if (j.contains("options")) parse_options(j["options"], problem);

  validate_spec(problem.spec);
  validate_options(problem.options);
  const Eigen::Index n = problem.spec.w.rows();
  auto check_len = [n](const std::optional<Vec>& v, const char* what) {
    if (v && v->size() != n)
      raise(ErrorCode::DimensionMismatch,
            std::string(what) + " length does not match W");
  };
  check_len(problem.point, "point");
  check_len(problem.p0, "p0");
  check_len(problem.options.linear_term, "linear_term");

  // Canonical self-contained echo: resolved matrix, defaults filled in.
  Json echo;
  echo["family"] = family_tag(problem.spec.family);
  if (problem.spec.family == Family::PowerPosy) echo["k"] = problem.spec.k;
  echo["W"] = mat_to_json(problem.spec.w);
  if (problem.point) echo["point"] = vec_to_json(*problem.point);
  if (problem.p0) echo["p0"] = vec_to_json(*problem.p0);
  if (!problem.constraint.empty()) echo["constraint"] = problem.constraint;
  echo["seed"] = problem.seed;
  Json opts;
  opts["max_iters"] = problem.options.max_iters;
  opts["grad_tol"] = problem.options.grad_tol;
  opts["step_shrink"] = problem.options.step_shrink;
  opts["armijo_c"] = problem.options.armijo_c;
  opts["boundary_margin"] = problem.options.boundary_margin;
  if (problem.options.linear_term)
    opts["linear_term"] = vec_to_json(*problem.options.linear_term);
  opts["samples"] = problem.samples;
  if (problem.tol) opts["tol"] = *problem.tol;
  echo["options"] = opts;
  problem.echo = echo;
  return problem;
}

Problem load_problem(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    raise(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j, std::filesystem::path(path).parent_path().string());
}

}  // namespace convcert
