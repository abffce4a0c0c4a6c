#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "convcert/families.hpp"
#include "convcert/optimize.hpp"

namespace convcert {

using Json = nlohmann::json;

// A parsed problem file. `echo` is the canonical self-contained form of
// the input: W inlined even when the file referenced a CSV, defaults
// filled in, keys sorted on serialization. Reports embed it so any run
// can be reproduced from its own report.
struct Problem {
  FamilySpec spec;
  std::optional<Vec> point;  // eval / grad / hess
  std::optional<Vec> p0;     // minimize
  std::string constraint;    // "simplex", "orthant", or empty
  SolveOptions options;
  std::uint64_t seed = 0;
  int samples = 2000;
  std::optional<double> tol;  // PSD tolerance override
  Json echo;
};

// Reads and validates a problem file. Unknown fields are rejected.
// Throws ParseError for malformed input, DimensionMismatch when vector
// lengths disagree with W.
Problem load_problem(const std::string& path);
// Same, from already-parsed JSON; base_dir resolves CSV references.
Problem problem_from_json(const Json& j, const std::string& base_dir);

// Comma-separated rows, no header.
Mat load_csv_matrix(const std::string& path);

// FNV-1a 64-bit content hash, 16 hex characters.
std::string digest_hex(const std::string& bytes);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json mat_to_json(const Mat& a);
Mat mat_from_json(const Json& j);

}  // namespace convcert
