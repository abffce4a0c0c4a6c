#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convcert/certify.hpp"
#include "convcert/errors.hpp"
#include "convcert/falsify.hpp"
#include "convcert/matclass.hpp"
#include "convcert/optimize.hpp"
#include "convcert/problem_io.hpp"
#include "convcert/sos.hpp"
#include "convcert/version.hpp"

namespace {

using namespace convcert;

struct Args {
  std::string problem_path;
  std::string csv_path;
  std::string family;
  int k = 2;
  std::string point;
  std::string p0;
  std::string constraint;
  std::string output;
  std::uint64_t seed = 0;
  int samples = 2000;
  double tol = kPsdRelTol;
};

void add_common_options(CLI::App* sub, Args& args) {
  sub->add_option("problem", args.problem_path, "problem file (JSON)");
  sub->add_option("--csv", args.csv_path, "matrix as CSV, instead of a problem file");
  sub->add_option("--family", args.family,
                  "family tag for --csv mode: w_entropy, log_wp, cubic_posy, power_posy, w_exp");
  sub->add_option("--k", args.k, "power family exponent (default 2)");
  sub->add_option("--point", args.point, "comma-separated point for --csv mode");
  sub->add_option("--p0", args.p0, "comma-separated start for --csv mode");
  sub->add_option("--constraint", args.constraint, "simplex or orthant, for --csv mode");
  sub->add_option("--seed", args.seed, "sampling seed");
  sub->add_option("--samples", args.samples, "falsification sample budget");
  sub->add_option("--tol", args.tol, "relative PSD tolerance override");
  sub->add_option("--output", args.output, "write the report here instead of stdout");
}

Vec parse_vector_arg(const std::string& text) {
  std::vector<double> values;
  std::istringstream cells(text);
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      raise(ErrorCode::ParseError, "bad number \"" + cell + "\" in vector flag");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size())
      raise(ErrorCode::ParseError, "bad number \"" + cell + "\" in vector flag");
    values.push_back(v);
  }
  if (values.empty()) raise(ErrorCode::ParseError, "empty vector flag");
  Vec out(static_cast<Eigen::Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) out(static_cast<Eigen::Index>(i)) = values[i];
  return out;
}

Problem assemble(const CLI::App* sub, const Args& args) {
  const bool have_file = sub->count("problem") > 0;
  const bool have_csv = sub->count("--csv") > 0;
  if (have_file == have_csv)
    raise(ErrorCode::ParseError, "give exactly one of a problem file or --csv");
  Problem problem;
  if (have_file) {
    for (const char* flag : {"--family", "--point", "--p0", "--constraint"})
      if (sub->count(flag) > 0)
        raise(ErrorCode::ParseError, std::string(flag) + " applies to --csv mode only");
    problem = load_problem(args.problem_path);
  } else {
    if (sub->count("--family") == 0)
      raise(ErrorCode::ParseError, "--csv mode needs --family");
    Json j;
    j["family"] = args.family;
    j["k"] = args.k;
    j["W"] = args.csv_path;
    if (sub->count("--point") > 0) j["point"] = vec_to_json(parse_vector_arg(args.point));
    if (sub->count("--p0") > 0) j["p0"] = vec_to_json(parse_vector_arg(args.p0));
    if (sub->count("--constraint") > 0) j["constraint"] = args.constraint;
    problem = problem_from_json(j, "");
  }
  if (sub->count("--seed") > 0) {
    problem.seed = args.seed;
    problem.echo["seed"] = problem.seed;
  }
  if (sub->count("--samples") > 0) {
    if (args.samples < 1) raise(ErrorCode::ParseError, "--samples must be >= 1");
    problem.samples = args.samples;
    problem.echo["options"]["samples"] = problem.samples;
  }
  if (sub->count("--tol") > 0) {
    if (!(args.tol > 0.0)) raise(ErrorCode::ParseError, "--tol must be positive");
    problem.tol = args.tol;
    problem.echo["options"]["tol"] = args.tol;
  }
  return problem;
}

const char* family_formula(Family family) {
  switch (family) {
    case Family::WEntropy: return "p' W log(p)";
    case Family::LogWp: return "p' log(Wp)";
    case Family::CubicPosy: return "p' W p^2";
    case Family::PowerPosy: return "(p^k)' W p^k";
    case Family::WExp: return "p' W exp(p)";
  }
  return "";
}

const char* gradient_formula(Family family) {
  switch (family) {
    case Family::WEntropy: return "W log(p) + D_{1/p} W' p";
    case Family::LogWp: return "log(Wp) + W' D_{1/(Wp)} p";
    case Family::CubicPosy: return "W p^2 + 2 D_p W' p";
    case Family::PowerPosy: return "k D_{p^(k-1)} (W + W') p^k";
    case Family::WExp: return "W exp(p) + D_{exp(p)} W' p";
  }
  return "";
}

const char* hessian_formula(Family family) {
  switch (family) {
    case Family::WEntropy: return "W D_{1/p} + D_{1/p} W' - D_{1/p} D_{W'p} D_{1/p}";
    case Family::LogWp: return "D_{1/q} W + W' D_{1/q} - W' D_{p/q^2} W, q = Wp";
    case Family::CubicPosy: return "2 (W D_p + D_p W' + D_{W'p})";
    case Family::PowerPosy:
      return "k^2 (W + W') o (p^(k-1) p^(k-1)') + k(k-1) D_{p^(k-2)} D_{(W+W')p^k}";
    case Family::WExp: return "W D_{exp(p)} + D_{exp(p)} W' + D_{W'p} D_{exp(p)}";
  }
  return "";
}

const Vec& required_point(const Problem& problem) {
  if (!problem.point) raise(ErrorCode::ParseError, "this command needs a \"point\"");
  return *problem.point;
}

Json certificate_to_json(const Certificate& cert) {
  Json r;
  r["verdict"] = verdict_name(cert.verdict);
  r["rule"] = cert.rule;
  r["domain"] = {{"kind", domain_kind_name(cert.domain.kind)},
                 {"margin", cert.domain.margin}};
  Json reports = Json::array();
  for (const NamedReport& named : cert.reports) {
    Json rep;
    rep["name"] = named.name;
    rep["pass"] = named.report.verdict;
    Json conditions = Json::array();
    for (const ConditionRecord& c : named.report.conditions)
      conditions.push_back({{"row", c.row},
                            {"condition", c.condition},
                            {"margin", c.margin},
                            {"satisfied", c.satisfied}});
    rep["conditions"] = conditions;
    reports.push_back(rep);
  }
  r["reports"] = reports;
  Json scalars = Json::object();
  for (const ScalarWitness& s : cert.scalars) scalars[s.name] = s.value;
  r["scalars"] = scalars;
  if (!cert.note.empty()) r["note"] = cert.note;
  r["explain"] = explain(cert);
  return r;
}

Json counterexample_to_json(const Counterexample& ce) {
  Json c;
  c["point"] = vec_to_json(ce.point);
  c["direction"] = vec_to_json(ce.direction);
  c["curvature"] = ce.curvature;
  c["min_eigenvalue"] = ce.min_eigenvalue;
  c["construction"] = construction_name(ce.construction);
  if (ce.construction == WitnessConstruction::DirectedM) {
    c["i"] = ce.i;
    c["j"] = ce.j;
    c["M"] = ce.m;
  }
  return c;
}

int run_certify(const Problem& problem, double tol, Json& result) {
  Certificate cert = certify(problem.spec, tol);
  result = certificate_to_json(cert);
  switch (cert.verdict) {
    case Verdict::CertifiedConvex: return 0;
    case Verdict::ConditionsViolated: return 2;
    case Verdict::NotConvex: return 3;
  }
  return 2;
}

int run_eval(const Problem& problem, Json& result) {
  result["value"] = evaluate(problem.spec, required_point(problem));
  result["formula"] = family_formula(problem.spec.family);
  return 0;
}

int run_grad(const Problem& problem, Json& result) {
  result["gradient"] = vec_to_json(gradient(problem.spec, required_point(problem)));
  result["formula"] = gradient_formula(problem.spec.family);
  return 0;
}

int run_hess(const Problem& problem, Json& result) {
  result["hessian"] = mat_to_json(hessian(problem.spec, required_point(problem)));
  result["formula"] = hessian_formula(problem.spec.family);
  return 0;
}

int run_falsify(const Problem& problem, double tol, Json& result) {
  const Mat& w = problem.spec.w;
  bool symmetric = true;
  try {
    require_symmetric(w);
  } catch (const Error&) {
    symmetric = false;
  }
  std::optional<Counterexample> ce;
  if (problem.spec.family == Family::WExp && symmetric && is_nonnegative(w).verdict) {
    try {
      ce = directed_exp_counterexample(w, tol);
    } catch (const Error& e) {
      // diagonal W has nothing to falsify; an exhausted search falls back
      // to plain sampling below
      if (e.code() != ErrorCode::NoOffDiagonal && e.code() != ErrorCode::SearchExhausted)
        throw;
    }
  }
  if (!ce) ce = sample_falsify(problem.spec, problem.samples, problem.seed, tol);
  if (ce) {
    result["found"] = true;
    result["counterexample"] = counterexample_to_json(*ce);
    return 3;
  }
  result["found"] = false;
  result["message"] = "none found";
  result["samples"] = problem.samples;
  result["seed"] = problem.seed;
  return 0;
}

int run_sos(const Problem& problem, double tol, Json& result) {
  SosWitness witness;
  try {
    witness = build_witness(problem.spec, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoWitness) throw;
    result["witness"] = nullptr;
    result["message"] = e.what();
    return 2;
  }
  Json w;
  w["k"] = witness.k;
  w["orthant_only"] = witness.orthant_only;
  Json squares = Json::array();
  for (const SquareTerm& t : witness.square_terms)
    squares.push_back({{"coefficient", t.coefficient}, {"form", vec_to_json(t.form)}});
  w["square_terms"] = squares;
  Json diags = Json::array();
  for (const DiagTerm& t : witness.diag_terms)
    diags.push_back({{"i", t.i}, {"j", t.j}, {"coefficient", t.coefficient}});
  w["diag_terms"] = diags;
  result["witness"] = w;

  // spot-check the identity at random points, reported alongside the terms
  const Eigen::Index n = problem.spec.w.rows();
  const bool signed_domain = domain_of(problem.spec).kind == DomainKind::AllReals;
  std::mt19937_64 gen(problem.seed);
  auto u01 = [&gen]() { return double(gen() >> 11) * 0x1.0p-53; };
  const int rounds = 100;
  double max_residual = 0.0;
  Vec p(n), y(n);
  for (int s = 0; s < rounds; ++s) {
    for (Eigen::Index c = 0; c < n; ++c) {
      double mag = std::exp(std::log(1e-2) + std::log(1e4) * u01());
      if (signed_domain && u01() < 0.5) mag = -mag;
      p(c) = mag;
      y(c) = 2.0 * u01() - 1.0;
    }
    max_residual = std::max(max_residual, verify_witness(witness, problem.spec, p, y));
  }
  result["max_residual"] = max_residual;
  result["verification_points"] = rounds;
  return 0;
}

int run_minimize(const Problem& problem, Json& result) {
  if (!problem.p0) raise(ErrorCode::ParseError, "minimize needs a \"p0\"");
  if (problem.constraint.empty())
    raise(ErrorCode::ParseError, "minimize needs a \"constraint\" of simplex or orthant");
  NewtonResult res = problem.constraint == "simplex"
                         ? minimize_simplex(problem.spec, *problem.p0, problem.options)
                         : minimize_orthant(problem.spec, *problem.p0, problem.options);
  result["minimizer"] = vec_to_json(res.minimizer);
  result["value"] = res.value;
  result["iterations"] = res.iterations;
  result["termination"] = termination_name(res.termination);
  result["warned_uncertified"] = res.warned_uncertified;
  Json trace = Json::array();
  for (const TracePoint& t : res.trace)
    trace.push_back({{"value", t.value}, {"grad_norm", t.grad_norm}});
  result["trace"] = trace;
  return res.termination == Termination::LinesearchFail ? 4 : 0;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidK:
      return 64;
    case ErrorCode::DimensionMismatch:
      return 65;
    case ErrorCode::DomainViolation:
      return 66;
    default:
      // remaining library errors signal unusable numeric input
      return 65;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certify, falsify, differentiate, and minimize structured convex families"};
  app.require_subcommand(1);
  Args args;
  CLI::App* cmd_certify = app.add_subcommand("certify", "apply the convexity rules");
  CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate the objective at a point");
  CLI::App* cmd_grad = app.add_subcommand("grad", "analytic gradient at a point");
  CLI::App* cmd_hess = app.add_subcommand("hess", "analytic Hessian at a point");
  CLI::App* cmd_falsify = app.add_subcommand("falsify", "search for negative curvature");
  CLI::App* cmd_sos = app.add_subcommand("sos", "sum-of-squares witness for the power family");
  CLI::App* cmd_minimize = app.add_subcommand("minimize", "Newton descent on simplex or orthant");
  for (CLI::App* sub : {cmd_certify, cmd_eval, cmd_grad, cmd_hess, cmd_falsify,
                        cmd_sos, cmd_minimize})
    add_common_options(sub, args);
  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  const auto start = std::chrono::steady_clock::now();
  try {
    Problem problem = assemble(sub, args);
    const double tol = problem.tol.value_or(kPsdRelTol);
    Json result;
    int code = 0;
    if (sub == cmd_certify) code = run_certify(problem, tol, result);
    else if (sub == cmd_eval) code = run_eval(problem, result);
    else if (sub == cmd_grad) code = run_grad(problem, result);
    else if (sub == cmd_hess) code = run_hess(problem, result);
    else if (sub == cmd_falsify) code = run_falsify(problem, tol, result);
    else if (sub == cmd_sos) code = run_sos(problem, tol, result);
    else code = run_minimize(problem, result);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json report;
    report["command"] = sub->get_name();
    report["input"] = problem.echo;
    report["input_digest"] = digest_hex(problem.echo.dump());
    report["result"] = result;
    report["version"] = kVersion;
    report["elapsed_seconds"] = elapsed;
    const std::string text = report.dump(2) + "\n";
    if (sub->count("--output") > 0) {
      std::ofstream out(args.output, std::ios::binary);
      if (!out) raise(ErrorCode::ParseError, "cannot write \"" + args.output + "\"");
      out << text;
    } else {
      std::cout << text;
    }
    return code;
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
}
