#pragma once

#include <string>
#include <vector>

#include "convcert/families.hpp"
#include "convcert/matclass.hpp"

namespace convcert {

// CertifiedConvex: every condition of the applicable rule holds.
// ConditionsViolated: some condition fails; says nothing about convexity,
// the rules are sufficient only.
// NotConvex: issued only for the exponential family under its
// if-and-only-if hypothesis (symmetric nonnegative non-diagonal W).
enum class Verdict { CertifiedConvex, ConditionsViolated, NotConvex };

const char* verdict_name(Verdict v);

// Off-diagonal magnitudes up to this fraction of the largest diagonal
// entry still count as diagonal for the exponential family.
inline constexpr double kDiagonalityRelTol = 1e-12;

struct NamedReport {
  std::string name;
  ClassReport report;
};

struct ScalarWitness {
  std::string name;
  double value = 0.0;
};

struct Certificate {
  Verdict verdict = Verdict::ConditionsViolated;
  DomainDescriptor domain;
  std::string rule;  // label of the rule applied, e.g. "w_log_m_matrix"
  std::vector<NamedReport> reports;
  std::vector<ScalarWitness> scalars;
  std::string note;
};

// Applies the convexity rule matching spec.family. W must be symmetric
// here even though evaluation accepts general W. Throws NotSymmetric,
// and Singular for the log family when W cannot be inverted.
Certificate certify(const FamilySpec& spec, double psd_rel_tol = kPsdRelTol);

// Deterministic plain-text rendering of a certificate: verdict, rule,
// domain, then every condition with its margin.
std::string explain(const Certificate& cert);

}  // namespace convcert
