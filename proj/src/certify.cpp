#include "convcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "convcert/errors.hpp"

namespace convcert {

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[160];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

Certificate certify_w_entropy(const FamilySpec& spec, double psd_rel_tol) {
  Certificate cert;
  cert.rule = "w_log_m_matrix";
  ClassReport rep = is_dd_pd_m_matrix(spec.w, psd_rel_tol);
  cert.verdict = rep.verdict ? Verdict::CertifiedConvex : Verdict::ConditionsViolated;
  cert.reports.push_back({"m_matrix_conditions", std::move(rep)});
  return cert;
}

Certificate certify_log_wp(const FamilySpec& spec, double psd_rel_tol) {
  Certificate cert;
  cert.rule = "log_wp_inverse_m_matrix";
  Mat inv = inverse(spec.w);
  ClassReport rep = is_dd_pd_m_matrix(inv, psd_rel_tol);
  cert.verdict = rep.verdict ? Verdict::CertifiedConvex : Verdict::ConditionsViolated;
  cert.reports.push_back({"inverse_m_matrix_conditions", std::move(rep)});
  return cert;
}

Certificate certify_cubic(const FamilySpec& spec) {
  Certificate cert;
  cert.rule = "cubic_row_dominance";
  ClassReport rep = cubic_row_condition(spec.w);
  cert.verdict = rep.verdict ? Verdict::CertifiedConvex : Verdict::ConditionsViolated;
  cert.reports.push_back({"row_dominance_conditions", std::move(rep)});
  return cert;
}

Certificate certify_power(const FamilySpec& spec, double psd_rel_tol) {
  Certificate cert;
  cert.rule = "power_scaled_diagonal_psd";
  ClassReport nonneg = is_nonnegative(spec.w);
  Mat wt = build_w_tilde(spec.w, spec.k);
  const double lmin = min_eigenvalue(wt);
  ClassReport psd;
  psd.add(-1, "scaled matrix min eigenvalue >= 0", lmin,
          psd_rel_tol * std::max(1.0, inf_norm(wt)));
  cert.verdict = nonneg.verdict && psd.verdict ? Verdict::CertifiedConvex
                                               : Verdict::ConditionsViolated;
  cert.scalars.push_back({"w_tilde_min_eigenvalue", lmin});
  cert.scalars.push_back({"diagonal_scale", lambda_k(spec.k)});
  cert.reports.push_back({"nonnegative_entries", std::move(nonneg)});
  cert.reports.push_back({"scaled_diagonal_psd", std::move(psd)});
  return cert;
}

Certificate certify_w_exp(const FamilySpec& spec) {
  Certificate cert;
  cert.rule = "exp_bilinear_diagonality";
  const Mat& w = spec.w;
  ClassReport nonneg = is_nonnegative(w);
  if (!nonneg.verdict) {
    // Outside the rule's hypothesis; nothing can be concluded here.
    cert.verdict = Verdict::ConditionsViolated;
    cert.reports.push_back({"nonnegative_entries", std::move(nonneg)});
    cert.note = "W has negative entries, outside the diagonality rule; sampling may still find a counterexample";
    return cert;
  }
  const double tol = kDiagonalityRelTol * std::max(0.0, w.diagonal().maxCoeff());
  double max_off = 0.0;
  ClassReport diag;
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
      const double mag = std::abs(w(i, j));
      max_off = std::max(max_off, mag);
      if (mag > tol)
        diag.add(static_cast<int>(i), fmt("W[%lld][%lld] == 0", static_cast<long long>(i), static_cast<long long>(j)),
                 -mag, tol);
    }
  diag.add(-1, "off-diagonal entries all zero", -max_off, tol);
  const bool diagonal = diag.verdict;
  cert.verdict = diagonal ? Verdict::CertifiedConvex : Verdict::NotConvex;
  cert.reports.push_back({"nonnegative_entries", std::move(nonneg)});
  cert.reports.push_back({"diagonality", std::move(diag)});
  if (!diagonal)
    cert.note = "non-diagonal coupling makes this family non-convex; a concrete witness is available from the falsify routines";
  return cert;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::CertifiedConvex: return "certified_convex";
    case Verdict::ConditionsViolated: return "conditions_violated";
    case Verdict::NotConvex: return "not_convex";
  }
  raise(ErrorCode::InvalidSpec, "unknown verdict enumerator");
}

Certificate certify(const FamilySpec& spec, double psd_rel_tol) {
  validate_spec(spec);
  require_symmetric(spec.w);
  Certificate cert;
  switch (spec.family) {
    case Family::WEntropy: cert = certify_w_entropy(spec, psd_rel_tol); break;
    case Family::LogWp: cert = certify_log_wp(spec, psd_rel_tol); break;
    case Family::CubicPosy: cert = certify_cubic(spec); break;
    case Family::PowerPosy: cert = certify_power(spec, psd_rel_tol); break;
    case Family::WExp: cert = certify_w_exp(spec); break;
  }
  cert.domain = domain_of(spec);
  return cert;
}

std::string explain(const Certificate& cert) {
  std::ostringstream out;
  out << "verdict: " << verdict_name(cert.verdict) << "\n";
  out << "rule: " << cert.rule << "\n";
  out << "domain: " << domain_kind_name(cert.domain.kind)
      << fmt(" (margin %.9g)", cert.domain.margin) << "\n";
  for (const NamedReport& named : cert.reports) {
    out << "report " << named.name << ": "
        << (named.report.verdict ? "pass" : "FAIL") << ", "
        << named.report.conditions.size() << " conditions\n";
    for (const ConditionRecord& c : named.report.conditions) {
      out << "  [" << (c.satisfied ? "ok" : "violated") << "] " << c.condition
          << fmt(" (margin %.9g)", c.margin) << "\n";
    }
  }
  for (const ScalarWitness& s : cert.scalars)
    out << "scalar " << s.name << fmt(" = %.9g", s.value) << "\n";
  if (!cert.note.empty()) out << "note: " << cert.note << "\n";
  return out.str();
}

}  // namespace convcert
