#include "convcert/matclass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace convcert {

namespace {

std::string fmt(const char* pattern, long long a, long long b = 0) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

double resolve_tol(const Mat& w, double tol) {
  if (tol < 0) return class_tolerance(w);
  return tol;
}

}  // namespace

double class_tolerance(const Mat& w) {
  return kClassRelTol * std::max(1.0, max_abs(w));
}

std::vector<ConditionRecord> ClassReport::violations() const {
  std::vector<ConditionRecord> out;
  for (const auto& c : conditions)
    if (!c.satisfied) out.push_back(c);
  return out;
}

void ClassReport::add(int row, std::string condition, double margin, double tol) {
  const bool ok = margin >= -tol;
  conditions.push_back({row, std::move(condition), margin, ok});
  if (!ok) verdict = false;
}

void ClassReport::add_strict(int row, std::string condition, double margin) {
  const bool ok = margin > 0.0;
  conditions.push_back({row, std::move(condition), margin, ok});
  if (!ok) verdict = false;
}

void ClassReport::merge(const ClassReport& other) {
  conditions.insert(conditions.end(), other.conditions.begin(), other.conditions.end());
  if (!other.verdict) verdict = false;
}

RowDecomposition row_decomposition(const Mat& w, int i) {
  require_finite(w);
  require_square(w);
  if (i < 0 || i >= w.rows()) raise(ErrorCode::InvalidIndex, "row index out of range");
  RowDecomposition d;
  d.u = w(i, i);
  d.v.resize(w.cols() - 1);
  Eigen::Index out = 0;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    if (j != i) d.v[out++] = w(i, j);
  return d;
}

ClassReport is_nonnegative(const Mat& w, double tol) {
  require_finite(w);
  require_square(w);
  tol = resolve_tol(w, tol);
  ClassReport report;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    double row_min = w(i, 0);
    bool row_ok = true;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      row_min = std::min(row_min, w(i, j));
      if (w(i, j) < -tol) {
        report.add(static_cast<int>(i), fmt("W[%lld][%lld] >= 0", i, j), w(i, j), tol);
        row_ok = false;
      }
    }
    if (row_ok)
      report.add(static_cast<int>(i), fmt("row %lld entries >= 0", i), row_min, tol);
  }
  return report;
}

ClassReport is_z_pattern(const Mat& w, double tol) {
  require_finite(w);
  require_square(w);
  tol = resolve_tol(w, tol);
  ClassReport report;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    // slack of w_ij <= 0 is -w_ij
    double row_min_slack = std::numeric_limits<double>::infinity();
    bool row_ok = true;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (j == i) continue;
      row_min_slack = std::min(row_min_slack, -w(i, j));
      if (-w(i, j) < -tol) {
        report.add(static_cast<int>(i), fmt("W[%lld][%lld] <= 0", i, j), -w(i, j), tol);
        row_ok = false;
      }
    }
    if (row_ok && w.cols() > 1)
      report.add(static_cast<int>(i), fmt("row %lld off-diagonals <= 0", i), row_min_slack, tol);
  }
  if (w.cols() == 1) report.add(0, "no off-diagonals", 0.0, tol);
  return report;
}

ClassReport is_diagonally_dominant(const Mat& w, double tol) {
  require_finite(w);
  require_square(w);
  tol = resolve_tol(w, tol);
  ClassReport report;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      if (j != i) off += std::abs(w(i, j));
    report.add(static_cast<int>(i), fmt("row %lld dominance", i), w(i, i) - off, tol);
  }
  return report;
}

ClassReport is_dd_pd_m_matrix(const Mat& w, double psd_rel_tol) {
  require_symmetric(w);
  const double tol = class_tolerance(w);
  ClassReport report;
  report.merge(is_z_pattern(w, tol));
  report.merge(is_diagonally_dominant(w, tol));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    report.add_strict(static_cast<int>(i), fmt("W[%lld][%lld] > 0", i, i), w(i, i));
  const double lam = min_eigenvalue(w);
  report.add(-1, "min eigenvalue >= 0", lam, psd_rel_tol * std::max(1.0, inf_norm(w)));
  return report;
}

ClassReport inverse_nonnegativity_check(const Mat& w) {
  const Mat inv = inverse(w);
  const double tol = 1e-10 * std::max(1.0, inf_norm(inv));
  return is_nonnegative(inv, tol);
}

double lambda_k(int k) {
  if (k < 1) raise(ErrorCode::InvalidK, "power k must be >= 1");
  const double kk = static_cast<double>(k);
  return (kk * kk + kk * (kk - 1.0)) / (kk * kk);
}

Mat build_w_tilde(const Mat& w, int k) {
  require_finite(w);
  require_square(w);
  const double lam = lambda_k(k);
  Mat out = w;
  out.diagonal() *= lam;
  return out;
}

Mat build_w_zero(const Mat& w) {
  require_finite(w);
  require_square(w);
  Mat out = w;
  out.diagonal().setZero();
  return out;
}

ClassReport cubic_row_condition(const Mat& w, double tol) {
  require_symmetric(w);
  tol = resolve_tol(w, tol);
  ClassReport report = is_nonnegative(w, tol);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      if (j != i) off += w(i, j);
    report.add(static_cast<int>(i), fmt("row %lld diagonal >= third of off-diagonal sum", i),
               w(i, i) - off / 3.0, tol);
  }
  return report;
}

}  // namespace convcert
