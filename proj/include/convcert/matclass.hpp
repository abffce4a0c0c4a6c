#pragma once

#include <string>
#include <vector>

#include "convcert/linalg.hpp"

namespace convcert {

inline constexpr double kClassRelTol = 1e-8;

// kClassRelTol * max(1, max|w_ij|); default slack for the entrywise and
// row-sum predicates below.
double class_tolerance(const Mat& w);

// One checked inequality. `margin` is the signed slack of the inequality;
// anything below -tol counts as violated.
struct ConditionRecord {
  int row;  // -1 for whole-matrix conditions
  std::string condition;
  double margin;
  bool satisfied;
};

struct ClassReport {
  bool verdict = true;
  std::vector<ConditionRecord> conditions;

  std::vector<ConditionRecord> violations() const;
  void add(int row, std::string condition, double margin, double tol);
  // Satisfied only for margin > 0; used for strict positivity.
  void add_strict(int row, std::string condition, double margin);
  void merge(const ClassReport& other);
};

// Row i of w split into its diagonal entry and the off-diagonal rest,
// in original column order with column i skipped.
struct RowDecomposition {
  double u;
  Vec v;
};
RowDecomposition row_decomposition(const Mat& w, int i);

// Entrywise w_ij >= 0. A negative tol argument selects class_tolerance(w);
// same convention for every predicate below.
ClassReport is_nonnegative(const Mat& w, double tol = -1.0);

// Off-diagonal entries nonpositive.
ClassReport is_z_pattern(const Mat& w, double tol = -1.0);

// Per row: w_ii - sum_{j != i} |w_ij| >= 0, margins reported per row.
ClassReport is_diagonally_dominant(const Mat& w, double tol = -1.0);

// Z-pattern, diagonally dominant, strictly positive diagonal, and PSD.
// Row records carry the off-diagonal sign and dominance margins.
ClassReport is_dd_pd_m_matrix(const Mat& w, double psd_rel_tol = kPsdRelTol);

// Entrywise nonnegativity of inverse(w), with slack relative to the
// inverse's own scale.
ClassReport inverse_nonnegativity_check(const Mat& w);

// (k^2 + k(k-1)) / k^2, the diagonal scaling for the even-power families.
double lambda_k(int k);

// Copy of w with the diagonal scaled by lambda_k(k).
Mat build_w_tilde(const Mat& w, int k);

// Copy of w with the diagonal set to zero.
Mat build_w_zero(const Mat& w);

// Nonnegative entries and per row: w_ii - (1/3) sum_{j != i} w_ij >= 0.
ClassReport cubic_row_condition(const Mat& w, double tol = -1.0);

}  // namespace convcert
