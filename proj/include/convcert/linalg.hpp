#pragma once

#include <Eigen/Dense>

#include <functional>

#include "convcert/errors.hpp"

namespace convcert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Tolerances are relative to the matrix scale so verdicts are invariant
// under f -> c*f.
inline constexpr double kSymRelTol = 1e-12;
inline constexpr double kPsdRelTol = 1e-8;
inline constexpr double kMaxConditionEstimate = 1e12;
inline constexpr double kDefaultFdStep = 1e-5;

double max_abs(const Mat& a);
double inf_norm(const Mat& a);

// Integer power by repeated multiplication; ipow(x, 0) == 1 for every x.
double ipow(double base, int e);

// kSymRelTol * max(1, max|a_ij|)
double symmetry_tolerance(const Mat& a);
// kPsdRelTol * max(1, ||a||_inf); the default slack used by PSD verdicts
double psd_tolerance(const Mat& a);

void require_finite(const Vec& v, const char* what = "vector");
void require_finite(const Mat& a, const char* what = "matrix");
void require_square(const Mat& a);
void require_symmetric(const Mat& a);

struct EigenDecomposition {
  Vec values;   // ascending
  Mat vectors;  // column r pairs with values[r]
};

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Mat& a);
/// All eigenvalues of a symmetric matrix, ascending.
Vec sym_eigenvalues(const Mat& a);
EigenDecomposition sym_eigen(const Mat& a);

/// True iff min_eigenvalue(a) >= -rel_tol * max(1, ||a||_inf).
bool is_psd(const Mat& a, double rel_tol = kPsdRelTol);

/// Inverse of a symmetric matrix. Throws Singular when the spectral
/// condition estimate exceeds kMaxConditionEstimate.
Mat inverse(const Mat& a);

using ScalarFn = std::function<double(const Vec&)>;
using DomainFn = std::function<bool(const Vec&)>;

// Central differences with per-coordinate step h * max(1, |p_i|). When a
// domain predicate is supplied every probe point must satisfy it;
// otherwise DomainViolation is raised.
Vec finite_diff_gradient(const ScalarFn& f, const Vec& p,
                         double h = kDefaultFdStep,
                         const DomainFn& inside = {});
Mat finite_diff_hessian(const ScalarFn& f, const Vec& p,
                        double h = kDefaultFdStep,
                        const DomainFn& inside = {});

}  // namespace convcert
