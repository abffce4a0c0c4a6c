#include "convcert/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace convcert {

double max_abs(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double inf_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

double ipow(double base, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

double symmetry_tolerance(const Mat& a) {
  return kSymRelTol * std::max(1.0, max_abs(a));
}

double psd_tolerance(const Mat& a) {
  return kPsdRelTol * std::max(1.0, inf_norm(a));
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) raise(ErrorCode::NonFinite, std::string(what) + " has a non-finite entry");
}

void require_finite(const Mat& a, const char* what) {
  if (!a.allFinite()) raise(ErrorCode::NonFinite, std::string(what) + " has a non-finite entry");
}

void require_square(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    raise(ErrorCode::DimensionMismatch, "matrix must be square with dimension >= 1");
}

void require_symmetric(const Mat& a) {
  require_finite(a);
  require_square(a);
  const double tol = symmetry_tolerance(a);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol)
        raise(ErrorCode::NotSymmetric, "matrix is not symmetric within tolerance");
}

double min_eigenvalue(const Mat& a) {
  require_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Vec sym_eigenvalues(const Mat& a) {
  require_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EigenDecomposition sym_eigen(const Mat& a) {
  require_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  return {es.eigenvalues(), es.eigenvectors()};
}

bool is_psd(const Mat& a, double rel_tol) {
  if (rel_tol < 0) raise(ErrorCode::InvalidSpec, "PSD tolerance must be nonnegative");
  return min_eigenvalue(a) >= -rel_tol * std::max(1.0, inf_norm(a));
}

Mat inverse(const Mat& a) {
  require_symmetric(a);
  const Eigen::Index n = a.rows();
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const Vec lam = es.eigenvalues();
  const double lo = lam.cwiseAbs().minCoeff();
  const double hi = lam.cwiseAbs().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionEstimate)
    raise(ErrorCode::Singular, "matrix condition estimate exceeds 1e12");
  Mat inv = es.eigenvectors() * lam.cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose();
  // One Newton refinement step on the inverse tightens A*inv toward I.
  inv = inv * (2.0 * Mat::Identity(n, n) - a * inv);
  inv = 0.5 * (inv + inv.transpose()).eval();
  return inv;
}

namespace {

Vec fd_steps(const Vec& p, double h) {
  Vec steps(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    steps[i] = h * std::max(1.0, std::abs(p[i]));
  return steps;
}

double probe(const ScalarFn& f, const DomainFn& inside, const Vec& x) {
  if (inside && !inside(x))
    raise(ErrorCode::DomainViolation, "finite-difference probe left the declared domain");
  return f(x);
}

}  // namespace

Vec finite_diff_gradient(const ScalarFn& f, const Vec& p, double h, const DomainFn& inside) {
  require_finite(p, "point");
  if (!(h > 0)) raise(ErrorCode::InvalidSpec, "finite-difference step must be positive");
  const Vec steps = fd_steps(p, h);
  Vec g(p.size());
  Vec x = p;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double hi = steps[i];
    x[i] = p[i] + hi;
    const double fp = probe(f, inside, x);
    x[i] = p[i] - hi;
    const double fm = probe(f, inside, x);
    x[i] = p[i];
    g[i] = (fp - fm) / (2.0 * hi);
  }
  return g;
}

Mat finite_diff_hessian(const ScalarFn& f, const Vec& p, double h, const DomainFn& inside) {
  require_finite(p, "point");
  if (!(h > 0)) raise(ErrorCode::InvalidSpec, "finite-difference step must be positive");
  const Eigen::Index n = p.size();
  const Vec steps = fd_steps(p, h);
  const double f0 = probe(f, inside, p);
  Mat hess(n, n);
  Vec x = p;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double hi = steps[i];
    x[i] = p[i] + hi;
    const double fp = probe(f, inside, x);
    x[i] = p[i] - hi;
    const double fm = probe(f, inside, x);
    x[i] = p[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double hj = steps[j];
      x[i] = p[i] + hi;
      x[j] = p[j] + hj;
      const double fpp = probe(f, inside, x);
      x[j] = p[j] - hj;
      const double fpm = probe(f, inside, x);
      x[i] = p[i] - hi;
      const double fmm = probe(f, inside, x);
      x[j] = p[j] + hj;
      const double fmp = probe(f, inside, x);
      x[i] = p[i];
      x[j] = p[j];
      const double mixed = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
      hess(i, j) = mixed;
      hess(j, i) = mixed;
    }
  }
  return 0.5 * (hess + hess.transpose()).eval();
}

}  // namespace convcert
