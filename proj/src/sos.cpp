#include "convcert/sos.hpp"

#include <cmath>

#include "convcert/errors.hpp"
#include "convcert/matclass.hpp"

namespace convcert {

SosWitness build_witness(const FamilySpec& spec, double psd_rel_tol) {
  if (spec.family != Family::PowerPosy)
    raise(ErrorCode::WrongFamily, "witness construction applies to the power family only");
  validate_spec(spec);
  require_symmetric(spec.w);
  if (!is_nonnegative(spec.w).verdict)
    raise(ErrorCode::NoWitness, "W has negative entries, the monomial terms would not be squares");

  const Mat wt = build_w_tilde(spec.w, spec.k);
  EigenDecomposition ed = sym_eigen(wt);
  if (ed.values(0) < -psd_rel_tol * std::max(1.0, inf_norm(wt)))
    raise(ErrorCode::NoWitness, "diagonally rescaled matrix is not positive semidefinite");

  SosWitness witness;
  witness.k = spec.k;
  witness.orthant_only = spec.k % 2 == 1;
  const double k = spec.k;
  // y' H y = 2k^2 z' Wt z + 2k(k-1) sum_{i != j} W_ij y_i^2 p_i^{k-2} p_j^k
  // with z_l = y_l p_l^{k-1}; eigenvalues within PSD tolerance of zero are
  // dropped rather than kept as (numerically) negative squares.
  for (Eigen::Index r = 0; r < ed.values.size(); ++r) {
    if (ed.values(r) <= 0.0) continue;
    witness.square_terms.push_back({2.0 * k * k * ed.values(r), ed.vectors.col(r)});
  }
  for (Eigen::Index i = 0; i < spec.w.rows(); ++i)
    for (Eigen::Index j = 0; j < spec.w.cols(); ++j) {
      if (i == j || !(spec.w(i, j) > 0.0)) continue;
      witness.diag_terms.push_back({static_cast<int>(i), static_cast<int>(j),
                                    2.0 * k * (k - 1.0) * spec.w(i, j)});
    }
  return witness;
}

double witness_sum(const SosWitness& w, const Vec& p, const Vec& y) {
  require_finite(p, "point");
  require_finite(y, "direction");
  if (p.size() != y.size())
    raise(ErrorCode::DimensionMismatch, "point and direction lengths differ");
  double total = 0.0;
  for (const SquareTerm& t : w.square_terms) {
    if (t.form.size() != p.size())
      raise(ErrorCode::DimensionMismatch, "witness was built for a different dimension");
    double s = 0.0;
    for (Eigen::Index l = 0; l < p.size(); ++l)
      s += t.form(l) * y(l) * ipow(p(l), w.k - 1);
    total += t.coefficient * s * s;
  }
  for (const DiagTerm& t : w.diag_terms) {
    if (t.i >= p.size() || t.j >= p.size())
      raise(ErrorCode::DimensionMismatch, "witness was built for a different dimension");
    total += t.coefficient * y(t.i) * y(t.i) * ipow(p(t.i), w.k - 2) * ipow(p(t.j), w.k);
  }
  return total;
}

double verify_witness(const SosWitness& w, const FamilySpec& spec, const Vec& p,
                      const Vec& y) {
  Mat h = hessian(spec, p);
  const double quad = y.dot(h * y);
  const double sum = witness_sum(w, p, y);
  return std::abs(sum - quad) / std::max(1.0, std::abs(quad));
}

}  // namespace convcert
