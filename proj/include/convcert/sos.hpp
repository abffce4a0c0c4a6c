#pragma once

#include <vector>

#include "convcert/families.hpp"

namespace convcert {

// c * (sum_l form_l y_l p_l^{k-1})^2
struct SquareTerm {
  double coefficient = 0.0;
  Vec form;
};

// c * y_i^2 * p_i^{k-2} * p_j^k; nonnegative on the orthant, and
// everywhere when k is even.
struct DiagTerm {
  int i = 0;
  int j = 0;
  double coefficient = 0.0;
};

struct SosWitness {
  int k = 2;
  bool orthant_only = false;  // odd k: the diagonal monomials need p > 0
  std::vector<SquareTerm> square_terms;
  std::vector<DiagTerm> diag_terms;
};

// Explicit sum-of-squares decomposition of y' H(p) y for the power family:
// eigen-factor the diagonally rescaled matrix into square terms, then add
// one monomial square per positive off-diagonal coupling. Throws
// WrongFamily for other families, NoWitness when W has negative entries
// or the rescaled matrix is not PSD.
SosWitness build_witness(const FamilySpec& spec, double psd_rel_tol = kPsdRelTol);

// Evaluates the witness at (p, y); every term is nonnegative on the
// witness's validity domain.
double witness_sum(const SosWitness& w, const Vec& p, const Vec& y);

// |witness_sum - y' H y| / max(1, |y' H y|); at most about 1e-10 for a
// witness built from the same spec.
double verify_witness(const SosWitness& w, const FamilySpec& spec, const Vec& p,
                      const Vec& y);

}  // namespace convcert
