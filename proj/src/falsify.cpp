#include "convcert/falsify.hpp"

#include <cmath>
#include <random>

#include "convcert/errors.hpp"
#include "convcert/matclass.hpp"

namespace convcert {

namespace {

// mt19937_64 output mapped to [0,1) by hand so streams are identical
// across standard libraries.
double u01(std::mt19937_64& gen) {
  return double(gen() >> 11) * 0x1.0p-53;
}

double log_uniform(std::mt19937_64& gen) {
  const double lo = std::log(kSampleLow);
  const double hi = std::log(kSampleHigh);
  return std::exp(lo + (hi - lo) * u01(gen));
}

std::optional<Counterexample> check_point(const FamilySpec& spec, const Vec& p,
                                          double psd_rel_tol) {
  if (!in_domain(spec, p)) return std::nullopt;
  Mat h = hessian(spec, p);
  if (!h.allFinite()) return std::nullopt;
  EigenDecomposition ed = sym_eigen(h);
  const double lmin = ed.values(0);
  if (lmin >= -psd_rel_tol * std::max(1.0, inf_norm(h))) return std::nullopt;
  Counterexample ce;
  ce.point = p;
  ce.direction = ed.vectors.col(0);
  ce.curvature = ce.direction.dot(h * ce.direction);
  ce.min_eigenvalue = lmin;
  return ce;
}

}  // namespace

const char* construction_name(WitnessConstruction c) {
  switch (c) {
    case WitnessConstruction::Sampled: return "sampled";
    case WitnessConstruction::DirectedM: return "directed_m";
  }
  raise(ErrorCode::InvalidSpec, "unknown construction enumerator");
}

std::optional<Counterexample> sample_falsify(const FamilySpec& spec, int n_samples,
                                             std::uint64_t seed, double psd_rel_tol) {
  validate_spec(spec);
  if (n_samples < 1) raise(ErrorCode::InvalidSpec, "need at least one sample");
  const bool signed_domain = domain_of(spec).kind == DomainKind::AllReals;
  const Eigen::Index n = spec.w.rows();
  std::mt19937_64 gen(seed);
  Vec p(n);
  for (int s = 0; s < n_samples; ++s) {
    for (Eigen::Index c = 0; c < n; ++c) {
      double v = log_uniform(gen);
      if (signed_domain && u01(gen) < 0.5) v = -v;
      p(c) = v;
    }
    if (auto ce = check_point(spec, p, psd_rel_tol)) return ce;
  }
  return std::nullopt;
}

double minor_determinant(const Mat& w, int i, int j, double m) {
  require_square(w);
  require_finite(w, "W");
  const Eigen::Index n = w.rows();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j)
    raise(ErrorCode::InvalidIndex, "need two distinct indices inside the matrix");
  if (!(m >= 1.0))
    raise(ErrorCode::InvalidM, "minor filter needs M >= 1");
  const double lg = std::log(m);
  const double growth = m + 1.0 / m;
  return w(i, i) * (2.0 + 2.0 * lg) * (w(j, j) + 2.0 * w(i, j) * lg) -
         growth * growth * w(i, j) * w(i, j);
}

Counterexample directed_exp_counterexample(const Mat& w, double psd_rel_tol) {
  require_symmetric(w);
  if (!is_nonnegative(w).verdict)
    raise(ErrorCode::InvalidSpec, "directed construction needs entrywise nonnegative W");
  const Eigen::Index n = w.rows();
  const double tol = class_tolerance(w);
  int bi = -1, bj = -1;
  double best = tol;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (w(i, j) > best) {
        best = w(i, j);
        bi = static_cast<int>(i);
        bj = static_cast<int>(j);
      }
  if (bi < 0)
    raise(ErrorCode::NoOffDiagonal, "W is diagonal, the exponential family is convex");

  const FamilySpec spec{Family::WExp, w};
  for (double m = 2.0; m <= kDirectedMCap; m *= 2.0) {
    if (minor_determinant(w, bi, bj, m) >= 0.0) continue;
    Vec p = Vec::Constant(n, kDirectedDelta);
    p(bi) = 2.0 * std::log(m);
    auto ce = check_point(spec, p, psd_rel_tol);
    if (!ce) continue;
    ce->construction = WitnessConstruction::DirectedM;
    ce->i = bi;
    ce->j = bj;
    ce->m = m;
    return *ce;
  }
  raise(ErrorCode::SearchExhausted,
        "no verified witness below the M cap, which should not happen for nonnegative non-diagonal W");
}

}  // namespace convcert
