#include "convcert/optimize.hpp"

#include <cmath>

#include "convcert/certify.hpp"
#include "convcert/errors.hpp"

namespace convcert {

namespace {

constexpr double kSimplexSumTol = 1e-12;
constexpr double kStepFloor = 1e-14;

bool uncertified(const FamilySpec& spec) {
  try {
    return certify(spec).verdict != Verdict::CertifiedConvex;
  } catch (const Error&) {
    return true;
  }
}

struct Objective {
  const FamilySpec& spec;
  const SolveOptions& opts;

  double value(const Vec& p) const {
    double v = evaluate(spec, p);
    if (opts.linear_term) v += opts.linear_term->dot(p);
    return v;
  }
  Vec grad(const Vec& p) const {
    Vec g = gradient(spec, p);
    if (opts.linear_term) g += *opts.linear_term;
    return g;
  }
  bool feasible(const Vec& p) const {
    if (!(p.array() > opts.boundary_margin).all()) return false;
    return in_domain(spec, p);
  }
};

Vec simplex_project(const Vec& g) {
  return g - Vec::Constant(g.size(), g.mean());
}

Vec newton_step(const Mat& hreg, const Vec& g, bool simplex) {
  const Eigen::Index n = g.size();
  if (!simplex) {
    Vec step = -hreg.ldlt().solve(g);
    return step;
  }
  // Bordered system so the step stays in the sum(p)-constant hyperplane.
  Mat kkt = Mat::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = hreg;
  kkt.col(n).head(n).setOnes();
  kkt.row(n).head(n).setOnes();
  Vec rhs = Vec::Zero(n + 1);
  rhs.head(n) = -g;
  Vec sol = kkt.fullPivLu().solve(rhs);
  return sol.head(n);
}

NewtonResult solve(const FamilySpec& spec, Vec p, const SolveOptions& opts,
                   bool simplex) {
  const Objective obj{spec, opts};
  NewtonResult res;
  res.warned_uncertified = uncertified(spec);

  double fval = obj.value(p);
  if (!std::isfinite(fval))
    raise(ErrorCode::NonFinite, "objective is not finite at the starting point");
  Vec g = obj.grad(p);
  auto measured_norm = [simplex](const Vec& grad) {
    return simplex ? simplex_project(grad).norm() : grad.norm();
  };
  res.trace.push_back({fval, measured_norm(g)});
  res.termination = Termination::MaxIters;
  res.iterations = 0;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    if (measured_norm(g) <= opts.grad_tol) {
      res.termination = Termination::GradientTol;
      break;
    }
    Mat h = hessian(spec, p);
    const double mu = std::max(0.0, -min_eigenvalue(h) + psd_tolerance(h));
    Mat hreg = h + mu * Mat::Identity(h.rows(), h.cols());
    Vec step = newton_step(hreg, g, simplex);
    double slope = step.allFinite() ? g.dot(step) : 0.0;
    if (!(slope < 0.0)) {
      // Regularized solve failed to produce descent; fall back to steepest
      // descent (projected on the simplex).
      step = simplex ? Vec(-simplex_project(g)) : Vec(-g);
      slope = g.dot(step);
      if (!(slope < 0.0)) {
        res.termination = Termination::GradientTol;
        break;
      }
    }

    bool accepted = false;
    for (double t = 1.0; t >= kStepFloor; t *= opts.step_shrink) {
      Vec cand = p + t * step;
      if (simplex) {
        const double s = cand.sum();
        if (!(s > 0.0)) continue;
        cand /= s;
      }
      if (!obj.feasible(cand)) continue;
      const double fc = obj.value(cand);
      if (!std::isfinite(fc)) continue;
      if (fc <= fval + opts.armijo_c * t * slope) {
        p = cand;
        fval = fc;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.termination = Termination::LinesearchFail;
      break;
    }
    res.iterations = iter;
    g = obj.grad(p);
    res.trace.push_back({fval, measured_norm(g)});
  }

  res.minimizer = p;
  res.value = fval;
  return res;
}

void check_start(const FamilySpec& spec, const Vec& p0, const SolveOptions& opts) {
  validate_spec(spec);
  validate_options(opts);
  require_finite(p0, "starting point");
  if (p0.size() != spec.w.rows())
    raise(ErrorCode::DimensionMismatch, "starting point and W dimensions differ");
  if (opts.linear_term) {
    require_finite(*opts.linear_term, "linear term");
    if (opts.linear_term->size() != spec.w.rows())
      raise(ErrorCode::DimensionMismatch, "linear term and W dimensions differ");
  }
  if (!(p0.array() > opts.boundary_margin).all())
    raise(ErrorCode::DomainViolation, "starting point must be interior by the boundary margin");
  if (!in_domain(spec, p0))
    raise(ErrorCode::DomainViolation, "starting point is outside the family domain");
}

}  // namespace

void validate_options(const SolveOptions& opts) {
  if (opts.max_iters < 1) raise(ErrorCode::InvalidSpec, "max_iters must be >= 1");
  if (!(opts.grad_tol > 0.0)) raise(ErrorCode::InvalidSpec, "grad_tol must be positive");
  if (!(opts.step_shrink > 0.0 && opts.step_shrink < 1.0))
    raise(ErrorCode::InvalidSpec, "step_shrink must be in (0,1)");
  if (!(opts.armijo_c > 0.0 && opts.armijo_c < 1.0))
    raise(ErrorCode::InvalidSpec, "armijo_c must be in (0,1)");
  if (!(opts.boundary_margin >= 0.0))
    raise(ErrorCode::InvalidSpec, "boundary_margin must be nonnegative");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::GradientTol: return "gradient_tol";
    case Termination::MaxIters: return "max_iters";
    case Termination::LinesearchFail: return "linesearch_fail";
  }
  raise(ErrorCode::InvalidSpec, "unknown termination enumerator");
}

NewtonResult minimize_orthant(const FamilySpec& spec, const Vec& p0,
                              const SolveOptions& opts) {
  check_start(spec, p0, opts);
  return solve(spec, p0, opts, false);
}

NewtonResult minimize_simplex(const FamilySpec& spec, const Vec& p0,
                              const SolveOptions& opts) {
  check_start(spec, p0, opts);
  if (std::abs(p0.sum() - 1.0) > kSimplexSumTol)
    raise(ErrorCode::DomainViolation, "starting point must sum to 1");
  return solve(spec, p0, opts, true);
}

}  // namespace convcert
