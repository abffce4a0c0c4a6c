#pragma once

#include <optional>
#include <vector>

#include "convcert/families.hpp"

namespace convcert {

struct SolveOptions {
  int max_iters = 200;
  double grad_tol = 1e-9;
  double step_shrink = 0.5;    // in (0,1)
  double armijo_c = 1e-4;      // in (0,1)
  double boundary_margin = 1e-10;
  // Optional affine companion term: the objective becomes f(p) + c'p.
  // Preserves convexity, lets bounded-below problems be posed on the
  // open orthant.
  std::optional<Vec> linear_term;
};

void validate_options(const SolveOptions& opts);

enum class Termination { GradientTol, MaxIters, LinesearchFail };

const char* termination_name(Termination t);

struct TracePoint {
  double value = 0.0;
  double grad_norm = 0.0;  // projected norm on the simplex
};

struct NewtonResult {
  Vec minimizer;
  double value = 0.0;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
  std::vector<TracePoint> trace;  // entry 0 is the starting point
  // Set when certify() did not return a convexity certificate for the
  // spec; the solve still runs, since failed sufficient conditions do
  // not imply non-convexity.
  bool warned_uncertified = false;
};

// Damped Newton with Armijo backtracking over the open positive orthant.
// Iterates stay strictly interior by boundary_margin; candidate points
// outside the domain or with non-finite objective are rejected inside the
// line search rather than evaluated.
NewtonResult minimize_orthant(const FamilySpec& spec, const Vec& p0,
                              const SolveOptions& opts = {});

// Equality-constrained Newton on the probability simplex: the step solves
// the bordered system [H 1; 1' 0], so iterates keep sum(p) = 1, and
// convergence is measured by the projected gradient norm.
NewtonResult minimize_simplex(const FamilySpec& spec, const Vec& p0,
                              const SolveOptions& opts = {});

}  // namespace convcert
