#pragma once

#include <cstdint>
#include <optional>

#include "convcert/families.hpp"

namespace convcert {

enum class WitnessConstruction { Sampled, DirectedM };

const char* construction_name(WitnessConstruction c);

// Sampling magnitudes per coordinate, log-uniform over [kSampleLow, kSampleHigh].
inline constexpr double kSampleLow = 1e-3;
inline constexpr double kSampleHigh = 1e3;
// Directed construction: growth cap for M and interior perturbation delta.
inline constexpr double kDirectedMCap = 1e9;
inline constexpr double kDirectedDelta = 1e-6;

// A verifiable negative-curvature witness. Everything is recomputable from
// the point and the FamilySpec alone: curvature == direction' H direction
// with H the Hessian at point, and curvature < -psd_tolerance(H).
struct Counterexample {
  Vec point;
  Vec direction;  // unit norm
  double curvature = 0.0;
  double min_eigenvalue = 0.0;
  WitnessConstruction construction = WitnessConstruction::Sampled;
  // DirectedM parameters; untouched for sampled witnesses.
  int i = -1;
  int j = -1;
  double m = 0.0;
};

// Draws n_samples interior candidates (log-uniform magnitudes,
// sign-symmetric when the domain is all of R^n, candidates outside the
// domain or with non-finite Hessians are discarded) and returns the first
// with Hessian min eigenvalue below -psd_rel_tol * max(1, ||H||_inf).
// Deterministic for a fixed seed.
std::optional<Counterexample> sample_falsify(const FamilySpec& spec, int n_samples,
                                             std::uint64_t seed,
                                             double psd_rel_tol = kPsdRelTol);

// The 2x2 minor filter behind the directed construction:
//   W_ii (2 + 2 log M) (W_jj + 2 W_ij log M) - (M + 1/M)^2 W_ij^2
double minor_determinant(const Mat& w, int i, int j, double m);

// For symmetric nonnegative W with a genuinely non-zero off-diagonal pair,
// grows M until the minor above goes negative, then verifies the full
// exponential-family Hessian at p = 2 log(M) e_i + delta elsewhere.
// Throws NoOffDiagonal when W is diagonal, SearchExhausted past the M cap.
Counterexample directed_exp_counterexample(const Mat& w,
                                           double psd_rel_tol = kPsdRelTol);

}  // namespace convcert
