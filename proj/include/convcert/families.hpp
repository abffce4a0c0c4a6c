#pragma once

#include "convcert/linalg.hpp"

namespace convcert {

// The five structured families. Each is a bilinear-style form in p and an
// elementwise transform of p (or of Wp), with W a square weight matrix.
enum class Family {
  WEntropy,   // p' W log(p)
  LogWp,      // p' log(Wp)
  CubicPosy,  // p' W p^2
  PowerPosy,  // (p^k)' W p^k
  WExp,       // p' W exp(p)
};

const char* family_tag(Family family);
Family family_from_tag(const std::string& tag);

enum class DomainKind {
  PositiveOrthant,  // every p_i > margin
  AllReals,         // no constraint beyond finiteness
  WpPositive,       // every (Wp)_i > margin
};

const char* domain_kind_name(DomainKind kind);

inline constexpr double kDomainMargin = 1e-12;

struct DomainDescriptor {
  DomainKind kind = DomainKind::PositiveOrthant;
  double margin = kDomainMargin;
};

struct FamilySpec {
  Family family = Family::WEntropy;
  Mat w;
  int k = 2;  // PowerPosy exponent; ignored by the other families
};

// Checks W is square with finite entries and, for PowerPosy, k >= 2.
// Throws InvalidSpec or InvalidK. Evaluation entry points call this.
void validate_spec(const FamilySpec& spec);

DomainDescriptor domain_of(const FamilySpec& spec);
bool in_domain(const FamilySpec& spec, const Vec& p);

// Direct summation of the defining form. Throws DomainViolation when p (or
// Wp, for LogWp) is not strictly inside the domain, DimensionMismatch when
// p does not match W.
double evaluate(const FamilySpec& spec, const Vec& p);

// Closed-form first and second derivatives. W may be non-symmetric; the
// general forms are used, and the Hessian is exactly symmetric by
// construction.
Vec gradient(const FamilySpec& spec, const Vec& p);
Mat hessian(const FamilySpec& spec, const Vec& p);

}  // namespace convcert
