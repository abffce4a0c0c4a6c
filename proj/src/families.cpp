#include "convcert/families.hpp"

#include <cmath>

#include "convcert/errors.hpp"

namespace convcert {

namespace {

Vec elementwise_pow(const Vec& p, int e) {
  Vec out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) out(i) = ipow(p(i), e);
  return out;
}

void require_dimension(const FamilySpec& spec, const Vec& p) {
  if (p.size() != spec.w.rows()) {
    raise(ErrorCode::DimensionMismatch,
          "point has " + std::to_string(p.size()) + " coordinates but W is " +
              std::to_string(spec.w.rows()) + "x" + std::to_string(spec.w.cols()));
  }
}

void require_in_domain(const FamilySpec& spec, const Vec& p) {
  require_finite(p, "point");
  if (!in_domain(spec, p)) {
    raise(ErrorCode::DomainViolation,
          std::string("point is outside the ") +
              domain_kind_name(domain_of(spec).kind) + " domain");
  }
}

}  // namespace

const char* family_tag(Family family) {
  switch (family) {
    case Family::WEntropy: return "w_entropy";
    case Family::LogWp: return "log_wp";
    case Family::CubicPosy: return "cubic_posy";
    case Family::PowerPosy: return "power_posy";
    case Family::WExp: return "w_exp";
  }
  raise(ErrorCode::InvalidSpec, "unknown family enumerator");
}

Family family_from_tag(const std::string& tag) {
  for (Family family : {Family::WEntropy, Family::LogWp, Family::CubicPosy,
                        Family::PowerPosy, Family::WExp}) {
    if (tag == family_tag(family)) return family;
  }
  raise(ErrorCode::InvalidSpec, "unknown family tag \"" + tag + "\"");
}

const char* domain_kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::PositiveOrthant: return "positive_orthant";
    case DomainKind::AllReals: return "all_reals";
    case DomainKind::WpPositive: return "wp_positive";
  }
  raise(ErrorCode::InvalidSpec, "unknown domain enumerator");
}

void validate_spec(const FamilySpec& spec) {
  require_square(spec.w);
  require_finite(spec.w, "W");
  if (spec.family == Family::PowerPosy && spec.k < 2) {
    raise(ErrorCode::InvalidK,
          "power family needs integer exponent k >= 2, got " + std::to_string(spec.k));
  }
}

DomainDescriptor domain_of(const FamilySpec& spec) {
  validate_spec(spec);
  DomainDescriptor d;
  switch (spec.family) {
    case Family::LogWp:
      d.kind = DomainKind::WpPositive;
      break;
    case Family::PowerPosy:
      d.kind = spec.k % 2 == 0 ? DomainKind::AllReals : DomainKind::PositiveOrthant;
      break;
    default:
      d.kind = DomainKind::PositiveOrthant;
      break;
  }
  return d;
}

bool in_domain(const FamilySpec& spec, const Vec& p) {
  require_dimension(spec, p);
  if (!p.allFinite()) return false;
  DomainDescriptor d = domain_of(spec);
  switch (d.kind) {
    case DomainKind::AllReals:
      return true;
    case DomainKind::PositiveOrthant:
      return (p.array() > d.margin).all();
    case DomainKind::WpPositive: {
      // only Wp feeds the logs, so p itself may carry negative coordinates
      Vec q = spec.w * p;
      return (q.array() > d.margin).all();
    }
  }
  return false;
}

double evaluate(const FamilySpec& spec, const Vec& p) {
  require_dimension(spec, p);
  require_in_domain(spec, p);
  const Mat& w = spec.w;
  const Eigen::Index n = p.size();
  double sum = 0.0;
  switch (spec.family) {
    case Family::WEntropy:
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          sum += p(i) * w(i, j) * std::log(p(j));
      return sum;
    case Family::LogWp:
      for (Eigen::Index i = 0; i < n; ++i) {
        double qi = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) qi += w(i, j) * p(j);
        sum += p(i) * std::log(qi);
      }
      return sum;
    case Family::CubicPosy:
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          sum += p(i) * w(i, j) * p(j) * p(j);
      return sum;
    case Family::PowerPosy:
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          sum += ipow(p(i), spec.k) * w(i, j) * ipow(p(j), spec.k);
      return sum;
    case Family::WExp:
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          sum += p(i) * w(i, j) * std::exp(p(j));
      return sum;
  }
  raise(ErrorCode::InvalidSpec, "unknown family enumerator");
}

Vec gradient(const FamilySpec& spec, const Vec& p) {
  require_dimension(spec, p);
  require_in_domain(spec, p);
  const Mat& w = spec.w;
  switch (spec.family) {
    case Family::WEntropy: {
      // grad = W log(p) + D_{1/p} W' p
      Vec logp = p.array().log().matrix();
      Vec wtp = w.transpose() * p;
      return w * logp + (wtp.array() / p.array()).matrix();
    }
    case Family::LogWp: {
      // q = Wp; grad = log(q) + W' D_{1/q} p
      Vec q = w * p;
      Vec logq = q.array().log().matrix();
      return logq + w.transpose() * (p.array() / q.array()).matrix();
    }
    case Family::CubicPosy: {
      // grad = W p^2 + 2 D_p W' p
      Vec p2 = p.array().square().matrix();
      Vec wtp = w.transpose() * p;
      return w * p2 + 2.0 * (p.array() * wtp.array()).matrix();
    }
    case Family::PowerPosy: {
      // grad = k D_{p^{k-1}} (W + W') p^k
      Vec pk = elementwise_pow(p, spec.k);
      Vec pk1 = elementwise_pow(p, spec.k - 1);
      Vec s = w * pk + w.transpose() * pk;
      return double(spec.k) * (pk1.array() * s.array()).matrix();
    }
    case Family::WExp: {
      // grad = W exp(p) + D_{exp(p)} W' p
      Vec ep = p.array().exp().matrix();
      Vec wtp = w.transpose() * p;
      return w * ep + (ep.array() * wtp.array()).matrix();
    }
  }
  raise(ErrorCode::InvalidSpec, "unknown family enumerator");
}

Mat hessian(const FamilySpec& spec, const Vec& p) {
  require_dimension(spec, p);
  require_in_domain(spec, p);
  const Mat& w = spec.w;
  const Eigen::Index n = p.size();
  Mat h(n, n);
  switch (spec.family) {
    case Family::WEntropy: {
      // H = W D_{1/p} + D_{1/p} W' - D_{1/p} D_{W'p} D_{1/p}
      Vec inv = p.array().inverse().matrix();
      Vec wtp = w.transpose() * p;
      h = w * inv.asDiagonal();
      h += inv.asDiagonal() * w.transpose();
      h.diagonal() -= (wtp.array() * inv.array().square()).matrix();
      break;
    }
    case Family::LogWp: {
      // H = D_{1/q} W + W' D_{1/q} - W' D_{p/q^2} W, q = Wp
      Vec q = w * p;
      Vec invq = q.array().inverse().matrix();
      h = invq.asDiagonal() * w;
      h += w.transpose() * invq.asDiagonal();
      Vec mid = (p.array() * invq.array().square()).matrix();
      h -= w.transpose() * mid.asDiagonal() * w;
      break;
    }
    case Family::CubicPosy: {
      // H = 2 (W D_p + D_p W' + D_{W'p})
      Vec wtp = w.transpose() * p;
      h = w * p.asDiagonal();
      h += p.asDiagonal() * w.transpose();
      h.diagonal() += wtp;
      h *= 2.0;
      break;
    }
    case Family::PowerPosy: {
      // H = k^2 (W + W') o (p^{k-1} p^{k-1}') + k(k-1) D_{p^{k-2}} D_{(W+W')p^k}
      const double k = spec.k;
      Vec pk = elementwise_pow(p, spec.k);
      Vec pk1 = elementwise_pow(p, spec.k - 1);
      Vec pk2 = elementwise_pow(p, spec.k - 2);
      Vec s = w * pk + w.transpose() * pk;
      h = (k * k) * (w + w.transpose()).cwiseProduct(pk1 * pk1.transpose());
      h.diagonal() += (k * (k - 1.0)) * (pk2.array() * s.array()).matrix();
      break;
    }
    case Family::WExp: {
      // H = W D_{exp(p)} + D_{exp(p)} W' + D_{W'p} D_{exp(p)}
      Vec ep = p.array().exp().matrix();
      Vec wtp = w.transpose() * p;
      h = w * ep.asDiagonal();
      h += ep.asDiagonal() * w.transpose();
      h.diagonal() += (wtp.array() * ep.array()).matrix();
      break;
    }
  }
  // the closed forms above are symmetric up to rounding; make it exact
  h = 0.5 * (h + h.transpose()).eval();
  return h;
}

}  // namespace convcert
