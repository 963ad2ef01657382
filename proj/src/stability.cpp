#include "hus/stability.hpp"

#include <algorithm>
#include <cmath>

namespace hus {

namespace {

double zero_band(const Mat2& m, double tol) {
  return tol * std::max(1.0, mat_inf_norm(m));
}

double sign_or_one(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Distinct same-sign branches of the upper-bound constant. lambda1 > lambda2,
// both clear of zero, lambda1*lambda2 > 0.
KCandidate k31_distinct(const Mat2& m, const RealDistinct& d, double band) {
  const double l1 = d.lambda1;
  const double l2 = d.lambda2;
  const double a = m(0, 0);
  const double ab = std::abs(m(0, 1));
  const double ac = std::abs(m(1, 0));
  const double det = l1 * l2;  // > 0
  const double dl = l1 - l2;
  const bool positive = l1 > 0.0;

  if (a <= l1 + band && a >= l2 - band) {
    KCase label = KCase::T31_i;
    if (std::abs(a - l1) <= band) label = KCase::T31_iv;
    else if (std::abs(a - l2) <= band) label = KCase::T31_v;
    const double v =
        std::max(std::abs(l1 + l2 - a) + ab, std::abs(a) + ac) / det;
    return {label, v};
  }
  if (a < l2) {  // lambda1 > lambda2 > a
    double v;
    if (positive) {
      const double tail = 2.0 * (l2 - a) * std::pow((l1 - a) / (l2 - a), -l2 / dl);
      v = std::max(l1 + l2 + ab - a, a + ac + tail) / det;
    } else {
      const double tail = 2.0 * (l1 - a) * std::pow((l1 - a) / (l2 - a), l2 / dl);
      v = std::max(-l1 - l2 + a + ab + tail, -a + ac) / det;
    }
    return {KCase::T31_ii, v};
  }
  // a > lambda1 > lambda2
  double v;
  if (positive) {
    const double tail = 2.0 * (a - l1) * std::pow((a - l2) / (a - l1), -l2 / dl);
    v = std::max(l1 + l2 + ab - a + tail, a + ac) / det;
  } else {
    const double tail = 2.0 * (a - l2) * std::pow((a - l1) / (a - l2), -l2 / dl);
    v = std::max(-l1 - l2 + a + ab, -a + ac + tail) / det;
  }
  return {KCase::T31_iii, v};
}

KCandidate k31_repeated(const Mat2& m, const RealRepeated& r, double band) {
  const double l = r.lambda;
  const double eta = r.eta;
  const double ab = std::abs(m(0, 1));
  const double ac = std::abs(m(1, 0));
  const double al = std::abs(l);
  const double h = std::abs(eta);
  const double l2 = l * l;
  const KCase label = l > 0.0 ? KCase::T31_rep_pos : KCase::T31_rep_neg;

  double v;
  if (h <= band) {
    v = (al + std::max(ab, ac)) / l2;
  } else if (l > 0.0 && eta > 0.0) {
    v = std::max(l + eta + ab, l + ac + eta * (-1.0 + 2.0 * std::exp(-l / eta))) / l2;
  } else if (l > 0.0) {  // eta < 0
    v = std::max(l + h + ac, l + ab + h * (-1.0 + 2.0 * std::exp(-l / h))) / l2;
  } else if (eta > 0.0) {  // l < 0
    v = std::max(al + eta + ac, al + ab + eta * (-1.0 + 2.0 * std::exp(l / eta))) / l2;
  } else {  // l < 0, eta < 0
    v = std::max(al + h + ab, al + ac + h * (-1.0 + 2.0 * std::exp(l / h))) / l2;
  }
  return {label, v};
}

}  // namespace

const char* to_string(KCase label) {
  switch (label) {
    case KCase::T31_i: return "T31_i";
    case KCase::T31_ii: return "T31_ii";
    case KCase::T31_iii: return "T31_iii";
    case KCase::T31_iv: return "T31_iv";
    case KCase::T31_v: return "T31_v";
    case KCase::T31_rep_pos: return "T31_rep_pos";
    case KCase::T31_rep_neg: return "T31_rep_neg";
    case KCase::T32: return "T32";
    case KCase::T33: return "T33";
  }
  return "?";
}

const char* to_string(BestRule rule) {
  switch (rule) {
    case BestRule::DistinctSameSign_aBetween: return "DistinctSameSign_aBetween";
    case BestRule::RepeatedLambdaEqA: return "RepeatedLambdaEqA";
    case BestRule::BoundsCoincide: return "BoundsCoincide";
  }
  return "?";
}

StabilityVerdict is_hus_stable(const Mat2& m, const EigenClass& ec, double tol) {
  const double band = zero_band(m, tol);
  double re1, re2;
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    re1 = d->lambda1;
    re2 = d->lambda2;
  } else if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    re1 = re2 = r->lambda;
  } else {
    re1 = re2 = std::get<ComplexPair>(ec).alpha;
  }
  const bool marginal = std::abs(re1) <= band || std::abs(re2) <= band;
  return {!marginal, marginal};
}

KCandidate k_theorem31(const Mat2& m, const EigenClass& ec, double tol) {
  const double band = zero_band(m, tol);
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    if (std::abs(d->lambda1) <= band || std::abs(d->lambda2) <= band ||
        d->lambda1 * d->lambda2 < 0.0) {
      throw CaseMismatchError("k_theorem31: needs nonzero same-sign real eigenvalues");
    }
    return k31_distinct(m, *d, band);
  }
  if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    if (std::abs(r->lambda) <= band) {
      throw CaseMismatchError("k_theorem31: repeated eigenvalue is zero");
    }
    return k31_repeated(m, *r, band);
  }
  throw CaseMismatchError("k_theorem31: complex eigenvalues");
}

KCandidate k_theorem32(const Mat2& m, const RealDistinct& ec, double tol) {
  const double band = zero_band(m, tol);
  const double l1 = ec.lambda1;
  const double l2 = ec.lambda2;
  if (std::abs(l1) <= band || std::abs(l2) <= band) {
    throw CaseMismatchError("k_theorem32: zero eigenvalue");
  }
  const double a = m(0, 0);
  const double ab = std::abs(m(0, 1));
  const double ac = std::abs(m(1, 0));
  const double n1 = std::max(std::abs(a - l2) + ab, ac + std::abs(l1 - a));
  const double n2 = std::max(std::abs(l1 - a) + ab, ac + std::abs(a - l2));
  const double v =
      (std::abs(l2) * n1 + std::abs(l1) * n2) / (std::abs(l1 * l2) * (l1 - l2));
  return {KCase::T32, v};
}

KCandidate k_theorem33(const Mat2& m, const ComplexPair& ec, double tol) {
  const double band = zero_band(m, tol);
  if (std::abs(ec.alpha) <= band) {
    throw CaseMismatchError("k_theorem33: zero real part");
  }
  const double reach = std::abs(m(0, 0) - ec.alpha) +
                       std::max(std::abs(m(0, 1)), std::abs(m(1, 0)));
  const double v = std::sqrt(ec.beta * ec.beta + reach * reach) /
                   (std::abs(ec.alpha) * ec.beta);
  return {KCase::T33, v};
}

LowerBound lower_bound(const Mat2& m) {
  const Mat2 inv = inverse2(m);
  const double r0 = std::abs(inv(0, 0)) + std::abs(inv(0, 1));
  const double r1 = std::abs(inv(1, 0)) + std::abs(inv(1, 1));
  const int row = r0 >= r1 ? 0 : 1;
  const Vec2 e{sign_or_one(inv(row, 0)), sign_or_one(inv(row, 1))};
  return {std::max(r0, r1), e};
}

BestConstant best_constant_check(const Mat2& m, const EigenClass& ec, double tol) {
  const double band = zero_band(m, tol);
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    const double a = m(0, 0);
    const bool same_sign = d->lambda1 * d->lambda2 > 0.0 &&
                           std::abs(d->lambda1) > band &&
                           std::abs(d->lambda2) > band;
    if (same_sign && a <= d->lambda1 + band && a >= d->lambda2 - band) {
      return {true, BestRule::DistinctSameSign_aBetween};
    }
    return {false, std::nullopt};
  }
  if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    if (std::abs(r->lambda) > band && std::abs(r->eta) <= band) {
      return {true, BestRule::RepeatedLambdaEqA};
    }
    return {false, std::nullopt};
  }
  return {false, std::nullopt};
}

StabilityReport analyze(const Mat2& m, double tol) {
  StabilityReport rep;
  rep.matrix = m;
  rep.eigen = classify(m, tol);
  const StabilityVerdict verdict = is_hus_stable(m, rep.eigen, tol);
  rep.stable = verdict.stable;
  rep.marginal = verdict.marginal;
  if (!rep.stable) return rep;

  if (const auto* d = std::get_if<RealDistinct>(&rep.eigen)) {
    if (d->lambda1 * d->lambda2 > 0.0) {
      rep.candidates.push_back(k_theorem31(m, rep.eigen, tol));
    }
    rep.candidates.push_back(k_theorem32(m, *d, tol));
  } else if (std::holds_alternative<RealRepeated>(rep.eigen)) {
    rep.candidates.push_back(k_theorem31(m, rep.eigen, tol));
  } else {
    rep.candidates.push_back(
        k_theorem33(m, std::get<ComplexPair>(rep.eigen), tol));
  }

  double kmin = rep.candidates.front().value;
  for (const KCandidate& c : rep.candidates) kmin = std::min(kmin, c.value);
  rep.k_reported = kmin;
  rep.lower_bound = lower_bound(m).bound;

  const BestConstant bc = best_constant_check(m, rep.eigen, tol);
  if (bc.best) {
    rep.best_attained = true;
    rep.best_rule = bc.rule;
  } else if (std::abs(kmin - *rep.lower_bound) <= 1e-9) {
    rep.best_attained = true;
    rep.best_rule = BestRule::BoundsCoincide;
  }
  return rep;
}

}  // namespace hus
