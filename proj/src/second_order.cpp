#include "hus/second_order.hpp"

#include <cmath>
#include <stdexcept>

namespace hus {

namespace {

bool is_t31(KCase c) {
  return c == KCase::T31_i || c == KCase::T31_ii || c == KCase::T31_iii ||
         c == KCase::T31_iv || c == KCase::T31_v || c == KCase::T31_rep_pos ||
         c == KCase::T31_rep_neg;
}

const KCandidate* find_candidate(const StabilityReport& rep, bool want_t31,
                                 KCase direct = KCase::T32) {
  for (const KCandidate& c : rep.candidates) {
    if (want_t31 ? is_t31(c.label) : c.label == direct) return &c;
  }
  return nullptr;
}

std::optional<FormulaCrossCheck> make_check(const StabilityReport& rep,
                                            bool want_t31, KCase other,
                                            double reference) {
  const KCandidate* c = find_candidate(rep, want_t31, other);
  if (!c) return std::nullopt;
  return FormulaCrossCheck{c->label, c->value, reference,
                           std::abs(c->value - reference)};
}

// Specialized constants for the direct substitution (a = 0, b = 1, c = -l1*l2).
std::optional<FormulaCrossCheck> direct_check(const RealRoots& r,
                                              const StabilityReport& rep) {
  if (r.lambda1 == r.lambda2) {
    const double l = r.lambda1;
    if (l <= 0.0) return std::nullopt;
    const double ref = l < repeated_root_threshold()
                           ? (2.0 * l + 1.0) / (l * l)
                           : (l + 2.0 / std::exp(1.0)) / l;
    return make_check(rep, true, KCase::T32, ref);
  }
  const double s1 = std::max(r.lambda1, r.lambda2);
  const double s2 = std::min(r.lambda1, r.lambda2);
  if (s2 > 0.0) {
    const double p = s1 * s2;
    const double ref = std::max((s1 + s2 + 1.0) / p,
                                (p + 2.0 * s2 * std::pow(s1 / s2, -s2 / (s1 - s2))) / p);
    return make_check(rep, true, KCase::T32, ref);
  }
  if (s1 > 0.0 && s2 < 0.0) {
    const double a1 = std::abs(s1);
    const double a2 = std::abs(s2);
    const double ref = (a2 * (a2 + 1.0) * std::max(1.0, a1) +
                        a1 * (a1 + 1.0) * std::max(a2, 1.0)) /
                       (a1 * a2 * (s1 - s2));
    return make_check(rep, false, KCase::T32, ref);
  }
  return std::nullopt;  // negative or zero patterns have no specialized form
}

// Specialized constants for the triangular substitution (A = [[l1,1],[0,l2]]).
std::optional<FormulaCrossCheck> triangular_check(const RealRoots& r,
                                                  const StabilityReport& rep) {
  const double l1 = r.lambda1;
  const double l2 = r.lambda2;
  if (l1 == l2) {
    if (l1 == 0.0) return std::nullopt;
    const double ref = (1.0 + std::abs(l1)) / (l1 * l1);
    return make_check(rep, true, KCase::T32, ref);
  }
  if (l1 * l2 > 0.0) {
    // ||A^{-1}||_inf from the triangular entries
    const double ref =
        std::max((std::abs(l2) + 1.0) / std::abs(l1 * l2), 1.0 / std::abs(l2));
    return make_check(rep, true, KCase::T32, ref);
  }
  if (l1 > 0.0 && l2 < 0.0) {
    const double ref = (std::abs(l2) * (l1 - l2 + 1.0) +
                        std::abs(l1) * std::max(1.0, l1 - l2)) /
                       (std::abs(l1 * l2) * (l1 - l2));
    return make_check(rep, false, KCase::T32, ref);
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(Substitution s) {
  return s == Substitution::Direct ? "direct" : "triangular";
}

Mat2 companion(const SecondOrderProblem& problem) {
  Mat2 a;
  if (const auto* rr = std::get_if<RealRoots>(&problem.roots)) {
    if (problem.substitution == Substitution::Direct) {
      a << 0.0, 1.0, -rr->lambda1 * rr->lambda2, rr->lambda1 + rr->lambda2;
    } else {
      a << rr->lambda1, 1.0, 0.0, rr->lambda2;
    }
    return a;
  }
  const auto& cr = std::get<ComplexRoots>(problem.roots);
  if (problem.substitution == Substitution::Triangular) {
    throw IncompatibleSubstitutionError(
        "triangular substitution needs real roots");
  }
  if (!(cr.beta > 0.0)) {
    throw std::invalid_argument("complex roots need beta > 0");
  }
  a << 0.0, 1.0, -(cr.alpha * cr.alpha + cr.beta * cr.beta), 2.0 * cr.alpha;
  return a;
}

SecondOrderReport second_order_report(const SecondOrderProblem& problem) {
  SecondOrderReport out;
  out.problem = problem;
  out.matrix = companion(problem);
  out.report = analyze(out.matrix);
  if (!out.report.stable) return out;

  if (const auto* rr = std::get_if<RealRoots>(&problem.roots)) {
    out.cross_check = problem.substitution == Substitution::Direct
                          ? direct_check(*rr, out.report)
                          : triangular_check(*rr, out.report);
  } else {
    const auto& cr = std::get<ComplexRoots>(problem.roots);
    if (cr.alpha != 0.0) {
      const double reach =
          std::abs(cr.alpha) + std::max(1.0, cr.alpha * cr.alpha + cr.beta * cr.beta);
      const double ref = std::sqrt(cr.beta * cr.beta + reach * reach) /
                         (std::abs(cr.alpha) * cr.beta);
      out.cross_check = make_check(out.report, false, KCase::T33, ref);
    }
  }
  return out;
}

double repeated_root_threshold() {
  const double c = 2.0 / std::exp(1.0) - 2.0;
  auto f = [c](double x) { return x * x + c * x - 1.0; };
  double lo = 1.0, hi = 3.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const double e = std::exp(1.0);
  const double closed = (e - 1.0) / e + std::sqrt(1.0 - 2.0 * e + 2.0 * e * e) / e;
  if (std::abs(root - closed) > 1e-12) {
    throw std::logic_error("repeated_root_threshold: bisection drifted");
  }
  return root;
}

}  // namespace hus
