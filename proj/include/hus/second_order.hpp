#pragma once

#include "hus/stability.hpp"

#include <optional>
#include <variant>

namespace hus {

struct IncompatibleSubstitutionError : std::domain_error {
  using std::domain_error::domain_error;
};

// Characteristic roots of x'' - (l1+l2) x' + l1*l2 x = 0.
struct RealRoots {
  double lambda1;
  double lambda2;
};
struct ComplexRoots {
  double alpha;
  double beta;  // > 0
};
using Roots = std::variant<RealRoots, ComplexRoots>;

// Direct:     u = x',            A = [[0, 1], [-l1 l2, l1 + l2]]
// Triangular: u = x' - l1 x,     A = [[l1, 1], [0, l2]]   (real roots only)
enum class Substitution { Direct, Triangular };
const char* to_string(Substitution s);

struct SecondOrderProblem {
  Roots roots;
  Substitution substitution = Substitution::Direct;
};

// Builds the substitution-matched system matrix. Root order is preserved for
// Triangular (swapping it changes A and possibly K).
Mat2 companion(const SecondOrderProblem& problem);

// Specialized closed-form constant for the root pattern, matched against the
// corresponding general candidate.
struct FormulaCrossCheck {
  KCase candidate_label;
  double candidate_value;
  double reference_value;
  double abs_diff;
};

struct SecondOrderReport {
  SecondOrderProblem problem;
  Mat2 matrix;
  StabilityReport report;
  std::optional<FormulaCrossCheck> cross_check;
};

SecondOrderReport second_order_report(const SecondOrderProblem& problem);

// Positive root of lambda^2 + (2/e - 2) lambda - 1 = 0 by bisection: the
// crossover where the two repeated-root branch formulas for the direct
// substitution meet. Checked against (e-1)/e + sqrt(1 - 2e + 2e^2)/e.
double repeated_root_threshold();

}  // namespace hus
