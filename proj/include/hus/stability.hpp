#pragma once

#include "hus/linalg.hpp"

#include <optional>
#include <vector>

namespace hus {

// Case tag of an upper-bound constant. T31_* are the same-sign real branches
// (i: a strictly between the eigenvalues, ii: a below both, iii: a above both,
// iv/v: a equal to the larger/smaller eigenvalue, rep_*: repeated eigenvalue
// by sign), T32 the general distinct-real constant, T33 the complex-pair one.
enum class KCase {
  T31_i,
  T31_ii,
  T31_iii,
  T31_iv,
  T31_v,
  T31_rep_pos,
  T31_rep_neg,
  T32,
  T33,
};
const char* to_string(KCase label);

struct KCandidate {
  KCase label;
  double value;
};

enum class BestRule {
  DistinctSameSign_aBetween,  // distinct, same sign, lambda1 >= a >= lambda2
  RepeatedLambdaEqA,          // repeated lambda != 0 with lambda = a (bc = 0)
  BoundsCoincide,             // reported K equals the lower bound numerically
};
const char* to_string(BestRule rule);

struct StabilityVerdict {
  bool stable;
  bool marginal;  // some eigenvalue real part inside the zero band
};

// Stable iff every eigenvalue real part clears tol*max(1, ||A||_inf).
StabilityVerdict is_hus_stable(const Mat2& m, const EigenClass& ec,
                               double tol = kClassifyTol);

// Same-sign real eigenvalues (distinct or repeated, all nonzero). Throws
// CaseMismatchError for saddles, zero eigenvalues and complex pairs.
KCandidate k_theorem31(const Mat2& m, const EigenClass& ec,
                       double tol = kClassifyTol);

// Distinct nonzero real eigenvalues of any signs.
KCandidate k_theorem32(const Mat2& m, const RealDistinct& ec,
                       double tol = kClassifyTol);

// Complex pair with nonzero real part.
KCandidate k_theorem33(const Mat2& m, const ComplexPair& ec,
                       double tol = kClassifyTol);

struct LowerBound {
  double bound;    // ||A^{-1}||_inf
  Vec2 maximizer;  // sign vector attaining ||A^{-1} e||_inf = bound
};
LowerBound lower_bound(const Mat2& m);

struct BestConstant {
  bool best;
  std::optional<BestRule> rule;
};
BestConstant best_constant_check(const Mat2& m, const EigenClass& ec,
                                 double tol = kClassifyTol);

struct StabilityReport {
  Mat2 matrix;
  EigenClass eigen;
  bool stable = false;
  bool marginal = false;
  std::vector<KCandidate> candidates;
  std::optional<double> k_reported;   // min over candidates
  std::optional<double> lower_bound;  // ||A^{-1}||_inf when stable
  bool best_attained = false;
  std::optional<BestRule> best_rule;
};

StabilityReport analyze(const Mat2& m, double tol = kClassifyTol);

}  // namespace hus
