#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <variant>

namespace hus {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// Eigenvalue classification of a real 2x2 matrix. The repeated tag also
// absorbs matrices whose discriminant lies inside the tolerance band, since
// the repeated-case formulas are the continuous limits of the distinct ones.
struct RealDistinct {
  double lambda1;  // larger eigenvalue
  double lambda2;  // smaller eigenvalue
};

struct RealRepeated {
  double lambda;  // trace/2
  double eta;     // lambda - a11; satisfies bc + eta^2 = 0
};

struct ComplexPair {
  double alpha;  // trace/2
  double beta;   // > 0, eigenvalues alpha +- i*beta
};

using EigenClass = std::variant<RealDistinct, RealRepeated, ComplexPair>;

// Idempotents p1, p2 with p1 + p2 = I, p1*p2 = 0 and
// exp(tA) = exp(lambda1 t) p1 + exp(lambda2 t) p2.
struct ProjectionPair {
  Mat2 p1;
  Mat2 p2;
};

inline constexpr double kClassifyTol = 1e-10;
// |Re(lambda)|*t beyond which materialized trajectories are refused: the
// deviation would sit under ~e^{50}*eps_mach of cancellation noise.
inline constexpr double kExpArgCap = 50.0;

struct SingularMatrixError : std::domain_error {
  using std::domain_error::domain_error;
};
struct DegenerateClassError : std::domain_error {
  using std::domain_error::domain_error;
};
struct CaseMismatchError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NotStableError : std::domain_error {
  using std::domain_error::domain_error;
};
struct IsStableError : std::domain_error {
  using std::domain_error::domain_error;
};
struct HorizonTooLargeError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ResonantForcingError : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace hus
