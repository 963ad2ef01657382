#pragma once

#include "hus/stability.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace hus {

// Closed-form perturbation families; every q keeps ||q(t)||_inf <= epsilon,
// so the <= K*eps certification never sees quadrature error.
struct ConstantDir {
  Vec2 e;  // ||e||_inf = 1
};
struct Sinusoid {
  double omega;
  Vec2 dir;  // ||dir||_inf = 1
};
struct SignSwitch {
  double period;  // > 0; sigma(t) = (-1)^floor(t/period)
  Vec2 dir;
};
using PerturbationFamily = std::variant<ConstantDir, Sinusoid, SignSwitch>;

struct PerturbationSpec {
  double epsilon;
  PerturbationFamily family;
};

// Factories normalize the direction to unit max-norm.
PerturbationSpec constant_dir(double eps, const Vec2& e);
PerturbationSpec sinusoid(double eps, double omega, const Vec2& dir);
PerturbationSpec sign_switch(double eps, double period, const Vec2& dir);

const char* family_name(const PerturbationSpec& spec);
Vec2 perturbation_at(const PerturbationSpec& spec, double t);

// {0, +-step, ..., +-horizon}, endpoints always included.
std::vector<double> symmetric_grid(double horizon, double step);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Vec2> phi;
  std::vector<Vec2> x;            // empty when no tracking solution exists
  std::vector<double> deviation;  // ||phi - x||_inf per time (closed form)
  double sup_deviation = 0.0;
  double residual_max = 0.0;  // max_grid ||phi' - A phi - q||_inf, FD check
};

// phi(t) = e^{tA} phi0 + int_0^t e^{(t-s)A} q(s) ds, all pieces closed form.
Vec2 perturbed_phi(const Mat2& m, const EigenClass& ec,
                   const PerturbationSpec& spec, const Vec2& phi0, double t);

// phi columns plus the finite-difference residual sanity value. Throws
// HorizonTooLargeError when max|Re lambda| * max|t| exceeds kExpArgCap.
TrajectoryRecord perturbed_trajectory(const Mat2& m, const PerturbationSpec& spec,
                                      const Vec2& phi0,
                                      const std::vector<double>& grid);

struct TrackingSolution {
  Vec2 x0;
  std::function<Vec2(double)> at;  // e^{tA} x0
};

// The proof's bounded-deviation solution: forward improper integral for a
// spectrum in the right half plane, backward for the left, and the
// spectral-projection split for saddles. Throws NotStableError.
TrackingSolution tracking_solution(const Mat2& m, const PerturbationSpec& spec,
                                   const Vec2& phi0);

// Evaluates phi(t) - x(t) for the tracking solution directly from the
// forward/backward tail integrals. This form stays O(K*eps) for every t,
// where subtracting materialized phi and x would cancel catastrophically
// once |Re lambda|*t goes past ~35.
class DeviationEvaluator {
 public:
  DeviationEvaluator(const Mat2& m, const EigenClass& ec,
                     const PerturbationSpec& spec);
  // dev(t) = epsilon * shape(t); exposing shape keeps eps-linearity exact.
  Vec2 shape(double t) const;
  Vec2 operator()(double t) const { return eps_ * shape(t); }

 private:
  Vec2 switch_shape(double t) const;

  Mat2 m_;
  EigenClass ec_;
  double eps_ = 0.0;
  Vec2 dir_ = Vec2::Zero();
  int kind_ = 0;  // 0 constant, 1 sinusoid, 2 switch
  // constant: cached_a_ = -A^{-1} e; sinusoid: cached_a_ = A S dir,
  // cached_b_ = omega S dir with S = (A^2 + omega^2 I)^{-1}.
  Vec2 cached_a_ = Vec2::Zero();
  Vec2 cached_b_ = Vec2::Zero();
  double omega_ = 0.0;
  double period_ = 0.0;
  // switch, distinct spectrum: per-mode scalar tails through the projections
  bool split_modes_ = false;
  Vec2 p1dir_ = Vec2::Zero(), p2dir_ = Vec2::Zero();
  double l1_ = 0.0, l2_ = 0.0;
  double w1_ = 0.0, w2_ = 0.0;  // tanh(lambda p/2)/lambda
  // switch, repeated/complex spectrum: matrix-form tails
  double rho_ = 0.0;            // common real part
  Vec2 wdir_ = Vec2::Zero();    // A^{-1}(e^{pA}-I)(e^{pA}+I)^{-1} dir
  Mat2 mneg_ = Mat2::Zero();
  EigenClass ecneg_;
};

struct SpecCertification {
  std::string family;
  double eps;
  double sup_dev;
  double ratio;  // sup_dev / eps
  bool pass;
  double argmax_t;
};

struct CertificationSummary {
  double k = 0.0;  // constant the runs are checked against
  std::vector<SpecCertification> specs;
  bool all_pass = true;
};

// Sweeps dev over the symmetric grid with one bisection refinement at the
// argmax; pass threshold is K*eps*(1+1e-8) + 1e-12 plus the Lipschitz slack
// (||A||*sup_dev + eps)*step for the between-grid excursion.
CertificationSummary certify(const Mat2& m,
                             const std::vector<PerturbationSpec>& specs,
                             const StabilityReport& report, double horizon,
                             double step);

// Full record (phi, x, closed-form deviation, FD residual) for export.
TrajectoryRecord certified_record(const Mat2& m, const StabilityReport& report,
                                  const PerturbationSpec& spec, const Vec2& phi0,
                                  const std::vector<double>& grid);

struct LowerBoundWitness {
  double deviation_constant;        // eps * ||A^{-1} e||_inf
  Vec2 residual;                    // phi' - A phi == eps * e identically
  std::function<Vec2(double)> phi;  // eps (e^{tA} - I) A^{-1} e
  std::function<Vec2(double)> x;    // eps e^{tA} A^{-1} e
};

// The exact witness pair whose deviation is the constant eps*||A^{-1}e||_inf.
// Throws SingularMatrixError / NotStableError.
LowerBoundWitness lower_bound_witness(const Mat2& m, const Vec2& e,
                                      double epsilon);

// Witness trajectories for the unstable cases (a zero eigenvalue or a purely
// imaginary pair): residual stays exactly eps while no solution tracks phi.
class InstabilityWitness {
 public:
  // Throws IsStableError when m is Hyers-Ulam stable.
  InstabilityWitness(const Mat2& m, const EigenClass& ec, double epsilon);

  Vec2 phi(double t) const;
  Vec2 residual(double t) const;  // phi'(t) - A phi(t), closed form
  // max ||residual|| over the grid, with the analytic peak times appended so
  // the sup eps is actually attained on the sample.
  double residual_sup(std::vector<double> grid) const;
  // g(T) = min over x0 in {0, phi(0), least-squares fit} of
  // max_{|t|<=T} ||phi(t) - e^{tA} x0||_inf; grows without bound.
  double growth(double horizon) const;

 private:
  enum class Kind { ZeroEigen, DoubleZero, DoubleZeroPaired, Imaginary };

  Mat2 m_;
  EigenClass ec_;
  double eps_ = 0.0;
  Kind kind_ = Kind::ZeroEigen;
  Vec2 dir_ = Vec2::Zero();  // ZeroEigen: unit kernel vector
  double mconst_ = 1.0;      // Imaginary: the proof's normalizer m
  std::vector<double> peaks_;
};

}  // namespace hus
