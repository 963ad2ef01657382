#pragma once

#include "hus/types.hpp"

namespace hus {

inline double vec_inf_norm(const Vec2& v) { return v.cwiseAbs().maxCoeff(); }

// Induced max-norm: largest absolute row sum.
inline double mat_inf_norm(const Mat2& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Adjugate/determinant inverse. Throws SingularMatrixError when |det| falls
// under 1e-14 * max(1, ||M||_inf^2).
Mat2 inverse2(const Mat2& m);

// Classify by the discriminant D = trace^2 - 4 det against the band
// tau = tol * max(1, trace^2, |det|):
//   D >  tau  -> RealDistinct (roots by the cancellation-free quadratic)
//   |D|<= tau -> RealRepeated with lambda = trace/2, eta = (a22 - a11)/2
//   D < -tau  -> ComplexPair with alpha = trace/2, beta = sqrt(-D)/2
EigenClass classify(const Mat2& m, double tol = kClassifyTol);

// Closed-form exp(tM) per eigenvalue class. Identity exactly at t = 0.
Mat2 expm_closed(const Mat2& m, double t);
Mat2 expm_closed(const Mat2& m, const EigenClass& ec, double t);

// Independent oracle: truncated power series with scaling-and-squaring
// (scaled norm <= 1/2, terms summed until below 1e-16).
Mat2 expm_series_oracle(const Mat2& m, double t);

// p1 = (M - lambda2 I)/(lambda1 - lambda2), p2 = (lambda1 I - M)/(lambda1 - lambda2).
ProjectionPair spectral_projections(const Mat2& m, const RealDistinct& ec);

// int_0^t exp(u*lambda) du, stable for small |lambda*t|.
double exp_flow(double lambda, double t);

// int_0^t exp(uM) du, closed form per class; defined for singular M too.
Mat2 flow_integral(const Mat2& m, double t);
Mat2 flow_integral(const Mat2& m, const EigenClass& ec, double t);

}  // namespace hus
