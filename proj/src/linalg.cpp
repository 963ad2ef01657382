#include "hus/linalg.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace hus {

namespace {

bool all_finite(const Mat2& m) {
  return std::isfinite(m(0, 0)) && std::isfinite(m(0, 1)) &&
         std::isfinite(m(1, 0)) && std::isfinite(m(1, 1));
}

double det2(const Mat2& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// int_0^t exp(w*u) du for complex w; series below |w*t| = 0.25 because
// (e^z - 1) loses digits there.
std::complex<double> exp_flow_c(std::complex<double> w, double t) {
  const std::complex<double> z = w * t;
  if (std::abs(z) < 0.25) {
    std::complex<double> sum = 1.0;
    std::complex<double> term = 1.0;
    for (int k = 1; k < 25; ++k) {
      term *= z / static_cast<double>(k + 1);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return t * sum;
  }
  return (std::exp(z) - 1.0) / w;
}

// int_0^t u*exp(lambda*u) du.
double ramp_flow(double lambda, double t) {
  const double z = lambda * t;
  if (std::abs(z) < 0.5) {
    // t^2 * sum_k z^k / (k! (k+2))
    double sum = 0.5;
    double kfact = 1.0;
    double zpow = 1.0;
    for (int k = 1; k < 30; ++k) {
      kfact *= k;
      zpow *= z;
      const double term = zpow / (kfact * (k + 2));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return t * t * sum;
  }
  const double em = std::expm1(z);
  return (z + em * (z - 1.0)) / (lambda * lambda);
}

}  // namespace

Mat2 inverse2(const Mat2& m) {
  const double det = det2(m);
  const double scale = std::max(1.0, mat_inf_norm(m));
  if (!(std::abs(det) > 1e-14 * scale * scale)) {
    throw SingularMatrixError("inverse2: matrix is singular to working precision");
  }
  Mat2 inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

EigenClass classify(const Mat2& m, double tol) {
  if (!all_finite(m)) {
    throw std::invalid_argument("classify: matrix entries must be finite");
  }
  const double tr = m(0, 0) + m(1, 1);
  const double det = det2(m);
  const double disc = tr * tr - 4.0 * det;
  const double band = tol * std::max({1.0, tr * tr, std::abs(det)});
  if (disc > band) {
    const double s = std::sqrt(disc);
    double r1, r2;
    if (tr >= 0.0) {
      r1 = 0.5 * (tr + s);
      r2 = det / r1;
    } else {
      r2 = 0.5 * (tr - s);
      r1 = det / r2;
    }
    if (r1 < r2) std::swap(r1, r2);
    return RealDistinct{r1, r2};
  }
  if (disc < -band) {
    return ComplexPair{0.5 * tr, 0.5 * std::sqrt(-disc)};
  }
  return RealRepeated{0.5 * tr, 0.5 * (m(1, 1) - m(0, 0))};
}

Mat2 expm_closed(const Mat2& m, const EigenClass& ec, double t) {
  if (t == 0.0) return Mat2::Identity();
  const double a = m(0, 0);
  const double b = m(0, 1);
  const double c = m(1, 0);
  Mat2 out;
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    // mean/half-spread arrangement of the distinct-case closed form:
    // e^{mean t}(cosh(h t) I + t sinhc(h t) (A - mean I)); identical entries,
    // but no (e^{l1 t}-e^{l2 t})/(l1-l2) cancellation for close eigenvalues
    const double mean = 0.5 * (d->lambda1 + d->lambda2);
    const double theta = 0.5 * (d->lambda1 - d->lambda2) * t;
    const double scale = std::exp(mean * t);
    const double ch = std::cosh(theta);
    const double snc =
        std::abs(theta) < 1e-5 ? 1.0 + theta * theta / 6.0 : std::sinh(theta) / theta;
    return scale * (ch * Mat2::Identity() +
                    (t * snc) * (m - mean * Mat2::Identity()));
  }
  if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    const double s = std::exp(r->lambda * t);
    const double eta = r->eta;
    out << s * (1.0 - eta * t), s * b * t, s * c * t, s * (1.0 + eta * t);
    return out;
  }
  const auto& cp = std::get<ComplexPair>(ec);
  const double ea = std::exp(cp.alpha * t);
  const double co = std::cos(cp.beta * t);
  const double si = std::sin(cp.beta * t);
  const double g = (a - cp.alpha) / cp.beta;
  out << ea * (co + g * si), ea * (b / cp.beta) * si, ea * (c / cp.beta) * si,
      ea * (co - g * si);
  return out;
}

Mat2 expm_closed(const Mat2& m, double t) {
  return expm_closed(m, classify(m), t);
}

Mat2 expm_series_oracle(const Mat2& m, double t) {
  Mat2 x = t * m;
  int squarings = 0;
  double nrm = mat_inf_norm(x);
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++squarings;
  }
  x /= std::pow(2.0, squarings);
  Mat2 sum = Mat2::Identity();
  Mat2 term = Mat2::Identity();
  for (int k = 1; k <= 60; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
    if (mat_inf_norm(term) < 1e-16) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

ProjectionPair spectral_projections(const Mat2& m, const RealDistinct& ec) {
  const double dl = ec.lambda1 - ec.lambda2;
  const double scale = std::max({1.0, std::abs(ec.lambda1), std::abs(ec.lambda2)});
  if (!(std::abs(dl) > 1e-12 * scale)) {
    throw DegenerateClassError("spectral_projections: eigenvalues not distinct");
  }
  ProjectionPair pp;
  pp.p1 = (m - ec.lambda2 * Mat2::Identity()) / dl;
  pp.p2 = (ec.lambda1 * Mat2::Identity() - m) / dl;
  return pp;
}

double exp_flow(double lambda, double t) {
  if (lambda == 0.0) return t;
  return std::expm1(lambda * t) / lambda;
}

Mat2 flow_integral(const Mat2& m, const EigenClass& ec, double t) {
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    const ProjectionPair pp = spectral_projections(m, *d);
    return exp_flow(d->lambda1, t) * pp.p1 + exp_flow(d->lambda2, t) * pp.p2;
  }
  if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    const Mat2 nil = m - r->lambda * Mat2::Identity();
    return exp_flow(r->lambda, t) * Mat2::Identity() + ramp_flow(r->lambda, t) * nil;
  }
  const auto& cp = std::get<ComplexPair>(ec);
  // exp(uA) = e^{alpha u}(cos(beta u) I + sin(beta u) B), B = (A - alpha I)/beta
  const std::complex<double> f = exp_flow_c({cp.alpha, cp.beta}, t);
  const Mat2 rot = (m - cp.alpha * Mat2::Identity()) / cp.beta;
  return f.real() * Mat2::Identity() + f.imag() * rot;
}

Mat2 flow_integral(const Mat2& m, double t) {
  return flow_integral(m, classify(m), t);
}

}  // namespace hus
