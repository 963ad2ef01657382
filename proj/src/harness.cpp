#include "hus/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hus {

namespace {

Vec2 unit_max(const Vec2& v) {
  const double n = vec_inf_norm(v);
  if (!(n > 0.0)) throw std::invalid_argument("direction vector is zero");
  return v / n;
}

int parity_sign(long long k) { return (k % 2 == 0) ? 1 : -1; }

long long period_index(double t, double p) {
  return static_cast<long long>(std::floor(t / p));
}

double max_abs_re(const EigenClass& ec) {
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    return std::max(std::abs(d->lambda1), std::abs(d->lambda2));
  }
  if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    return std::abs(r->lambda);
  }
  return std::abs(std::get<ComplexPair>(ec).alpha);
}

EigenClass negated_class(const EigenClass& ec) {
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    return RealDistinct{-d->lambda2, -d->lambda1};
  }
  if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    return RealRepeated{-r->lambda, -r->eta};
  }
  const auto& c = std::get<ComplexPair>(ec);
  return ComplexPair{-c.alpha, c.beta};
}

// int_0^p e^{-lambda u} du summed over the alternating tail:
// (1/(1+e^{-lambda p})) * (1-e^{-lambda p})/lambda = tanh(lambda p/2)/lambda.
double tanh_flow(double lambda, double p) {
  if (lambda == 0.0) return 0.5 * p;
  return std::tanh(0.5 * lambda * p) / lambda;
}

// (A^2 + omega^2 I)^{-1}; singular only at purely imaginary resonance.
Mat2 sinusoid_resolvent(const Mat2& m, double omega) {
  const Mat2 b = m * m + omega * omega * Mat2::Identity();
  try {
    return inverse2(b);
  } catch (const SingularMatrixError&) {
    throw ResonantForcingError(
        "sinusoid frequency resonates with a purely imaginary spectrum");
  }
}

// A^{-1}(e^{pA} - I)(e^{pA} + I)^{-1}: the alternating-tail weight matrix.
Mat2 switch_weight(const Mat2& m, const EigenClass& ec, double p) {
  if (max_abs_re(ec) * p > kExpArgCap) {
    throw HorizonTooLargeError("sign-switch period too large for the spectrum");
  }
  const Mat2 ep = expm_closed(m, ec, p);
  return inverse2(m) * (ep - Mat2::Identity()) *
         inverse2(ep + Mat2::Identity());
}

void check_materialize_horizon(const EigenClass& ec,
                               const std::vector<double>& grid) {
  double tmax = 0.0;
  for (double t : grid) tmax = std::max(tmax, std::abs(t));
  if (max_abs_re(ec) * tmax > kExpArgCap) {
    throw HorizonTooLargeError(
        "horizon too large: |Re lambda|*t exceeds the trajectory cap");
  }
}

// 5-point first-derivative residual sweep. Points near a switch kink or with
// large ||phi|| are skipped: the stencil is invalid across the kink and the
// roundoff floor scales with ||phi||.
double fd_residual_max(const Mat2& m, const PerturbationSpec& spec,
                       const std::function<Vec2(double)>& f,
                       const std::vector<double>& grid) {
  constexpr double h = 1e-3;
  const auto* sw = std::get_if<SignSwitch>(&spec.family);
  double worst = 0.0;
  for (double t : grid) {
    if (sw) {
      const double r = std::abs(std::remainder(t, sw->period));
      if (std::min(r, sw->period - r) < 3.0 * h) continue;
    }
    const Vec2 ft = f(t);
    if (vec_inf_norm(ft) > 100.0) continue;
    const Vec2 der =
        (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) /
        (12.0 * h);
    const Vec2 res = der - m * ft - perturbation_at(spec, t);
    worst = std::max(worst, vec_inf_norm(res));
  }
  return worst;
}

}  // namespace

PerturbationSpec constant_dir(double eps, const Vec2& e) {
  return {eps, ConstantDir{unit_max(e)}};
}
PerturbationSpec sinusoid(double eps, double omega, const Vec2& dir) {
  return {eps, Sinusoid{omega, unit_max(dir)}};
}
PerturbationSpec sign_switch(double eps, double period, const Vec2& dir) {
  if (!(period > 0.0)) throw std::invalid_argument("switch period must be > 0");
  return {eps, SignSwitch{period, unit_max(dir)}};
}

const char* family_name(const PerturbationSpec& spec) {
  if (std::holds_alternative<ConstantDir>(spec.family)) return "constant";
  if (std::holds_alternative<Sinusoid>(spec.family)) return "sinusoid";
  return "switch";
}

Vec2 perturbation_at(const PerturbationSpec& spec, double t) {
  if (const auto* c = std::get_if<ConstantDir>(&spec.family)) {
    return spec.epsilon * c->e;
  }
  if (const auto* s = std::get_if<Sinusoid>(&spec.family)) {
    return spec.epsilon * std::sin(s->omega * t) * s->dir;
  }
  const auto& sw = std::get<SignSwitch>(spec.family);
  return spec.epsilon * parity_sign(period_index(t, sw.period)) * sw.dir;
}

std::vector<double> symmetric_grid(double horizon, double step) {
  if (!(horizon > 0.0) || !(step > 0.0)) {
    throw std::invalid_argument("grid needs horizon > 0 and step > 0");
  }
  const auto n = static_cast<long long>(std::floor(horizon / step + 1e-12));
  std::vector<double> pos;
  pos.reserve(static_cast<size_t>(n) + 1);
  for (long long k = 1; k <= n; ++k) pos.push_back(static_cast<double>(k) * step);
  if (pos.empty() || pos.back() < horizon * (1.0 - 1e-15)) pos.push_back(horizon);
  std::vector<double> grid;
  grid.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) grid.push_back(-*it);
  grid.push_back(0.0);
  grid.insert(grid.end(), pos.begin(), pos.end());
  return grid;
}

Vec2 perturbed_phi(const Mat2& m, const EigenClass& ec,
                   const PerturbationSpec& spec, const Vec2& phi0, double t) {
  const double eps = spec.epsilon;
  Vec2 out = expm_closed(m, ec, t) * phi0;
  if (const auto* c = std::get_if<ConstantDir>(&spec.family)) {
    return out + eps * (flow_integral(m, ec, t) * c->e);
  }
  if (const auto* s = std::get_if<Sinusoid>(&spec.family)) {
    const Mat2 res = sinusoid_resolvent(m, s->omega);
    const Vec2 sd = res * s->dir;
    const Vec2 conv = -std::sin(s->omega * t) * (m * sd) -
                      s->omega * std::cos(s->omega * t) * sd +
                      s->omega * (expm_closed(m, ec, t) * sd);
    return out + eps * conv;
  }
  const auto& sw = std::get<SignSwitch>(spec.family);
  if (t == 0.0) return out;
  const double lo = std::min(t, 0.0);
  const double hi = std::max(t, 0.0);
  const double sgn = t > 0.0 ? 1.0 : -1.0;
  Vec2 acc = Vec2::Zero();
  for (long long k = period_index(lo, sw.period);
       static_cast<double>(k) * sw.period < hi; ++k) {
    const double s0 = std::max(lo, static_cast<double>(k) * sw.period);
    const double s1 = std::min(hi, static_cast<double>(k + 1) * sw.period);
    if (!(s1 > s0)) continue;
    const Vec2 seg = flow_integral(m, ec, s1 - s0) *
                     (static_cast<double>(parity_sign(k)) * sw.dir);
    acc += expm_closed(m, ec, t - s1) * seg;
  }
  return out + eps * sgn * acc;
}

TrajectoryRecord perturbed_trajectory(const Mat2& m, const PerturbationSpec& spec,
                                      const Vec2& phi0,
                                      const std::vector<double>& grid) {
  const EigenClass ec = classify(m);
  check_materialize_horizon(ec, grid);
  TrajectoryRecord rec;
  rec.times = grid;
  rec.phi.reserve(grid.size());
  for (double t : grid) rec.phi.push_back(perturbed_phi(m, ec, spec, phi0, t));
  rec.residual_max = fd_residual_max(
      m, spec, [&](double t) { return perturbed_phi(m, ec, spec, phi0, t); },
      grid);
  return rec;
}

TrackingSolution tracking_solution(const Mat2& m, const PerturbationSpec& spec,
                                   const Vec2& phi0) {
  const EigenClass ec = classify(m);
  if (!is_hus_stable(m, ec).stable) {
    throw NotStableError("tracking_solution: matrix is not Hyers-Ulam stable");
  }
  const double eps = spec.epsilon;
  Vec2 x0;
  if (const auto* c = std::get_if<ConstantDir>(&spec.family)) {
    x0 = phi0 + eps * (inverse2(m) * c->e);
  } else if (const auto* s = std::get_if<Sinusoid>(&spec.family)) {
    x0 = phi0 + eps * s->omega * (sinusoid_resolvent(m, s->omega) * s->dir);
  } else {
    const auto& sw = std::get<SignSwitch>(spec.family);
    if (const auto* d = std::get_if<RealDistinct>(&ec)) {
      // per-mode alternating-tail weights through the spectral projections;
      // covers the saddle, where forward and backward tails mix
      const ProjectionPair pp = spectral_projections(m, *d);
      x0 = phi0 + eps * (tanh_flow(d->lambda1, sw.period) * (pp.p1 * sw.dir) +
                         tanh_flow(d->lambda2, sw.period) * (pp.p2 * sw.dir));
    } else {
      x0 = phi0 + eps * (switch_weight(m, ec, sw.period) * sw.dir);
    }
  }
  TrackingSolution sol;
  sol.x0 = x0;
  sol.at = [m, ec, x0](double t) { return expm_closed(m, ec, t) * x0; };
  return sol;
}

DeviationEvaluator::DeviationEvaluator(const Mat2& m, const EigenClass& ec,
                                       const PerturbationSpec& spec)
    : m_(m), ec_(ec), eps_(spec.epsilon) {
  if (const auto* c = std::get_if<ConstantDir>(&spec.family)) {
    kind_ = 0;
    dir_ = c->e;
    cached_a_ = -(inverse2(m) * dir_);
    return;
  }
  if (const auto* s = std::get_if<Sinusoid>(&spec.family)) {
    kind_ = 1;
    dir_ = s->dir;
    omega_ = s->omega;
    const Vec2 sd = sinusoid_resolvent(m, omega_) * dir_;
    cached_a_ = m * sd;
    cached_b_ = omega_ * sd;
    return;
  }
  const auto& sw = std::get<SignSwitch>(spec.family);
  kind_ = 2;
  dir_ = sw.dir;
  period_ = sw.period;
  if (const auto* d = std::get_if<RealDistinct>(&ec_)) {
    split_modes_ = true;
    const ProjectionPair pp = spectral_projections(m, *d);
    p1dir_ = pp.p1 * dir_;
    p2dir_ = pp.p2 * dir_;
    l1_ = d->lambda1;
    l2_ = d->lambda2;
    w1_ = tanh_flow(l1_, period_);
    w2_ = tanh_flow(l2_, period_);
  } else {
    split_modes_ = false;
    rho_ = max_abs_re(ec_);
    if (const auto* r = std::get_if<RealRepeated>(&ec_)) rho_ = r->lambda;
    if (const auto* cp = std::get_if<ComplexPair>(&ec_)) rho_ = cp->alpha;
    wdir_ = switch_weight(m, ec_, period_) * dir_;
    mneg_ = -m;
    ecneg_ = negated_class(ec_);
  }
}

Vec2 DeviationEvaluator::switch_shape(double t) const {
  const long long k = period_index(t, period_);
  const double sk = parity_sign(k);
  if (split_modes_) {
    auto mode = [&](double lambda, const Vec2& pdir) -> Vec2 {
      if (lambda > 0.0) {
        const double delta = static_cast<double>(k + 1) * period_ - t;
        // -sigma_k [ int_0^delta e^{-lambda u} du - e^{-lambda delta} w ]
        return -sk * (exp_flow(-lambda, delta) -
                      std::exp(-lambda * delta) * tanh_flow(lambda, period_)) *
               pdir;
      }
      const double dpr = t - static_cast<double>(k) * period_;
      return sk * (exp_flow(lambda, dpr) -
                   std::exp(lambda * dpr) * tanh_flow(lambda, period_)) *
             pdir;
    };
    return mode(l1_, p1dir_) + mode(l2_, p2dir_);
  }
  if (rho_ > 0.0) {
    const double delta = static_cast<double>(k + 1) * period_ - t;
    const Vec2 v = flow_integral(mneg_, ecneg_, delta) * dir_ -
                   expm_closed(m_, ec_, -delta) * wdir_;
    return -sk * v;
  }
  const double dpr = t - static_cast<double>(k) * period_;
  const Vec2 v =
      flow_integral(m_, ec_, dpr) * dir_ - expm_closed(m_, ec_, dpr) * wdir_;
  return sk * v;
}

Vec2 DeviationEvaluator::shape(double t) const {
  if (kind_ == 0) return cached_a_;
  if (kind_ == 1) {
    return -(std::sin(omega_ * t) * cached_a_ + std::cos(omega_ * t) * cached_b_);
  }
  return switch_shape(t);
}

CertificationSummary certify(const Mat2& m,
                             const std::vector<PerturbationSpec>& specs,
                             const StabilityReport& report, double horizon,
                             double step) {
  if (!report.stable || !report.k_reported) {
    throw NotStableError("certify: matrix is not Hyers-Ulam stable");
  }
  const double k = *report.k_reported;
  const std::vector<double> grid = symmetric_grid(horizon, step);
  const double anorm = mat_inf_norm(m);

  CertificationSummary summary;
  summary.k = k;
  for (const PerturbationSpec& spec : specs) {
    const DeviationEvaluator dev(m, report.eigen, spec);
    double sup_shape = 0.0;
    double argmax = 0.0;
    for (double t : grid) {
      const double v = vec_inf_norm(dev.shape(t));
      if (v > sup_shape) {
        sup_shape = v;
        argmax = t;
      }
    }
    for (double dt : {-0.5 * step, 0.5 * step}) {
      const double t = std::clamp(argmax + dt, -horizon, horizon);
      sup_shape = std::max(sup_shape, vec_inf_norm(dev.shape(t)));
    }
    const double eps = spec.epsilon;
    const double sup_dev = eps * sup_shape;
    const double slack = (anorm * sup_dev + eps) * step;
    SpecCertification sc;
    sc.family = family_name(spec);
    sc.eps = eps;
    sc.sup_dev = sup_dev;
    sc.ratio = sup_shape;
    sc.pass = sup_dev <= k * eps * (1.0 + 1e-8) + 1e-12 + slack;
    sc.argmax_t = argmax;
    summary.all_pass = summary.all_pass && sc.pass;
    summary.specs.push_back(std::move(sc));
  }
  return summary;
}

TrajectoryRecord certified_record(const Mat2& m, const StabilityReport& report,
                                  const PerturbationSpec& spec, const Vec2& phi0,
                                  const std::vector<double>& grid) {
  if (!report.stable) {
    throw NotStableError("certified_record: matrix is not Hyers-Ulam stable");
  }
  check_materialize_horizon(report.eigen, grid);
  const EigenClass& ec = report.eigen;
  const TrackingSolution sol = tracking_solution(m, spec, phi0);
  const DeviationEvaluator dev(m, ec, spec);

  TrajectoryRecord rec;
  rec.times = grid;
  rec.phi.reserve(grid.size());
  rec.x.reserve(grid.size());
  rec.deviation.reserve(grid.size());
  for (double t : grid) {
    rec.phi.push_back(perturbed_phi(m, ec, spec, phi0, t));
    rec.x.push_back(sol.at(t));
    rec.deviation.push_back(vec_inf_norm(dev(t)));
    rec.sup_deviation = std::max(rec.sup_deviation, rec.deviation.back());
  }
  rec.residual_max = fd_residual_max(
      m, spec, [&](double t) { return perturbed_phi(m, ec, spec, phi0, t); },
      grid);
  return rec;
}

LowerBoundWitness lower_bound_witness(const Mat2& m, const Vec2& e,
                                      double epsilon) {
  const Vec2 u = unit_max(e);
  const Mat2 ainv = inverse2(m);
  const EigenClass ec = classify(m);
  if (!is_hus_stable(m, ec).stable) {
    throw NotStableError("lower_bound_witness: matrix is not Hyers-Ulam stable");
  }
  const Vec2 w = ainv * u;
  LowerBoundWitness out;
  out.deviation_constant = epsilon * vec_inf_norm(w);
  out.residual = epsilon * u;
  // (e^{tA} - I) A^{-1} u is exactly the flow integral applied to u
  out.phi = [m, ec, u, epsilon](double t) {
    return epsilon * (flow_integral(m, ec, t) * u);
  };
  out.x = [m, ec, w, epsilon](double t) {
    return epsilon * (expm_closed(m, ec, t) * w);
  };
  return out;
}

InstabilityWitness::InstabilityWitness(const Mat2& m, const EigenClass& ec,
                                       double epsilon)
    : m_(m), ec_(ec), eps_(epsilon) {
  if (is_hus_stable(m, ec).stable) {
    throw IsStableError("instability_witness: matrix is Hyers-Ulam stable");
  }
  const double band = kClassifyTol * std::max(1.0, mat_inf_norm(m));
  if (const auto* d = std::get_if<RealDistinct>(&ec_)) {
    kind_ = Kind::ZeroEigen;
    // kernel direction for the (near-)zero eigenvalue
    const double lz =
        std::abs(d->lambda1) <= std::abs(d->lambda2) ? d->lambda1 : d->lambda2;
    const Vec2 v1{-m(0, 1), m(0, 0) - lz};
    const Vec2 v2{m(1, 1) - lz, -m(1, 0)};
    dir_ = unit_max(vec_inf_norm(v1) >= vec_inf_norm(v2) ? v1 : v2);
    peaks_ = {0.0};
  } else if (const auto* r = std::get_if<RealRepeated>(&ec_)) {
    (void)r;
    const double a = m(0, 0);
    const bool paired =
        std::abs(m(0, 1) + a) <= band && std::abs(m(1, 0) - a) <= band;
    kind_ = paired ? Kind::DoubleZeroPaired : Kind::DoubleZero;
    peaks_ = {0.0};
  } else {
    const auto& cp = std::get<ComplexPair>(ec_);
    kind_ = Kind::Imaginary;
    const double a = m(0, 0);
    const double beta = cp.beta;
    mconst_ = std::max(std::hypot(a, beta) / beta, std::abs(m(1, 0)) / beta);
    peaks_ = {0.0, std::atan(a / beta) / beta, 0.5 * M_PI / beta};
  }
}

Vec2 InstabilityWitness::phi(double t) const {
  const double a = m_(0, 0);
  const double b = m_(0, 1);
  const double c = m_(1, 0);
  switch (kind_) {
    case Kind::ZeroEigen:
      return eps_ * t * dir_;
    case Kind::DoubleZero:
      return 0.5 * eps_ * t * Vec2{(a + b) * t + 2.0, (c - a) * t + 2.0};
    case Kind::DoubleZeroPaired:
      return eps_ * t * Vec2{a * t + 1.0, a * t - 1.0};
    case Kind::Imaginary:
      return (eps_ * t / mconst_) * (expm_closed(m_, ec_, t) * Vec2{1.0, 0.0});
  }
  return Vec2::Zero();
}

Vec2 InstabilityWitness::residual(double t) const {
  const double a = m_(0, 0);
  switch (kind_) {
    case Kind::ZeroEigen:
      return eps_ * (dir_ - t * (m_ * dir_));
    case Kind::DoubleZero: {
      const double b = m_(0, 1);
      const double c = m_(1, 0);
      const Vec2 dphi =
          eps_ * Vec2{(a + b) * t + 1.0, (c - a) * t + 1.0};
      return dphi - m_ * phi(t);
    }
    case Kind::DoubleZeroPaired: {
      const Vec2 dphi = eps_ * Vec2{2.0 * a * t + 1.0, 2.0 * a * t - 1.0};
      return dphi - m_ * phi(t);
    }
    case Kind::Imaginary:
      return (eps_ / mconst_) * (expm_closed(m_, ec_, t) * Vec2{1.0, 0.0});
  }
  return Vec2::Zero();
}

double InstabilityWitness::residual_sup(std::vector<double> grid) const {
  grid.insert(grid.end(), peaks_.begin(), peaks_.end());
  double sup = 0.0;
  for (double t : grid) sup = std::max(sup, vec_inf_norm(residual(t)));
  return sup;
}

double InstabilityWitness::growth(double horizon) const {
  constexpr int kPoints = 4001;
  const double step = 2.0 * horizon / (kPoints - 1);
  std::vector<double> ts(kPoints);
  for (int i = 0; i < kPoints; ++i) ts[i] = -horizon + i * step;
  ts[0] = -horizon;
  ts[kPoints - 1] = horizon;

  // least-squares fit of e^{tA} x0 to phi over the safely representable part
  Mat2 gram = Mat2::Zero();
  Vec2 rhs = Vec2::Zero();
  for (double t : ts) {
    const Mat2 et = expm_closed(m_, ec_, t);
    if (!(mat_inf_norm(et) <= 1e30)) continue;
    gram += et.transpose() * et;
    rhs += et.transpose() * phi(t);
  }
  std::vector<Vec2> candidates = {Vec2::Zero(), phi(0.0)};
  const double gdet = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
  if (std::isfinite(gdet) && gdet != 0.0) {
    Mat2 ginv;
    ginv << gram(1, 1), -gram(0, 1), -gram(1, 0), gram(0, 0);
    candidates.push_back((ginv / gdet) * rhs);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& x0 : candidates) {
    double worst = 0.0;
    const bool trivial = x0.isZero(0.0);
    for (double t : ts) {
      double d;
      if (trivial) {
        d = vec_inf_norm(phi(t));
      } else {
        d = vec_inf_norm(phi(t) - expm_closed(m_, ec_, t) * x0);
      }
      if (!std::isfinite(d)) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      worst = std::max(worst, d);
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace hus
