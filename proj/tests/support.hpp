#pragma once

// Shared test helpers: seeded matrix generators per spectral class (built in
// the d = l1 + l2 - a, bc = (l1 - a)(a - l2) normal form) and a Simpson
// quadrature oracle for the convolution integral. The oracle goes through
// expm_series_oracle on purpose, staying independent of every closed-form
// path under test.

#include "hus/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace hustest {

using hus::Mat2;
using hus::Vec2;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double signed_uniform(std::mt19937_64& rng, double lo, double hi) {
  const double v = uniform(rng, lo, hi);
  return (rng() & 1u) ? v : -v;
}

inline Mat2 from_spectrum_distinct(std::mt19937_64& rng, double l1, double l2) {
  const double a = uniform(rng, l2 - 1.2, l1 + 1.2);  // covers all branches
  const double c = signed_uniform(rng, 0.5, 2.0);
  const double b = (l1 - a) * (a - l2) / c;
  Mat2 m;
  m << a, b, c, l1 + l2 - a;
  return m;
}

inline Mat2 make_distinct_pos(std::mt19937_64& rng) {
  const double l2 = uniform(rng, 0.2, 1.4);
  return from_spectrum_distinct(rng, l2 + uniform(rng, 0.3, 1.2), l2);
}

inline Mat2 make_distinct_neg(std::mt19937_64& rng) {
  const double l1 = -uniform(rng, 0.2, 1.4);
  return from_spectrum_distinct(rng, l1, l1 - uniform(rng, 0.3, 1.2));
}

inline Mat2 make_saddle(std::mt19937_64& rng) {
  return from_spectrum_distinct(rng, uniform(rng, 0.2, 1.5),
                                -uniform(rng, 0.2, 1.5));
}

inline Mat2 make_repeated(std::mt19937_64& rng) {
  const double l = signed_uniform(rng, 0.3, 1.5);
  Mat2 m;
  if (rng() % 3 == 0) {  // eta = 0, one off-diagonal zero
    const double b = uniform(rng, -1.5, 1.5);
    if (rng() & 1u) {
      m << l, b, 0.0, l;
    } else {
      m << l, 0.0, b, l;
    }
    return m;
  }
  const double eta = signed_uniform(rng, 0.1, 1.0);
  const double c = signed_uniform(rng, 0.5, 2.0);
  m << l - eta, -eta * eta / c, c, l + eta;
  return m;
}

inline Mat2 make_complex_stable(std::mt19937_64& rng) {
  const double alpha = signed_uniform(rng, 0.2, 1.2);
  const double beta = uniform(rng, 0.3, 1.8);
  const double a = alpha + uniform(rng, -1.2, 1.2);
  const double c = signed_uniform(rng, 0.5, 2.0);
  const double b = -((alpha - a) * (alpha - a) + beta * beta) / c;
  Mat2 m;
  m << a, b, c, 2.0 * alpha - a;
  return m;
}

// All five stable sub-classes, round-robin by draw.
inline Mat2 make_stable_any(std::mt19937_64& rng) {
  switch (rng() % 5) {
    case 0: return make_distinct_pos(rng);
    case 1: return make_distinct_neg(rng);
    case 2: return make_saddle(rng);
    case 3: return make_repeated(rng);
    default: return make_complex_stable(rng);
  }
}

inline Mat2 random_box(std::mt19937_64& rng, double bound) {
  Mat2 m;
  m << uniform(rng, -bound, bound), uniform(rng, -bound, bound),
      uniform(rng, -bound, bound), uniform(rng, -bound, bound);
  return m;
}

// int_a^b f ds by composite Simpson on a smooth stretch.
template <typename F>
Vec2 simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / (2.0 * panels);
  Vec2 acc = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i) {
    acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  }
  return acc * (h / 3.0);
}

// int_0^t exp((t-s)A) q(s) ds, splitting at sign-switch kinks.
inline Vec2 convolution_quadrature(const Mat2& m,
                                   const hus::PerturbationSpec& spec, double t,
                                   int panels_per_unit = 400) {
  auto f = [&](double s) -> Vec2 {
    return hus::expm_series_oracle(m, t - s) * hus::perturbation_at(spec, s);
  };
  std::vector<double> cuts = {0.0, t};
  if (const auto* sw = std::get_if<hus::SignSwitch>(&spec.family)) {
    const double lo = std::min(0.0, t);
    const double hi = std::max(0.0, t);
    for (double s = std::ceil(lo / sw->period) * sw->period; s < hi;
         s += sw->period) {
      if (s > lo) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  if (t < 0.0) std::reverse(cuts.begin(), cuts.end());
  Vec2 acc = Vec2::Zero();
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const int panels =
        std::max(16, static_cast<int>(std::abs(b - a) * panels_per_unit));
    acc += simpson(f, a, b, panels);
  }
  return acc;
}

}  // namespace hustest
