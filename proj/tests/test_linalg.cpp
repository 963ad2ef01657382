#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hus/linalg.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace hus;

namespace {

Mat2 mk(double a, double b, double c, double d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

double entry_diff(const Mat2& x, const Mat2& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("max norms") {
  CHECK(vec_inf_norm(Vec2{1.0, -1.0}) == 1.0);
  CHECK(vec_inf_norm(Vec2{0.0, 0.0}) == 0.0);

  const Mat2 a = mk(2, 1, 1, 2);
  const Vec2 e{1.0, -1.0};
  // A^{-1} e lands back on (1,-1): e is the unit eigenvector of eigenvalue 1
  CHECK(vec_inf_norm(inverse2(a) * e) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(mat_inf_norm(mk(2.0 / 3, -1.0 / 3, -1.0 / 3, 2.0 / 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mat_inf_norm(Mat2::Identity()) == 1.0);
  CHECK(mat_inf_norm(mk(0, -0.5, 1, 1.5)) == 2.5);
}

TEST_CASE("inverse2") {
  const Mat2 inv = inverse2(mk(2, 1, 1, 2));
  CHECK(entry_diff(inv, mk(2.0 / 3, -1.0 / 3, -1.0 / 3, 2.0 / 3)) < 1e-15);
  CHECK(entry_diff(inverse2(Mat2::Identity()), Mat2::Identity()) == 0.0);
  CHECK_THROWS_AS(inverse2(mk(1, 2, 2, 4)), SingularMatrixError);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Mat2 m = hustest::random_box(rng, 2.0);
    try {
      const Mat2 mi = inverse2(m);
      CHECK(entry_diff(m * mi, Mat2::Identity()) < 1e-12 * mat_inf_norm(mi));
    } catch (const SingularMatrixError&) {
    }
  }
}

TEST_CASE("classify cases") {
  const auto d = std::get<RealDistinct>(classify(mk(2, 1, 1, 2)));
  CHECK(d.lambda1 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.lambda2 == doctest::Approx(1.0).epsilon(1e-14));

  const auto c = std::get<ComplexPair>(classify(mk(0, 1, -1, 0)));
  CHECK(c.alpha == 0.0);
  CHECK(c.beta == doctest::Approx(1.0).epsilon(1e-14));

  const auto r = std::get<RealRepeated>(classify(mk(1, 1, 0, 1)));
  CHECK(r.lambda == 1.0);
  CHECK(r.eta == 0.0);
}

TEST_CASE("classify invariants on random draws") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 400; ++i) {
    const Mat2 m = hustest::random_box(rng, 2.0);
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const EigenClass ec = classify(m);
    if (const auto* d = std::get_if<RealDistinct>(&ec)) {
      CHECK(d->lambda1 > d->lambda2);
      CHECK(d->lambda1 + d->lambda2 ==
            doctest::Approx(tr).epsilon(1e-10));
      CHECK(d->lambda1 * d->lambda2 ==
            doctest::Approx(det).epsilon(1e-8).scale(std::max(1.0, std::abs(det))));
    } else if (const auto* r = std::get_if<RealRepeated>(&ec)) {
      CHECK(r->lambda == doctest::Approx(0.5 * tr));
      const double bc = m(0, 1) * m(1, 0);
      CHECK(std::abs(bc + r->eta * r->eta) <
            1e-8 * std::max(1.0, std::abs(bc)));
    } else {
      const auto& cp = std::get<ComplexPair>(ec);
      CHECK(cp.beta > 0.0);
      const double lhs = (cp.alpha - m(0, 0)) * (cp.alpha - m(0, 0)) +
                         m(0, 1) * m(1, 0) + cp.beta * cp.beta;
      CHECK(std::abs(lhs) < 1e-9 * std::max(1.0, std::abs(m(0, 1) * m(1, 0))));
    }
  }
}

TEST_CASE("classify tag is scale consistent") {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int i = 0; i < 500 && checked < 200; ++i) {
    const Mat2 m = hustest::random_box(rng, 2.0);
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = tr * tr - 4.0 * det;
    const double band =
        kClassifyTol * std::max({1.0, tr * tr, std::abs(det)});
    if (std::abs(disc) < 10.0 * band) continue;  // stay off the band
    ++checked;
    const EigenClass ec = classify(m);
    for (double scale : {0.5, 3.0, 117.0}) {
      const EigenClass ecs = classify(Mat2(scale * m));
      CHECK(ec.index() == ecs.index());
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("expm_closed basics") {
  CHECK(entry_diff(expm_closed(Mat2::Zero(), 2.7), Mat2::Identity()) == 0.0);
  CHECK(entry_diff(expm_closed(mk(3, -2, 7, 0.5), 0.0), Mat2::Identity()) == 0.0);

  // quarter turn of the rotation generator
  const Mat2 rot = expm_closed(mk(0, 1, -1, 0), M_PI / 2.0);
  CHECK(entry_diff(rot, mk(0, 1, -1, 0)) < 1e-12);

  CHECK(entry_diff(expm_closed(mk(2, 1, 1, 2), 1.0),
                   expm_series_oracle(mk(2, 1, 1, 2), 1.0)) < 1e-10);
}

TEST_CASE("expm_series_oracle basics") {
  CHECK(entry_diff(expm_series_oracle(Mat2::Zero(), 1.0), Mat2::Identity()) ==
        0.0);
  const Mat2 d = expm_series_oracle(mk(1, 0, 0, -1), std::log(2.0));
  CHECK(entry_diff(d, mk(2, 0, 0, 0.5)) < 1e-12);
}

TEST_CASE("expm_closed agrees with the series oracle across classes") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    Mat2 m;
    switch (i % 4) {
      case 0: m = hustest::random_box(rng, 2.0); break;
      case 1: m = hustest::make_distinct_pos(rng); break;
      case 2: m = hustest::make_repeated(rng); break;
      default: m = hustest::make_complex_stable(rng); break;
    }
    if (mat_inf_norm(m) > 2.0) m *= 2.0 / mat_inf_norm(m);
    const double t = hustest::uniform(rng, -5.0, 5.0);
    CHECK(entry_diff(expm_closed(m, t), expm_series_oracle(m, t)) < 1e-9);
  }
}

TEST_CASE("semigroup and determinant identities") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 200; ++i) {
    const Mat2 m = hustest::random_box(rng, 2.0);
    const double s = hustest::uniform(rng, -3.0, 3.0);
    const double t = hustest::uniform(rng, -3.0, 3.0);
    const Mat2 whole = expm_closed(m, s + t);
    const Mat2 split = expm_closed(m, s) * expm_closed(m, t);
    CHECK(entry_diff(whole, split) <
          1e-8 * std::max(1.0, mat_inf_norm(whole)));

    const Mat2 e = expm_closed(m, t);
    const double de = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    const double expected = std::exp(t * (m(0, 0) + m(1, 1)));
    CHECK(std::abs(de - expected) < 1e-9 * std::max(1.0, expected));
  }
}

TEST_CASE("spectral projections") {
  const Mat2 m = mk(2, -1, 3, -2);
  const auto d = std::get<RealDistinct>(classify(m));
  const ProjectionPair pp = spectral_projections(m, d);
  CHECK(entry_diff(pp.p1, mk(1.5, -0.5, 1.5, -0.5)) < 1e-14);
  CHECK(entry_diff(pp.p2, mk(-0.5, 0.5, -1.5, 1.5)) < 1e-14);

  const Mat2 diag = mk(3, 0, 0, 1);
  const auto dd = std::get<RealDistinct>(classify(diag));
  const ProjectionPair qq = spectral_projections(diag, dd);
  CHECK(entry_diff(qq.p1, mk(1, 0, 0, 0)) < 1e-14);
  CHECK(entry_diff(qq.p2, mk(0, 0, 0, 1)) < 1e-14);

  CHECK_THROWS_AS(spectral_projections(m, RealDistinct{1.0, 1.0}),
                  DegenerateClassError);

  std::mt19937_64 rng(16);
  for (int i = 0; i < 200; ++i) {
    Mat2 r = hustest::random_box(rng, 2.0);
    const EigenClass ec = classify(r);
    const auto* dr = std::get_if<RealDistinct>(&ec);
    if (!dr) continue;
    const ProjectionPair p = spectral_projections(r, *dr);
    const double scale = std::max(1.0, mat_inf_norm(p.p1));
    CHECK(entry_diff(p.p1 + p.p2, Mat2::Identity()) < 1e-12 * scale);
    CHECK(mat_inf_norm(p.p1 * p.p2) < 1e-12 * scale * scale);
    CHECK(mat_inf_norm(p.p2 * p.p1) < 1e-12 * scale * scale);
    CHECK(entry_diff(r * p.p1, dr->lambda1 * p.p1) < 1e-10 * scale);
    CHECK(entry_diff(r * p.p2, dr->lambda2 * p.p2) < 1e-10 * scale);
    // exp(tA) = e^{l1 t} P1 + e^{l2 t} P2
    const double t = hustest::uniform(rng, -2.0, 2.0);
    const Mat2 viaproj = std::exp(dr->lambda1 * t) * p.p1 +
                         std::exp(dr->lambda2 * t) * p.p2;
    const Mat2 direct = expm_closed(r, ec, t);
    CHECK(entry_diff(viaproj, direct) <
          1e-9 * std::max(1.0, mat_inf_norm(direct)) * scale);
  }
}

TEST_CASE("flow integral matches A^{-1}(e^{tA} - I) and quadrature") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 150; ++i) {
    const Mat2 m = hustest::make_stable_any(rng);
    const double t = hustest::uniform(rng, -3.0, 3.0);
    const Mat2 lhs = flow_integral(m, t);
    const Mat2 rhs = inverse2(m) * (expm_closed(m, t) - Mat2::Identity());
    CHECK(entry_diff(lhs, rhs) < 1e-9 * std::max(1.0, mat_inf_norm(rhs)));
  }
  // singular matrix: flow integral still defined
  const Mat2 z = Mat2::Zero();
  CHECK(entry_diff(flow_integral(z, 3.0), 3.0 * Mat2::Identity()) == 0.0);
  const Mat2 n = mk(0, 0, 1, 1);  // eigenvalues 0 and 1
  const Mat2 fi = flow_integral(n, 2.0);
  const Mat2 viaseries = [&] {
    // Simpson on int_0^2 e^{uA} du with the series oracle
    auto f = [&](double u) { return expm_series_oracle(n, u); };
    const int panels = 400;
    const double h = 2.0 / (2 * panels);
    Mat2 acc = f(0.0) + f(2.0);
    for (int i = 1; i < 2 * panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return Mat2(acc * h / 3.0);
  }();
  CHECK(entry_diff(fi, viaseries) < 1e-8);
}

TEST_CASE("exp_flow scalar") {
  CHECK(exp_flow(0.0, 2.5) == 2.5);
  CHECK(exp_flow(1.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(exp_flow(1e-14, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exp_flow(-3.0, 0.5) == doctest::Approx((1.0 - std::exp(-1.5)) / 3.0));
}
