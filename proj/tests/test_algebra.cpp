#include <cmath>
#include <random>

#include "doctest.h"
#include "loopeq/algebra.hpp"
#include "loopeq/error.hpp"

using namespace loopeq;

namespace {

const Cut kSemi{-2.0, 2.0};

AlgebraicFn zpoly(SpacePtr s, Cut cut, CPoly p) { return AlgebraicFn::from_poly(PolyZ(s, p), cut); }

// (z - R)/2 on the semicircle cut.
AlgebraicFn catalan_fn(SpacePtr s) {
  AlgebraicFn f = zpoly(s, kSemi, {0.0, 0.5});
  f.b = PolyZ(s, CPoly{-0.5});
  return f;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

PolyZ random_poly(SpacePtr s, int deg, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolyZ p(s, std::size_t(deg + 1));
  for (int k = 0; k <= deg; ++k)
    for (auto& c : p[k].coeffs()) c = cplx(u(rng), u(rng));
  return p;
}

AlgebraicFn random_fn(SpacePtr s, Cut cut, std::mt19937& rng) {
  AlgebraicFn f(s, cut);
  f.a = random_poly(s, 2, rng);
  f.b = random_poly(s, 1, rng);
  f.d = Denominator::from_roots({cplx(0.3, 0.2), cplx(-0.5, 0.0), cut.alpha});
  return f;
}

}  // namespace

TEST_CASE("field arithmetic identities") {
  SpacePtr s = JetSpace::scalar();
  AlgebraicFn R = AlgebraicFn::r0(s, kSemi);
  AlgebraicFn rr = R * R;
  CHECK(rr.b.is_zero());
  CHECK(rr.a.coeff(0).value() == cplx(-4.0));
  CHECK(rr.a.coeff(1).value() == cplx(0.0));
  CHECK(rr.a.coeff(2).value() == cplx(1.0));

  AlgebraicFn inv = AlgebraicFn::constant(s, kSemi, 1.0) / R;
  AlgebraicFn one = inv * R;
  for (cplx z : {cplx(3.0), cplx(0.5, 2.0), cplx(-7.0, -1.0)}) CHECK(rel(alg_eval(one, z).value(), 1.0) < 1e-14);
  LaurentSeries ls = laurent_expand(one, 6);
  CHECK(std::abs(ls.coeff(0).value() - 1.0) < 1e-14);
  for (int p = -1; p >= -6; --p) CHECK(std::abs(ls.coeff(p).value()) < 1e-13);

  AlgebraicFn zm = catalan_fn(s);
  AlgebraicFn zp = zpoly(s, kSemi, {0.0, 0.5});
  zp.b = PolyZ(s, CPoly{0.5});
  AlgebraicFn prod = zm * zp;
  CHECK(prod.b.is_zero());
  CHECK(std::abs(prod.a.coeff(0).value() - 1.0) < 1e-15);
  CHECK(std::abs(prod.a.coeff(1).value()) < 1e-15);
  CHECK(std::abs(prod.a.coeff(2).value()) < 1e-15);
}

TEST_CASE("Laurent expansion of the branch and of F") {
  SpacePtr s = JetSpace::scalar();
  AlgebraicFn R = AlgebraicFn::r0(s, kSemi);
  LaurentSeries ls = laurent_expand(R, 7);
  const double want[] = {1.0, 0.0, -2.0, 0.0, -2.0, 0.0, -4.0, 0.0, -10.0};
  for (int i = 0; i < 9; ++i) CHECK(std::abs(ls.coeff(1 - i).value() - want[i]) < 1e-13);
  // partial sum against direct evaluation at |z| = 10
  cplx z(0.0, 10.0), partial = 0.0;
  for (int p = 1; p >= -7; --p) partial += ls.coeff(p).value() * std::pow(z, p);
  CHECK(rel(partial, alg_eval(R, z).value()) < 1e-8);

  LaurentSeries c = laurent_expand(AlgebraicFn::constant(s, kSemi, 2.5), 4);
  CHECK(c.coeff(0).value() == cplx(2.5));
  for (int p = -1; p >= -4; --p) CHECK(c.coeff(p).value() == cplx(0.0));

  LaurentSeries f = laurent_expand(catalan_fn(s), 15);
  const double catalan[] = {1, 1, 2, 5, 14, 42, 132, 429};
  for (int j = 0; j < 8; ++j) {
    CHECK(std::abs(f.coeff(-2 * j - 1).value() - catalan[j]) < 1e-10);
    CHECK(std::abs(f.coeff(-2 * j - 2).value()) < 1e-10);
  }
  CHECK(std::abs(f.coeff(0).value()) < 1e-14);
  CHECK(std::abs(f.coeff(1).value()) < 1e-14);
}

TEST_CASE("plus/minus projection") {
  SpacePtr s = JetSpace::scalar();
  LaurentSeries a(s, 3, 4);
  a.at(3) = Jet(s, 1.0);
  a.at(-1) = Jet(s, 1.0);
  Parts p = project_parts(a);
  CHECK(p.plus.coeff(3).value() == cplx(1.0));
  CHECK(p.plus.coeff(0).value() == cplx(0.0));
  CHECK(p.minus.coeff(-1).value() == cplx(1.0));
  CHECK(p.minus.coeff(3).value() == cplx(0.0));

  LaurentSeries poly = laurent_expand(zpoly(s, kSemi, {1.0, 2.0, 3.0}), 5);
  Parts q = project_parts(poly);
  for (int k = -1; k >= -5; --k) CHECK(q.minus.coeff(k).value() == cplx(0.0));

  // R * (z^2-4)^(-5/2) = (z^2-4)^(-2) has no polynomial part
  AlgebraicFn P(s, kSemi);
  P.b = PolyZ(s, CPoly{1.0});
  P.d = Denominator::from_roots({-2.0, 2.0}).power(3);
  LaurentSeries pl = laurent_expand(P, 9);
  CHECK(std::abs(pl.coeff(-5).value() - 1.0) < 1e-12);
  CHECK(std::abs(pl.coeff(-7).value() - 10.0) < 1e-12);
  CHECK(std::abs(pl.coeff(-9).value() - 70.0) < 1e-11);
  Parts rp = project_parts(laurent_expand(AlgebraicFn::r0(s, kSemi) * P, 9));
  for (int k = 0; k < int(rp.plus.size()); ++k) CHECK(std::abs(rp.plus[k].value()) < 1e-12);
  CHECK(std::abs(rp.minus.coeff(-4).value() - 1.0) < 1e-12);

  // idempotence and linearity
  std::mt19937 rng(1);
  SpacePtr js = JetSpace::get(2, 2);
  LaurentSeries u = laurent_expand(random_fn(js, kSemi, rng), 8);
  LaurentSeries v = laurent_expand(random_fn(js, kSemi, rng), 8);
  Parts pu = project_parts(u);
  Parts again = project_parts(pu.minus);
  for (int k = -1; k >= -8; --k) CHECK(again.minus.coeff(k).coeffs() == pu.minus.coeff(k).coeffs());
  CHECK(again.plus.is_zero());
  Parts sum = project_parts(u + v), pv = project_parts(v);
  for (int k = -1; k >= -8; --k)
    CHECK((sum.minus.coeff(k) - pu.minus.coeff(k) - pv.minus.coeff(k)).max_abs() < 1e-13 * (1.0 + u.coeff(k).max_abs()));
}

TEST_CASE("evaluation") {
  SpacePtr s = JetSpace::scalar();
  AlgebraicFn R = AlgebraicFn::r0(s, kSemi);
  CHECK(rel(alg_eval(R, 3.0).value(), std::sqrt(5.0)) < 1e-15);
  CHECK(rel(alg_eval(R, cplx(0.0, 1e6)).value() / cplx(0.0, 1e6), 1.0) < 1e-11);
  CHECK(rel(alg_eval(R, -3.0).value(), -std::sqrt(5.0)) < 1e-15);
  AlgebraicFn F = catalan_fn(s);
  double partial = 0.0, cj = 1.0;
  for (int j = 0; j < 40; ++j) {
    partial += cj * std::pow(3.0, -2 * j - 1);
    cj = cj * 2.0 * (2 * j + 1) / (j + 2);
  }
  cplx v = alg_eval(F, 3.0).value();
  CHECK(std::abs(v - (3.0 - std::sqrt(5.0)) / 2.0) < 1e-15);
  CHECK(std::abs(v - partial) < 1e-14);
  // upper-edge boundary value R+ = i sqrt(4 - x^2)
  CHECK(rel(kSemi.r0(cplx(1.0, 1e-300)), cplx(0.0, std::sqrt(3.0))) < 1e-15);

  CHECK_THROWS_AS(alg_eval(R, cplx(1.0, 1e-9)), Error);
  AlgebraicFn pole = AlgebraicFn::constant(s, kSemi, 1.0).over(Denominator::from_roots({3.0}));
  CHECK_THROWS_AS(alg_eval(pole, cplx(3.0 + 1e-10)), Error);
}

TEST_CASE("evaluation far out agrees with the Laurent partial sum") {
  std::mt19937 rng(2);
  SpacePtr s = JetSpace::get(2, 2);
  for (int trial = 0; trial < 5; ++trial) {
    AlgebraicFn f = random_fn(s, {-1.3, 2.1}, rng);
    LaurentSeries ls = laurent_expand(f, 12);
    cplx z = std::polar(1e3, 0.7 + trial);
    Jet sum(s);
    for (int p = ls.top_power(); p >= -12; --p) sum += ls.coeff(p) * std::pow(z, p);
    Jet v = alg_eval(f, z);
    CHECK((sum - v).max_abs() <= 1e-10 * v.max_abs());
  }
}

TEST_CASE("Laurent expansion of a product is the Cauchy product") {
  std::mt19937 rng(4);
  SpacePtr s = JetSpace::get(3, 2);
  Cut cut{-1.7, 2.4};
  for (int trial = 0; trial < 5; ++trial) {
    AlgebraicFn f = random_fn(s, cut, rng), g = random_fn(s, cut, rng);
    int L = 14;
    LaurentSeries direct = laurent_expand(f * g, L);
    LaurentSeries cauchy = laurent_expand(f, L) * laurent_expand(g, L);
    CHECK(cauchy.depth() >= 10);
    for (int p = cauchy.top_power(); p >= -std::min(cauchy.depth(), direct.depth()); --p) {
      Jet a = direct.coeff(p), b = cauchy.coeff(p);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10 * std::max(1.0, std::abs(b[i])));
    }
  }
}

TEST_CASE("division and the jet branch") {
  std::mt19937 rng(9);
  SpacePtr s = JetSpace::get(2, 2);
  Cut cut{-2.0, 2.0};
  AlgebraicFn f = random_fn(s, cut, rng), g = random_fn(s, cut, rng);
  AlgebraicFn q = f / g;
  for (cplx z : {cplx(3.0, 1.0), cplx(-0.7, 2.2)}) {
    Jet lhs = alg_eval(q * g, z), rhs = alg_eval(f, z);
    CHECK((lhs - rhs).max_abs() <= 1e-9 * rhs.max_abs());
  }
  CHECK_THROWS_AS(f / AlgebraicFn(s, cut), Error);

  // R with moving branch points squares to (z - alpha)(z - beta)
  Jet alpha = Jet::variable(s, 0, -2.0) * 1.0, beta = Jet::variable(s, 1, 2.0) + Jet::variable(s, 0, 0.0) * 0.5;
  AlgebraicFn R = AlgebraicFn::branch({alpha, beta}, s);
  cplx z(1.5, 0.8);
  Jet want = sqrt((Jet(s, z) - alpha) * (Jet(s, z) - beta), cut.r0(z));
  CHECK((alg_eval(R, z) - want).max_abs() < 1e-13);
}

TEST_CASE("limits at removable denominator roots") {
  SpacePtr s = JetSpace::get(1, 3);
  Cut cut{-2.0, 2.0};
  // f = (z - 3)^2 R0 g / (z - 3)^2 with g = 1 + t z
  Jet t = Jet::variable(s, 0, 0.0);
  AlgebraicFn f(s, cut);
  PolyZ g(s, 2);
  g[0] = Jet(s, 1.0);
  g[1] = t;
  f.b = g * CPoly{9.0, -6.0, 1.0};
  f.d = Denominator::from_roots({3.0, 3.0, cplx(0.0, 1.0)});
  Jet z0 = Jet(s, 3.0) + t * 0.25;
  LimitValue lv = alg_eval_limit(f, 3.0, z0);
  Jet want = g.eval(z0) * cut.r0(z0) / (z0 - cplx(0.0, 1.0));
  CHECK((lv.value - want).max_abs() < 1e-12);
  CHECK(lv.residual < 1e-14);
}

TEST_CASE("polynomial roots and lifting") {
  SpacePtr s0 = JetSpace::scalar();
  auto r = poly_roots_lifted(PolyZ(s0, CPoly{-1.0, 0.0, 1.0}));
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0].value() + 1.0) < 1e-15);
  CHECK(std::abs(r[1].value() - 1.0) < 1e-15);

  PolyZ q(s0, CPoly{1.4694, 0.0, 0.4});
  auto rq = poly_roots_lifted(q);
  REQUIRE(rq.size() == 2);
  double y = std::sqrt(1.4694 / 0.4);
  CHECK(std::abs(rq[0].value() - cplx(0.0, -y)) < 1e-14);
  CHECK(std::abs(rq[1].value() - cplx(0.0, y)) < 1e-14);
  for (auto& z : rq) CHECK(std::abs(cpoly_eval(q.order0(), z.value())) < 1e-12);

  SpacePtr s1 = JetSpace::get(1, 1);
  PolyZ lin(s1, 2);
  lin[0] = -Jet::variable(s1, 0, 0.0);
  lin[1] = Jet(s1, 1.0);
  auto rl = poly_roots_lifted(lin);
  REQUIRE(rl.size() == 1);
  CHECK(std::abs(rl[0].value()) < 1e-15);
  CHECK(std::abs(rl[0].coeff({1}) - 1.0) < 1e-15);

  // residual at every jet order for a jet cubic
  std::mt19937 rng(8);
  SpacePtr s3 = JetSpace::get(2, 3);
  PolyZ p = random_poly(s3, 3, rng);
  for (auto& z : poly_roots_lifted(p)) CHECK(p.eval(z).max_abs() <= 1e-10);

  CHECK_THROWS_AS(poly_roots_lifted(PolyZ(s0, CPoly{1.0, -2.0, 1.0})), Error);
}
