#include <cmath>
#include <functional>

#include "doctest.h"
#include "loopeq/error.hpp"
#include "loopeq/loop.hpp"

using namespace loopeq;

namespace {

ExternalField quartic(double t4) { return build_field(4, {0.0, 0.0, 0.0, t4}, 4, 0); }

LoopHierarchy hierarchy(const ExternalField& f, int g_max, int taylor = 1, int m = 0) {
  LoopOptions o;
  o.g_max = g_max;
  o.taylor_order = taylor;
  o.probe_m = m;
  return solve_hierarchy(f, o);
}

// a^2 = b^2/4 with b^2 + 3 t b^4 = 4
double quartic_a2(double t) { return (-1.0 + std::sqrt(1.0 + 48.0 * t)) / (24.0 * t); }
double e0_closed(double t) {
  double a2 = quartic_a2(t);
  return 0.5 * std::log(a2) + (a2 - 1.0) * (a2 - 9.0) / 24.0;
}
double e1_closed(double t) { return -std::log(2.0 - quartic_a2(t)) / 12.0; }

// d/dt through a complex step
template <class F>
double slope(F f, double t) {
  const double h = 1e-20;
  return f(cplx(t, h)).imag() / h;
}
cplx quartic_a2(cplx t) { return (-1.0 + std::sqrt(1.0 + 48.0 * t)) / (24.0 * t); }
cplx e0_closed(cplx t) {
  cplx a2 = quartic_a2(t);
  return 0.5 * std::log(a2) + (a2 - 1.0) * (a2 - 9.0) / 24.0;
}
cplx e1_closed(cplx t) { return -std::log(2.0 - quartic_a2(t)) / 12.0; }

// Largest |x_a - y_a| / scale_a over jet components a and powers -1..-depth,
// scale_a being the largest |y_a| over those powers. Probe components grow
// geometrically with the probe index, so each is measured on its own scale;
// components along probes beyond max_var are skipped.
double component_error(const LaurentSeries& x, const LaurentSeries& y, int depth, int max_var) {
  double worst = 0.0;
  const SpacePtr& s = y.space();
  for (std::size_t i = 0; i < s->size(); ++i) {
    bool skip = false;
    for (int j = max_var; j < s->num_vars(); ++j) skip = skip || s->exponents(i)[j] != 0;
    if (skip) continue;
    double scale = 0.0, err = 0.0;
    for (int p = -1; p >= -depth; --p) {
      scale = std::max(scale, std::abs(y.coeff(p)[i]));
      err = std::max(err, std::abs(x.coeff(p)[i] - y.coeff(p)[i]));
    }
    if (scale > 0.0) worst = std::max(worst, err / scale);
    else worst = std::max(worst, err);
  }
  return worst;
}

// Largest |[z^0] f_a|, |[z^-1] f_a| relative to the component's scale at -2..-depth.
double head_leak(const AlgebraicFn& f, int depth) {
  LaurentSeries L = laurent_expand(f, depth);
  double worst = 0.0;
  for (std::size_t i = 0; i < L.space()->size(); ++i) {
    double scale = 0.0;
    for (int p = -2; p >= -depth; --p) scale = std::max(scale, std::abs(L.coeff(p)[i]));
    double head = std::max(std::abs(L.coeff(0)[i]), std::abs(L.coeff(-1)[i]));
    worst = std::max(worst, scale > 0.0 ? head / scale : head);
  }
  return worst;
}

}  // namespace

TEST_CASE("vertex operator") {
  ExternalField f = build_field(2, {0.0, 0.0}, 6, 2);
  Cut cut{-2.0, 2.0};
  AlgebraicFn one = AlgebraicFn::constant(f.space, cut, 1.0);
  AlgebraicFn d1 = vertex_derivative(one);
  CHECK(d1.is_zero());
  CHECK(d1.space()->order() == 1);

  LoopHierarchy h = hierarchy(f, 2, 1, 6);
  const AlgebraicFn& P0 = h.levels[0];
  AlgebraicFn twice = vertex_derivative(P0 * 2.0);
  AlgebraicFn sum = vertex_derivative(P0) + vertex_derivative(P0);
  LaurentSeries a = laurent_expand(twice, 10), b = laurent_expand(sum, 10);
  for (int p = -1; p >= -10; --p) CHECK((a.coeff(p) - b.coeff(p)).max_abs() < 1e-12);

  // d/dV P_0 at t = 0 is the planar two-point function 1/(z^2-4)^2 at coincident points
  LaurentSeries w = laurent_expand(vertex_derivative(P0), 10);
  const double want[] = {1.0, 8.0, 48.0};
  for (int k = 0; k < 3; ++k) CHECK(std::abs(w.coeff(-4 - 2 * k).value() - want[k]) < 1e-12);

  AlgebraicFn flat = AlgebraicFn::constant(JetSpace::get(2, 0), cut, 1.0);
  CHECK_THROWS_AS(vertex_derivative(flat), Error);
}

TEST_CASE("Gaussian levels reproduce gluing counts") {
  LoopHierarchy h = hierarchy(quartic(0.0), 2);
  auto p1 = laurent_table(h.levels[1], 12);
  CHECK(std::abs(p1[4] - 1.0) < 1e-12);
  CHECK(std::abs(p1[6] - 10.0) < 1e-12);
  CHECK(std::abs(p1[8] - 70.0) < 1e-12);
  auto p2 = laurent_table(h.levels[2], 12);
  CHECK(std::abs(p2[8] - 21.0) < 1e-10);
  for (int g = 1; g <= 2; ++g) {
    LaurentSeries L = laurent_expand(h.levels[g], 2);
    CHECK(L.coeff(0).max_abs() < 1e-12);
    CHECK(L.coeff(-1).max_abs() < 1e-12);
  }
  // P_1 = (z^2 - 4)^(-5/2) in closed form
  LoopHierarchy wide = hierarchy(quartic(0.0), 1, 1, 60);
  for (cplx z : {cplx(0.0, 4.0), cplx(5.0, 1.0)}) {
    cplx want = 1.0 / std::pow(std::sqrt(z - 2.0) * std::sqrt(z + 2.0), 5);
    CHECK(std::abs(alg_eval(wide.levels[1], z).value() - want) < 1e-10 * std::abs(want));
  }
}

TEST_CASE("e_g derivatives at the Gaussian point") {
  LoopHierarchy h = hierarchy(quartic(0.0), 1);
  EgDerivativeTable t = extract_eg_derivatives(h);
  CHECK(std::abs(t.entries[0][3] + 2.0) < 1e-12);
  CHECK(std::abs(t.entries[1][3] + 1.0) < 1e-12);
  CHECK(std::abs(t.entries[0][1] + 1.0) < 1e-12);
  for (int g = 0; g <= 1; ++g)
    for (int j : {1, 3}) CHECK(std::abs(t.entries[g][j - 1]) < 1e-14);

  LoopHierarchy shallow = hierarchy(quartic(0.0), 0);
  shallow.laurent_depth = 4;
  CHECK_THROWS_AS(extract_eg_derivatives(shallow), Error);
}

TEST_CASE("quartic levels against closed forms") {
  double t = 0.05;
  LoopHierarchy h = hierarchy(quartic(t), 2, 2);
  EgDerivativeTable tab = extract_eg_derivatives(h);
  auto e0 = [](cplx x) { return e0_closed(x); };
  auto e1 = [](cplx x) { return e1_closed(x); };
  CHECK(std::abs(tab.entries[0][3] - slope(e0, t)) < 1e-10);
  CHECK(std::abs(tab.entries[1][3] - slope(e1, t)) < 1e-10);
  // second derivatives through the jet components
  double step = 2e-4;
  for (int g = 0; g <= 1; ++g) {
    auto eg = g == 0 ? std::function<cplx(cplx)>(e0) : std::function<cplx(cplx)>(e1);
    auto d1 = [&](double x) { return slope(eg, x); };
    double d2 = (8.0 * (d1(t + step) - d1(t - step)) - (d1(t + 2 * step) - d1(t - 2 * step))) / (12.0 * step);
    CHECK(std::abs(2.0 * tab.taylor[g].at({0, 0, 0, 2}) - d2) < 1e-8 * std::abs(d2));
  }
  CHECK(tab.mixed_partial_asymmetry[0] < 1e-11);
  CHECK(tab.mixed_partial_asymmetry[1] < 1e-8);
  CHECK(tab.mixed_partial_asymmetry[2] < 1e-4);

  for (int g = 1; g <= 2; ++g) {
    CHECK(head_leak(h.levels[g], h.laurent_depth) < 1e-6);
    CHECK(h.regularity_residuals[g] < 1e-8);
  }
}

TEST_CASE("projection identity [M P_g]_- = [U_g]_-") {
  for (double t : {0.0, 0.05}) {
    LoopHierarchy h = hierarchy(quartic(t), 2);
    int L = h.laurent_depth;
    for (int g = 1; g <= 2; ++g) {
      AlgebraicFn M = h.op.in_space(h.levels[g].space()).full();
      LaurentSeries lhs = laurent_expand(M * h.levels[g], L);
      LaurentSeries rhs = laurent_expand(h.sources[g], L);
      // regularity at the roots of h costs about (|z_i|/beta)^j digits along probe j
      CHECK(component_error(lhs, rhs, L, 16) <= 1e-8);
    }
  }
}

TEST_CASE("probe-count stability") {
  ExternalField f = quartic(0.05);
  LoopHierarchy a = hierarchy(f, 2);
  LoopHierarchy b = hierarchy(f, 2, 1, a.field.probe_m + 2);
  // roundoff in the higher probe components limits genus 2
  const double tol[] = {1e-12, 1e-9, 1e-4};
  for (int g = 0; g <= 2; ++g) {
    auto ta = laurent_table(a.levels[g], a.laurent_depth), tb = laurent_table(b.levels[g], a.laurent_depth);
    double scale = 0.0;
    for (auto c : ta) scale = std::max(scale, std::abs(c));
    for (std::size_t p = 0; p < ta.size(); ++p) CHECK(std::abs(ta[p] - tb[p]) <= tol[g] * scale);
  }
}

TEST_CASE("Taylor data of e_0 and panel chaining") {
  LoopHierarchy h = hierarchy(quartic(0.0), 0, 4);
  EgDerivativeTable t = extract_eg_derivatives(h);
  CHECK(std::abs(t.taylor[0].at({0, 0, 0, 1}) + 2.0) < 1e-10);
  CHECK(std::abs(t.taylor[0].at({0, 0, 0, 2}) - 18.0) < 1e-9);
  CHECK(std::abs(t.taylor[0].at({0, 0, 0, 3}) + 288.0) < 1e-7);
  CHECK(std::abs(t.taylor[0].at({0, 0, 0, 4}) - 6048.0) < 1e-6);
  // e_0 = -log(1 + 2 t_2)/2 along t_2
  CHECK(std::abs(t.taylor[0].at({0, 2, 0, 0}) - 1.0) < 1e-12);

  auto e = eg_by_panels(quartic(0.01), 1, 4, 32);
  CHECK(std::abs(e[0] - e0_closed(0.01)) < 1e-9);
  CHECK(std::abs(e[1] - e1_closed(0.01)) < 1e-9);
}

TEST_CASE("refusals") {
  // h's roots approach the cut as the quartic well turns double
  ExternalField near = build_field(4, {0.0, -0.49, 0.0, 0.05}, 4, 0);
  CHECK_THROWS_AS(hierarchy(near, 1), Error);
  CHECK_THROWS_AS(hierarchy(quartic(0.05), -1), Error);
}
