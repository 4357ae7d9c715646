#include <cmath>
#include <numbers>

#include "doctest.h"
#include "loopeq/equilibrium.hpp"
#include "loopeq/error.hpp"
#include "loopeq/quadrature.hpp"

using namespace loopeq;

namespace {

const double kPi = std::numbers::pi;

double quartic_b(double t) { return std::sqrt((-1.0 + std::sqrt(1.0 + 48.0 * t)) / (6.0 * t)); }

// A field whose couplings need not be admissible (finite differences, shifts).
ExternalField raw_field(int upsilon, std::vector<double> t, int m, int K) {
  ExternalField f = build_field(upsilon, std::vector<double>(upsilon, 0.0), m, K);
  t.resize(upsilon, 0.0);
  f.t_phys = t;
  return f;
}

// Endpoint integrals by Gauss-Chebyshev (first kind) quadrature.
std::array<double, 2> endpoint_integrals(const ExternalField& f, double a, double b, int n) {
  double c = 0.5 * (a + b), r = 0.5 * (b - a);
  std::array<double, 2> out{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    double s = c + r * std::cos((i + 0.5) * kPi / n);
    out[0] += f.potential_derivative(s) * kPi / n;
    out[1] += s * f.potential_derivative(s) * kPi / n;
  }
  return out;
}

}  // namespace

TEST_CASE("Gaussian equilibrium") {
  ExternalField f = build_field(2, {0.0, 0.0}, 4, 1);
  EquilibriumMeasure eq = solve_equilibrium(f);
  CHECK(std::abs(eq.cut().alpha + 2.0) < 1e-14);
  CHECK(std::abs(eq.cut().beta - 2.0) < 1e-14);
  PolyZ h = eq.h;
  CHECK(h.degree0() == 0);
  CHECK(std::abs(h.coeff(0).value() - 1.0) < 1e-14);
  CHECK(std::abs(density_psi(eq, 0.0) - 1.0 / kPi) < 1e-15);
  CHECK(density_psi(eq, 2.0) == 0.0);
  CHECK(density_psi(eq, 2.5) == 0.0);
  CHECK(eq.residuals.endpoint <= 1e-10);
  CHECK(eq.residuals.endpoint_jet <= 1e-10);
  CHECK(eq.residuals.mass <= 1e-10);
}

TEST_CASE("quartic equilibrium") {
  double t = 0.1, b = quartic_b(t);
  CHECK(std::abs(b * b + 3 * t * std::pow(b, 4) - 4.0) < 1e-13);
  CHECK(std::abs(b - 1.53206) < 1e-5);
  ExternalField f = build_field(4, {0.0, 0.0, 0.0, t}, 6, 2);
  EquilibriumMeasure eq = solve_equilibrium(f);
  CHECK(std::abs(eq.cut().beta - b) < 1e-12);
  CHECK(std::abs(eq.cut().alpha + b) < 1e-12);
  auto ints = endpoint_integrals(f, -b, b, 64);
  CHECK(std::abs(ints[0]) < 1e-10);
  CHECK(std::abs(ints[1] - 2.0 * kPi) < 1e-10);

  CHECK(eq.h.degree0() == 2);
  CHECK(std::abs(eq.h.coeff(2).value() - 4.0 * t) < 1e-13);
  CHECK(std::abs(eq.h.coeff(1).value()) < 1e-13);
  CHECK(std::abs(eq.h.coeff(0).value() - (1.0 + 2.0 * t * b * b)) < 1e-13);

  // h against the circle integral (1/2 pi i) oint V'(s) / (R(s) (s - z)) ds
  for (cplx z : {cplx(0.7), cplx(-0.3, 0.4)}) {
    int n = 512;
    double rho = 4.0;
    cplx sum = 0.0;
    for (int k = 0; k < n; ++k) {
      cplx s = std::polar(rho, 2.0 * kPi * k / n);
      sum += (s + 4.0 * t * s * s * s) / (eq.cut().r0(s) * (s - z)) * s;
    }
    sum /= double(n);
    CHECK(std::abs(sum - eq.h.order0().at(0) - eq.h.order0().at(2) * z * z) < 1e-10);
  }

  double psi0 = b / (2 * kPi) * (1 + 2 * t * b * b);
  CHECK(std::abs(density_psi(eq, 0.0) - psi0) < 1e-14);
  CHECK(eq.residuals.mass <= 1e-10);
  CHECK(eq.residuals.h_min > 0.0);
}

TEST_CASE("translated semicircle") {
  double s = 0.3;
  ExternalField f = raw_field(2, {s, 0.0}, 4, 1);
  EquilibriumMeasure eq = solve_equilibrium(f);
  CHECK(std::abs(eq.cut().alpha - (-2.0 - s)) < 1e-13);
  CHECK(std::abs(eq.cut().beta - (2.0 - s)) < 1e-13);
  CHECK(eq.h.degree0() == 0);
  CHECK(std::abs(eq.h.coeff(0).value() - 1.0) < 1e-13);
}

TEST_CASE("normalization identity and jump condition") {
  for (auto t : {std::vector<double>{0.0, 0.0, 0.0, 0.05}, std::vector<double>{0.02, -0.03, 0.01, 0.08},
                 std::vector<double>{0.0, 0.0, 0.0, 0.0, 0.0, 0.02}}) {
    int ups = int(t.size());
    ExternalField f = build_field(ups, t, ups + 2, 1);
    EquilibriumMeasure eq = solve_equilibrium(f);
    CHECK(eq.residuals.normalization_poly <= 1e-10);
    CHECK(eq.residuals.normalization_mass <= 1e-10);
    CHECK(eq.residuals.endpoint <= 1e-10);
    CHECK(eq.residuals.mass <= 1e-10);

    AlgebraicFn F = resolvent_p0(eq, f);
    LaurentSeries ls = laurent_expand(F, 6);
    for (int p = 0; p <= ls.top_power(); ++p) CHECK(ls.coeff(p).max_abs() < 1e-10);
    CHECK(std::abs(ls.coeff(-1).value() - 1.0) < 1e-10);

    Cut cut = eq.cut();
    for (int i = 1; i < 16; ++i) {
      double x = cut.alpha + (cut.beta - cut.alpha) * i / 16.0;
      cplx rp(0.0, std::sqrt((x - cut.alpha) * (cut.beta - x)));
      cplx d = F.d.eval(x);
      cplx fp = (F.a.eval(x).value() + F.b.eval(x).value() * rp) / d;
      cplx fm = (F.a.eval(x).value() - F.b.eval(x).value() * rp) / d;
      CHECK(std::abs(fp + fm - f.potential_derivative(x)) < 1e-10);
      CHECK(density_psi(eq, x) >= 0.0);
      // psi = -(1/pi) Im F+
      CHECK(std::abs(-fp.imag() / kPi - density_psi(eq, x)) < 1e-12);
    }
  }
  ExternalField g = build_field(2, {0.0, 0.0}, 2, 0);
  EquilibriumMeasure eg = solve_equilibrium(g);
  AlgebraicFn F = resolvent_p0(eg, g);
  LaurentSeries ls = laurent_expand(F, 9);
  const double catalan[] = {1, 1, 2, 5, 14};
  for (int j = 0; j < 5; ++j) CHECK(std::abs(ls.coeff(-2 * j - 1).value() - catalan[j]) < 1e-12);
}

TEST_CASE("variational conditions") {
  ExternalField g = build_field(2, {0.0, 0.0}, 2, 0);
  EquilibriumMeasure eg = solve_equilibrium(g);
  VariationalReport rg = lagrange_and_variational_check(eg, g, interior_grid(eg), exterior_grid(eg));
  CHECK(std::abs(rg.l - 1.0) < 1e-8);
  CHECK(rg.max_eq_dev <= 1e-8);
  CHECK(rg.min_ineq_margin > 0.0);
  CHECK(effective_potential(eg, g, 3.0) - 1.0 > 0.0);

  ExternalField q = build_field(4, {0.01, 0.0, 0.02, 0.1}, 4, 0);
  EquilibriumMeasure eq = solve_equilibrium(q);
  VariationalReport rs = lagrange_and_variational_check(eq, q, interior_grid(eq), exterior_grid(eq), false);
  VariationalReport rp = lagrange_and_variational_check(eq, q, interior_grid(eq), exterior_grid(eq), true);
  CHECK(rs.max_eq_dev <= 1e-8);
  CHECK(rs.min_ineq_margin > 0.0);
  CHECK(rs.l == rp.l);
  CHECK_THROWS(lagrange_and_variational_check(eq, q, {}, {}));
}

TEST_CASE("endpoint jets match finite differences") {
  std::vector<double> t = {0.02, -0.01, 0.015, 0.1};
  int m = 6;
  ExternalField f = build_field(4, t, m, 2);
  BranchRoot br = solve_endpoints(f);
  double step = 1e-5;
  for (int j = 1; j <= m; ++j) {
    std::vector<double> tp = t, tm = t;
    tp.resize(m, 0.0);
    tm.resize(m, 0.0);
    tp[j - 1] += step;
    tm[j - 1] -= step;
    Cut cp = solve_endpoints(raw_field(m, tp, m, 0)).cut();
    Cut cm = solve_endpoints(raw_field(m, tm, m, 0)).cut();
    double da = (cp.alpha - cm.alpha) / (2 * step), db = (cp.beta - cm.beta) / (2 * step);
    std::vector<std::uint8_t> e(m, 0);
    e[j - 1] = 1;
    CHECK(std::abs(derivative(br.alpha, e).real() - da) <= 1e-6 * std::abs(da));
    CHECK(std::abs(derivative(br.beta, e).real() - db) <= 1e-6 * std::abs(db));
  }
  // symmetric quartic: db/dt from b^2 + 3 t b^4 = 4
  double tq = 0.1, b = quartic_b(tq);
  ExternalField q = build_field(4, {0.0, 0.0, 0.0, tq}, 4, 1);
  BranchRoot bq = solve_endpoints(q);
  double want = -3.0 * std::pow(b, 4) / (2.0 * b + 12.0 * tq * b * b * b);
  CHECK(std::abs(derivative(bq.beta, {0, 0, 0, 1}).real() - want) < 1e-12);
}

TEST_CASE("outside the one-cut regime") {
  // deep double well: V = x^2/2 - 2 x^4... needs t4 > 0, so use a strong negative t2
  ExternalField f = raw_field(4, {0.0, -3.0, 0.0, 0.05}, 4, 0);
  CHECK_THROWS_AS(solve_equilibrium(f), Error);
}
