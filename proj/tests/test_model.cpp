#include <cmath>
#include <random>

#include "doctest.h"
#include "loopeq/error.hpp"
#include "loopeq/model.hpp"

using namespace loopeq;

TEST_CASE("building fields") {
  ExternalField g = build_field(2, {0.0, 0.0}, 8, 2);
  CHECK(g.gaussian());
  CHECK(g.space->num_vars() == 8);
  CHECK(g.space->order() == 2);
  Jet t5 = g.coupling(5);
  CHECK(t5.value() == cplx(0.0));
  CHECK(t5[g.space->index_of_var(4)] == cplx(1.0));

  ExternalField q = build_field(4, {0.0, 0.0, 0.0, 0.1}, 10, 2);
  CHECK(!q.gaussian());
  CHECK(q.t(4) == 0.1);
  CHECK(q.t(7) == 0.0);
  CHECK(std::abs(q.potential(2.0) - (2.0 + 1.6)) < 1e-15);
  CHECK(std::abs(q.potential_derivative(2.0) - (2.0 + 3.2)) < 1e-15);

  CHECK_THROWS_AS(build_field(4, {0.0, 0.0, 0.0, -0.1}, 10, 2), Error);
  CHECK_THROWS_AS(build_field(4, {0.0, 0.0, 0.0, 0.1}, 3, 2), Error);
  CHECK_THROWS_AS(build_field(3, {0.0, 0.0, 0.1}, 6, 2), Error);
  try {
    build_field(4, {0.0, 0.0, 0.0, -0.1}, 10, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }
}

TEST_CASE("admissibility") {
  AdmissibilityParams p;
  CHECK(admissibility_check(build_field(4, {0.0, 0.0, 0.0, 0.1}, 4, 0), p).ok);
  Admissibility bad = admissibility_check(build_field(4, {0.5, 0.0, 0.0, 0.1}, 4, 0), p);
  CHECK(!bad.ok);
  Admissibility gauss = admissibility_check(build_field(2, {0.0, 0.0}, 2, 0), p);
  CHECK(gauss.ok);
  CHECK(gauss.reason == "Gaussian closure point");
  CHECK(!admissibility_check(build_field(4, {0.0, 0.0, 0.0, 1.5}, 4, 0), p).ok);

  // shrinking lower couplings never loses admissibility
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t = {u(rng), u(rng), u(rng), 0.05 + std::abs(u(rng))};
    bool before = admissibility_check(build_field(4, t, 4, 0), p).ok;
    for (int j = 0; j < 3; ++j) t[j] *= 0.6;
    if (before) CHECK(admissibility_check(build_field(4, t, 4, 0), p).ok);
  }
}

TEST_CASE("V prime") {
  ExternalField g = build_field(2, {0.0, 0.0}, 6, 1);
  PolyZ vg = v_prime(g);
  CHECK(vg.degree0() == 1);
  CHECK(vg.coeff(1).value() == cplx(1.0));
  CHECK(int(vg.size()) == 6);
  // probe term j dt_j z^(j-1)
  CHECK(vg.coeff(5)[g.space->index_of_var(5)] == cplx(6.0));

  ExternalField q = build_field(4, {0.0, 0.0, 0.0, 0.1}, 10, 1);
  PolyZ vq = v_prime(q);
  CHECK(vq.degree0() == 3);
  CHECK(std::abs(vq.coeff(3).value() - 0.4) < 1e-16);
  CHECK(vq.coeff(1).value() == cplx(1.0));
  PolyZ tq = vq;
  CHECK(tq.trim().size() == 10);

  ExternalField s = build_field(2, {0.3, 0.5}, 2, 0);
  CHECK(std::abs(v_prime(s).coeff(0).value() - 0.3) < 1e-16);
}
