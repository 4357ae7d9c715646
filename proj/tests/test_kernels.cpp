#include <cmath>
#include <vector>

#include "doctest.h"
#include "loopeq/error.hpp"
#include "loopeq/kernels.hpp"
#include "loopeq/oracles.hpp"

using namespace loopeq;

namespace {

ExternalField quartic(double t4) { return build_field(4, {0.0, 0.0, 0.0, t4}, 4, 0); }

}  // namespace

TEST_CASE("genus histogram is identical serial and parallel") {
  for (int j = 1; j <= 7; ++j) CHECK(genus_histogram(j, Exec::serial) == genus_histogram(j, Exec::parallel));
  CHECK(genus_histogram(3, Exec::serial) == std::vector<long long>{5, 10});
  CHECK_THROWS_AS(genus_histogram(0, Exec::serial), Error);
}

TEST_CASE("kernel diagonal is identical serial and parallel") {
  ExternalField f = quartic(0.05);
  const int N = 30;
  Recurrence rec = orthogonal_recurrence(f, N, N);
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(-3.5 + 7.0 * i / 400);
  auto lw = [&](double x) { return -N * (f.potential(x) - rec.vmin); };
  std::vector<double> a = kernel_diagonal(rec, N, lw, xs, Exec::serial);
  std::vector<double> b = kernel_diagonal(rec, N, lw, xs, Exec::parallel);
  CHECK(a == b);
  CHECK_THROWS_AS(kernel_diagonal(rec, N + 1, lw, xs, Exec::serial), Error);
}

TEST_CASE("kernel diagonal survives far tails") {
  ExternalField f = build_field(2, {0.0, 0.0}, 2, 0);
  const int N = 200;
  Recurrence rec = orthogonal_recurrence(f, N, N);
  std::vector<double> v =
      kernel_diagonal(rec, N, [&](double x) { return -N * 0.5 * x * x; }, {-3.0, 0.0, 3.0}, Exec::serial);
  for (double x : v) CHECK(std::isfinite(x));
  CHECK(v[0] > 0.0);
  CHECK(v[0] < 1e-100);
  CHECK(v[1] == doctest::Approx(1.0 / std::acos(-1.0)).epsilon(1e-2));
}

TEST_CASE("Ward sums are identical serial and parallel") {
  ExternalField f = quartic(0.05);
  Ward2Sums a = ward2_sums(f, cplx(0.5, 2.0), 12, Exec::serial);
  Ward2Sums b = ward2_sums(f, cplx(0.5, 2.0), 12, Exec::parallel);
  CHECK(a.mass == b.mass);
  CHECK(a.trace_sq == b.trace_sq);
  CHECK(a.trace_gv == b.trace_gv);
}

TEST_CASE("point map keeps order") {
  std::vector<cplx> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(cplx(i, -i));
  auto f = [](cplx z) { return z * z + 1.0; };
  std::vector<cplx> a = map_points(f, pts, Exec::serial), b = map_points(f, pts, Exec::parallel);
  CHECK(a == b);
  for (int i = 0; i < 100; ++i) CHECK(a[i] == f(pts[i]));
}
