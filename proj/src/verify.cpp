#include "loopeq/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "loopeq/error.hpp"
#include "loopeq/oracles.hpp"

namespace loopeq {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool wanted(Scope s, const VerifyOptions& o) {
  if (o.suite == "full") return true;
  if (o.suite == "gaussian") return s == Scope::gaussian;
  if (o.suite == "quartic") return s == Scope::quartic;
  return false;
}

Scope scope_of(double t4) { return t4 == 0.0 ? Scope::gaussian : Scope::quartic; }

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

CheckResult at_most(int k, std::string name, Scope scope, double value, double threshold, std::string detail = {}) {
  CheckResult r;
  r.criterion = k;
  r.name = std::move(name);
  r.scope = scope;
  r.value = value;
  r.threshold = threshold;
  r.pass = std::isfinite(value) && value <= threshold;
  r.detail = std::move(detail);
  return r;
}

CheckResult at_least(int k, std::string name, Scope scope, double value, double threshold, std::string detail = {}) {
  CheckResult r = at_most(k, std::move(name), scope, value, threshold, std::move(detail));
  r.pass = std::isfinite(value) && value >= threshold;
  return r;
}

ExternalField quartic(double t4) { return build_field(4, {0.0, 0.0, 0.0, t4}, 4, 0); }

LoopHierarchy hierarchy(double t4, int g_max, int taylor = 1) {
  LoopOptions o;
  o.g_max = g_max;
  o.taylor_order = taylor;
  return solve_hierarchy(quartic(t4), o);
}

double laurent_re(const AlgebraicFn& f, int power) {
  std::vector<cplx> l = laurent_table(f, -power);
  return l[-power - 1].real();
}

// Admissible quartic and sextic fields from a seeded stream, alternating degree.
std::vector<ExternalField> random_fields(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lower(-0.05, 0.05), top(0.02, 0.2);
  std::vector<ExternalField> out;
  for (int attempt = 0; int(out.size()) < count; ++attempt) {
    if (attempt > 100 * count) numerical_error("could not draw enough admissible fields");
    int ups = out.size() % 2 ? 6 : 4;
    std::vector<double> t(ups);
    for (int j = 0; j + 1 < ups; ++j) t[j] = lower(rng);
    t[ups - 1] = top(rng);
    ExternalField f = build_field(ups, t, ups, 0);
    if (admissibility_check(f, {}).ok) out.push_back(f);
  }
  return out;
}

std::vector<CheckResult> gaussian_equilibrium(const VerifyOptions&) {
  auto t0 = Clock::now();
  ExternalField f = quartic(0.0);
  EquilibriumMeasure eq = solve_equilibrium(f);
  VariationalReport vr = lagrange_and_variational_check(eq, f, interior_grid(eq), exterior_grid(eq));
  double secs = since(t0);
  CPoly h = eq.h.order0();
  double dh = std::abs(h.at(0) - 1.0);
  for (std::size_t k = 1; k < h.size(); ++k) dh = std::max(dh, std::abs(h[k]));
  const EquilibriumResiduals& r = eq.residuals;
  double dev = std::max({std::abs(eq.cut().alpha + 2.0), std::abs(eq.cut().beta - 2.0), dh, std::abs(vr.l - 1.0),
                         r.endpoint, r.normalization_poly, r.normalization_mass, r.mass});
  std::vector<CheckResult> out;
  out.push_back(at_most(1, "alpha, beta, h, l and residuals", Scope::gaussian, dev, 1e-10,
                        "l = " + std::to_string(vr.l)));
  out.push_back(at_most(1, "runtime", Scope::gaussian, secs, 0.1, "seconds"));
  out.back().seconds = secs;
  return out;
}

std::vector<CheckResult> catalan(const VerifyOptions&) {
  auto t0 = Clock::now();
  GenusMomentTable counts = pairing_genus_counts(7);
  ExternalField f = quartic(0.0);
  EquilibriumMeasure eq = solve_equilibrium(f);
  std::vector<cplx> l = laurent_table(resolvent_p0(eq, f), 15);
  double dev = 0.0;
  for (int p = 1; p <= 15; ++p) {
    double target = p % 2 ? double(counts.count((p - 1) / 2, 0)) : 0.0;
    dev = std::max(dev, std::abs(l[p - 1] - target));
  }
  double secs = since(t0);
  return {at_most(2, "P_0 coefficients against planar pairings, j <= 7", Scope::gaussian, dev, 1e-10),
          at_most(2, "runtime", Scope::gaussian, secs, 1.0, "seconds")};
}

std::vector<CheckResult> genus_one(const VerifyOptions&) {
  auto t0 = Clock::now();
  GenusMomentTable counts = pairing_genus_counts(4);
  LoopHierarchy h = hierarchy(0.0, 1);
  double dev = 0.0;
  for (int j = 2; j <= 4; ++j) dev = std::max(dev, std::abs(laurent_re(h.levels[1], -(2 * j + 1)) - counts.count(j, 1)));
  double secs = since(t0);
  return {at_most(3, "P_1 at z^-5, z^-7, z^-9 against genus-1 pairings", Scope::gaussian, dev, 1e-8),
          at_most(3, "runtime", Scope::gaussian, secs, 5.0, "seconds")};
}

std::vector<CheckResult> genus_two(const VerifyOptions& opt) {
  if (opt.g_max < 2) return {};
  auto t0 = Clock::now();
  GenusMomentTable counts = pairing_genus_counts(4);
  LoopHierarchy h = hierarchy(0.0, 2);
  double dev = std::abs(laurent_re(h.levels[2], -9) - counts.count(4, 2));
  double secs = since(t0);
  return {at_most(4, "P_2 at z^-9 against genus-2 pairings", Scope::gaussian, dev, 1e-6),
          at_most(4, "runtime", Scope::gaussian, secs, 30.0, "seconds")};
}

std::vector<CheckResult> map_derivatives(const VerifyOptions&) {
  GenusMomentTable counts = pairing_genus_counts(2);
  EgDerivativeTable t = extract_eg_derivatives(hierarchy(0.0, 1));
  double d0 = std::abs(t.entries[0][3] + counts.count(2, 0));
  double d1 = std::abs(t.entries[1][3] + counts.count(2, 1));
  return {at_most(5, "de_0/dt_4 = -2", Scope::gaussian, d0, 1e-8),
          at_most(5, "de_1/dt_4 = -1", Scope::gaussian, d1, 1e-8)};
}

std::vector<CheckResult> duality(const VerifyOptions& opt) {
  double poly = 0.0, mass = 0.0;
  for (const ExternalField& f : random_fields(opt.seed, 20)) {
    EquilibriumMeasure eq = solve_equilibrium(f);
    poly = std::max(poly, eq.residuals.normalization_poly);
    mass = std::max(mass, eq.residuals.normalization_mass);
  }
  return {at_most(6, "polynomial part of V' - R h, 20 fields", Scope::quartic, poly, 1e-10),
          at_most(6, "z^-1 coefficient of V' - R h minus 2, 20 fields", Scope::quartic, mass, 1e-10)};
}

std::vector<CheckResult> variational(const VerifyOptions& opt) {
  double dev = 0.0, margin = INFINITY;
  for (const ExternalField& f : random_fields(opt.seed, 20)) {
    EquilibriumMeasure eq = solve_equilibrium(f);
    VariationalReport r = lagrange_and_variational_check(eq, f, interior_grid(eq, 64), exterior_grid(eq, 32));
    dev = std::max(dev, r.max_eq_dev);
    margin = std::min(margin, r.min_ineq_margin);
  }
  CheckResult ineq = at_least(7, "inequality margin on 32 exterior points, 20 fields", Scope::quartic, margin, 0.0);
  ineq.pass = margin > 0.0;
  return {at_most(7, "equality deviation on 64 interior points, 20 fields", Scope::quartic, dev, 1e-8), ineq};
}

std::vector<CheckResult> loop_residual(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  int g_max = std::min(opt.g_max, 2);
  for (double t4 : {0.0, 0.05}) {
    if (!wanted(scope_of(t4), opt) || g_max < 1) continue;
    LoopHierarchy h = hierarchy(t4, g_max);
    attach_contour_residuals(h, residual_samples(h.eq.cut()));
    for (int g = 1; g <= g_max; ++g)
      out.push_back(at_most(8, "contour residual g=" + std::to_string(g) + " t4=" + std::to_string(t4).substr(0, 4),
                            scope_of(t4), h.contour_residuals[g], 1e-8, "5 samples"));
  }
  return out;
}

std::vector<CheckResult> bulk(const VerifyOptions&) {
  ExternalField f = quartic(0.0);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-1.0 + i / 100.0);
  auto sup = [&](int N) {
    double s = 0.0;
    for (double r : bulk_remainder(f, N, grid)) s = std::max(s, std::abs(r));
    return s;
  };
  double ratio = sup(40) / sup(20);
  return {at_most(9, "sup remainder ratio N=20 -> 40 on [-1, 1]", Scope::gaussian, ratio, 0.35)};
}

std::vector<CheckResult> even_powers(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const std::vector<int> Ns = {20, 30, 40, 50, 60};
  for (double t4 : {0.0, 0.05}) {
    Scope s = scope_of(t4);
    if (!wanted(s, opt)) continue;
    LoopHierarchy h = hierarchy(t4, 1);
    std::string tag = " t4=" + std::to_string(t4).substr(0, 4);
    for (int j : {2, 4, 6}) {
      std::vector<double> a = moment_extrapolation(quartic(t4), j, Ns);
      std::string jt = "j=" + std::to_string(j) + tag;
      out.push_back(at_most(10, "odd 1/N coefficient " + jt, s, std::abs(a[1] / a[0]), 1e-4, "relative to a0"));
      out.push_back(at_most(10, "odd 1/N^3 coefficient " + jt, s, std::abs(a[3] / a[0]), 1e-4, "relative to a0"));
      double c = laurent_re(h.levels[1], -(j + 1));
      // the genus-1 part of the second moment vanishes at t = 0; use an absolute floor there
      double scale = std::abs(c) > 1e-12 ? std::abs(c) : 0.0;
      double err = std::abs(a[2] - c);
      out.push_back(scale > 0.0 ? at_most(10, "1/N^2 coefficient against P_1 " + jt, s, err / scale, 0.05,
                                          "relative; P_1 coefficient " + sci(c))
                                : at_most(10, "1/N^2 coefficient against P_1 " + jt, s, err, 1e-4 * a[0],
                                          "absolute; P_1 coefficient 0"));
    }
  }
  return out;
}

std::vector<CheckResult> partition(const VerifyOptions&) {
  ExternalField f = quartic(0.01);
  std::vector<double> e = eg_by_panels(f, 1, 4, 32);
  auto rem = [&](int N) { return std::abs(finite_n_partition(f, N) - (N * N * e[0] + e[1])); };
  double r4 = rem(4), r12 = rem(12);
  return {at_least(11, "remainder ratio N=4 -> 12 at t4=0.01", Scope::quartic, r4 / r12, 10.0,
                   "remainders " + sci(r4) + ", " + sci(r12))};
}

std::vector<CheckResult> ward(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  for (double t4 : {0.0, 0.05}) {
    Scope s = scope_of(t4);
    if (!wanted(s, opt)) continue;
    std::string tag = " t4=" + std::to_string(t4).substr(0, 4);
    WardCheckReport one = ward_identity_check(quartic(t4), 1, {cplx(3.0, 0.0), cplx(0.0, 2.0), cplx(-4.0, 0.5)});
    WardCheckReport two = ward_identity_check(quartic(t4), 2, {cplx(0.0, 2.0), cplx(3.0, 1.5), cplx(-2.5, 2.0)});
    out.push_back(at_most(12, "Ward residual N=1" + tag, s, one.max_residual(), 1e-8, "3 samples"));
    out.push_back(at_most(12, "Ward residual N=2" + tag, s, two.max_residual(), 1e-6, "3 samples"));
  }
  return out;
}

std::vector<CheckResult> tail(const VerifyOptions&) {
  ExternalField f = quartic(0.0);
  std::vector<double> n, y;
  for (int N = 10; N <= 60; N += 10) {
    n.push_back(N);
    y.push_back(std::log(tail_mass(f, N, 0.5)));
  }
  double mn = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mn += n[i] / n.size();
    my += y[i] / n.size();
  }
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sxy += (n[i] - mn) * (y[i] - my);
    sxx += (n[i] - mn) * (n[i] - mn);
    syy += (y[i] - my) * (y[i] - my);
  }
  double slope = sxy / sxx, r2 = sxy * sxy / (sxx * syy);
  bool decreasing = true;
  for (std::size_t i = 1; i < y.size(); ++i) decreasing = decreasing && y[i] < y[i - 1];
  CheckResult s = at_most(13, "log tail mass slope in N", Scope::gaussian, slope, 0.0, "");
  s.pass = slope < 0.0 && decreasing;
  return {s, at_least(13, "log-linear fit R^2", Scope::gaussian, r2, 0.99)};
}

using Runner = std::vector<CheckResult> (*)(const VerifyOptions&);

struct Criterion {
  const char* title;
  Runner run;
  bool gaussian, quartic;  // scopes it has checks in
};

const Criterion kTable[kCriteria] = {
    {"Gaussian equilibrium", gaussian_equilibrium, true, false},
    {"Catalan reproduction", catalan, true, false},
    {"genus-1 reproduction", genus_one, true, false},
    {"genus-2 reproduction", genus_two, true, false},
    {"map-count derivatives", map_derivatives, true, false},
    {"endpoint and normalization duality", duality, false, true},
    {"variational equations", variational, false, true},
    {"loop-equation residual", loop_residual, true, true},
    {"bulk correction", bulk, true, false},
    {"even-power structure", even_powers, true, true},
    {"partition expansion", partition, false, true},
    {"Ward identity", ward, true, true},
    {"tail bound", tail, true, false},
};

}  // namespace

std::string criterion_title(int k) {
  if (k < 1 || k > kCriteria) usage_error("criterion must lie in 1..13");
  return kTable[k - 1].title;
}

std::vector<CheckResult> run_criterion(int k, const VerifyOptions& opt) {
  if (k < 1 || k > kCriteria) usage_error("criterion must lie in 1..13");
  const Criterion& c = kTable[k - 1];
  if (!(c.gaussian && wanted(Scope::gaussian, opt)) && !(c.quartic && wanted(Scope::quartic, opt))) return {};
  auto t0 = Clock::now();
  std::vector<CheckResult> out = c.run(opt);
  double secs = since(t0);
  for (auto& r : out) {
    if (r.seconds == 0.0) r.seconds = secs;
    r.timing = r.name == "runtime";
  }
  return out;
}

std::vector<CheckResult> run_suite(const VerifyOptions& opt) {
  if (opt.suite != "gaussian" && opt.suite != "quartic" && opt.suite != "full" && opt.suite != "none")
    usage_error("suite must be one of gaussian, quartic, full, none");
  std::vector<CheckResult> out;
  for (int k = 1; k <= kCriteria; ++k) {
    std::vector<CheckResult> part = run_criterion(k, opt);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace loopeq
