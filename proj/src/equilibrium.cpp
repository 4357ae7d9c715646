#include "loopeq/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "loopeq/error.hpp"
#include "loopeq/quadrature.hpp"

namespace loopeq {

namespace {

const double kPi = std::numbers::pi;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// a_i = (1/pi) int_0^pi cos^i = C(i, i/2) / 2^i for even i.
double cos_moment(int i) { return i % 2 ? 0.0 : binom(i, i / 2) / std::pow(2.0, i); }

// mu_k = (1/pi) int_0^pi (c + r cos th)^k dth, k = 0..kmax.
template <class T>
std::vector<T> chebyshev_moments(const T& c, const T& r, int kmax, const T& one) {
  std::vector<T> cp(kmax + 1, one), rp(kmax + 1, one);
  for (int k = 1; k <= kmax; ++k) {
    cp[k] = cp[k - 1] * c;
    rp[k] = rp[k - 1] * r;
  }
  std::vector<T> mu(kmax + 1, one * 0.0);
  for (int k = 0; k <= kmax; ++k)
    for (int i = 0; i <= k; i += 2) mu[k] += cp[k - i] * rp[i] * (binom(k, i) * cos_moment(i));
  return mu;
}

struct Plain {
  std::array<double, 2> f;
  std::array<std::array<double, 2>, 2> jac;
};

Plain endpoint_system(const std::vector<double>& v, double c, double r) {
  int kmax = int(v.size());
  auto mu = chebyshev_moments<double>(c, r, kmax, 1.0);
  std::vector<double> dmu_r(kmax + 1, 0.0);
  for (int k = 0; k <= kmax; ++k)
    for (int i = 2; i <= k; i += 2)
      dmu_r[k] += binom(k, i) * std::pow(c, k - i) * i * std::pow(r, i - 1) * cos_moment(i);
  Plain s{};
  s.f = {0.0, -2.0};
  for (std::size_t k = 0; k < v.size(); ++k) {
    s.f[0] += v[k] * mu[k];
    s.f[1] += v[k] * mu[k + 1];
    s.jac[0][0] += v[k] * (k ? k * mu[k - 1] : 0.0);
    s.jac[0][1] += v[k] * dmu_r[k];
    s.jac[1][0] += v[k] * (k + 1) * mu[k];
    s.jac[1][1] += v[k] * dmu_r[k + 1];
  }
  return s;
}

std::vector<double> vprime_order0(const ExternalField& f) {
  std::vector<double> v(f.upsilon, 0.0);
  for (int j = 1; j <= f.upsilon; ++j) v[j - 1] = j * f.t(j);
  v[1] += 1.0;
  return v;
}

bool newton(const std::vector<double>& v, double& c, double& r) {
  for (int it = 0; it < 80; ++it) {
    Plain s = endpoint_system(v, c, r);
    double res = std::hypot(s.f[0], s.f[1]);
    if (res < 1e-14) return r > 0.0;
    double det = s.jac[0][0] * s.jac[1][1] - s.jac[0][1] * s.jac[1][0];
    if (det == 0.0 || !std::isfinite(det)) return false;
    double dc = (s.jac[1][1] * s.f[0] - s.jac[0][1] * s.f[1]) / det;
    double dr = (-s.jac[1][0] * s.f[0] + s.jac[0][0] * s.f[1]) / det;
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls) {
      double cn = c - step * dc, rn = r - step * dr;
      if (rn > 0.0) {
        Plain t = endpoint_system(v, cn, rn);
        if (std::hypot(t.f[0], t.f[1]) < res || res < 1e-12) {
          c = cn;
          r = rn;
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) return std::hypot(s.f[0], s.f[1]) < 1e-12 && r > 0.0;
  }
  Plain s = endpoint_system(v, c, r);
  return std::hypot(s.f[0], s.f[1]) < 1e-12 && r > 0.0;
}

}  // namespace

BranchRoot solve_endpoints(const ExternalField& field) {
  double c = 0.0, r = 2.0;
  std::vector<double> v = vprime_order0(field);
  if (!newton(v, c, r)) {
    c = 0.0;
    r = 2.0;
    bool ok = true;
    for (int step = 1; step <= 10 && ok; ++step) ok = newton(vprime_order0(field.scaled(step / 10.0)), c, r);
    if (!ok) numerical_error("outside one-cut solvable region");
  }
  Plain s = endpoint_system(v, c, r);
  double det = s.jac[0][0] * s.jac[1][1] - s.jac[0][1] * s.jac[1][0];
  if (!(r > 0.0)) numerical_error("endpoint solve produced alpha >= beta");

  // lift to jets with the fixed order-0 Jacobian
  SpacePtr sp = field.space;
  PolyZ vp = v_prime(field);
  Jet one(sp, 1.0);
  Jet cj(sp, c), rj(sp, r);
  int kmax = int(vp.size());
  for (int it = 0; it <= sp->order(); ++it) {
    auto mu = chebyshev_moments<Jet>(cj, rj, kmax, one);
    Jet f0(sp), f1(sp, -2.0);
    for (int k = 0; k < kmax; ++k) {
      f0 += vp[k] * mu[k];
      f1 += vp[k] * mu[k + 1];
    }
    Jet dc = (f0 * s.jac[1][1] - f1 * s.jac[0][1]) / det;
    Jet dr = (f1 * s.jac[0][0] - f0 * s.jac[1][0]) / det;
    cj -= dc;
    rj -= dr;
  }
  return {cj - rj, cj + rj};
}

PolyZ compute_h(const ExternalField& field, const BranchRoot& br) {
  SpacePtr sp = field.space;
  PolyZ vp = v_prime(field);
  int kmax = int(vp.size());
  Jet a = br.alpha.in_space(sp), b = br.beta.in_space(sp);
  // coefficients of z^(-n-1) in 1/R
  std::vector<Jet> ap(kmax, Jet(sp, 1.0)), bp(kmax, Jet(sp, 1.0));
  for (int k = 1; k < kmax; ++k) {
    ap[k] = ap[k - 1] * a;
    bp[k] = bp[k - 1] * b;
  }
  std::vector<double> ci(kmax);
  for (int i = 0; i < kmax; ++i) ci[i] = binom(2 * i, i) / std::pow(4.0, i);
  std::vector<Jet> rho(kmax, Jet(sp));
  for (int n = 0; n < kmax; ++n)
    for (int i = 0; i <= n; ++i) rho[n] += ap[i] * bp[n - i] * (ci[i] * ci[n - i]);
  PolyZ h(sp, std::size_t(std::max(kmax - 1, 1)));
  for (int k = 1; k < kmax; ++k)
    for (int q = 0; q <= k - 1; ++q) h[q] += vp[k] * rho[k - 1 - q];
  return h;
}

EquilibriumMeasure solve_equilibrium(const ExternalField& field) {
  EquilibriumMeasure eq;
  eq.branch = solve_endpoints(field);
  eq.h = compute_h(field, eq.branch);
  eq.lagrange_l = Jet(field.space);
  auto& res = eq.residuals;
  Cut cut = eq.cut();
  double c = eq.center(), r = eq.half_width();

  // endpoint equations, order 0 and full jets
  {
    Plain s = endpoint_system(vprime_order0(field), c, r);
    res.endpoint = std::max(std::abs(s.f[0]), std::abs(s.f[1]));
    PolyZ vp = v_prime(field);
    Jet cj = (eq.branch.alpha + eq.branch.beta) * 0.5, rj = (eq.branch.beta - eq.branch.alpha) * 0.5;
    auto mu = chebyshev_moments<Jet>(cj, rj, int(vp.size()), Jet(field.space, 1.0));
    Jet f0(field.space), f1(field.space, -2.0);
    for (int k = 0; k < int(vp.size()); ++k) {
      f0 += vp[k] * mu[k];
      f1 += vp[k] * mu[k + 1];
    }
    res.endpoint_jet = std::max(f0.max_abs(), f1.max_abs());
  }

  // normalization identity through the Laurent series of R
  {
    PolyZ vp = v_prime(field);
    int n = int(eq.h.size()) + 3;
    Jet a = eq.branch.alpha, b = eq.branch.beta;
    std::vector<double> ci(n);
    double v = 1.0;
    for (int i = 0; i < n; ++i) {
      ci[i] = v;
      v *= -(0.5 - double(i)) / double(i + 1);
    }
    std::vector<Jet> ap(n, Jet(field.space, 1.0)), bp(n, Jet(field.space, 1.0));
    for (int k = 1; k < n; ++k) {
      ap[k] = ap[k - 1] * a;
      bp[k] = bp[k - 1] * b;
    }
    std::vector<Jet> rho(n, Jet(field.space));  // R = z sum rho_n z^-n
    for (int k = 0; k < n; ++k)
      for (int i = 0; i <= k; ++i) rho[k] += ap[i] * bp[k - i] * (ci[i] * ci[k - i]);
    auto rh = [&](int p) {
      Jet s(field.space);
      for (int q = 0; q < int(eq.h.size()); ++q) {
        int idx = q + 1 - p;
        if (idx >= 0 && idx < n) s += eq.h[q] * rho[idx];
      }
      return s;
    };
    double poly = 0.0;
    for (int p = 0; p <= int(vp.size()); ++p) poly = std::max(poly, std::abs((vp.coeff(p) - rh(p)).value()));
    res.normalization_poly = poly;
    res.normalization_mass = std::abs((-rh(-1)).value() - 2.0);
  }

  CPoly h0 = eq.h.order0();
  {
    Rule gc = gauss_chebyshev2(64);
    double m = 0.0;
    for (std::size_t i = 0; i < gc.x.size(); ++i) m += gc.w[i] * cpoly_eval(h0, c + r * gc.x[i]).real();
    res.mass = std::abs(r * r / (2.0 * kPi) * m - 1.0);
  }
  double hmin = 1e300;
  for (int i = 0; i < 256; ++i) hmin = std::min(hmin, cpoly_eval(h0, cut.alpha + (cut.beta - cut.alpha) * i / 255.0).real());
  res.h_min = hmin;
  if (!(hmin > 0.0)) numerical_error("h is not positive on the support (outside the one-cut regime)");
  return eq;
}

double density_psi(const EquilibriumMeasure& eq, double x) {
  Cut cut = eq.cut();
  if (x <= cut.alpha || x >= cut.beta) return 0.0;
  double h = cpoly_eval(eq.h.order0(), x).real();
  return std::sqrt((x - cut.alpha) * (cut.beta - x)) * h / (2.0 * kPi);
}

double effective_potential(const EquilibriumMeasure& eq, const ExternalField& field, double x) {
  double c = eq.center(), r = eq.half_width();
  CPoly h0 = eq.h.order0();
  auto hval = [&](double th) {
    double s = std::sin(th);
    return s * s * cpoly_eval(h0, c + r * std::cos(th)).real();
  };
  double pref = r * r / (2.0 * kPi);
  double integral;
  double u = (x - c) / r;
  if (std::abs(u) < 1.0) {
    double ts = std::acos(u);
    auto f = [&](double th) {
      double d = 2.0 * r * std::abs(std::sin(0.5 * (th + ts)) * std::sin(0.5 * (th - ts)));
      return d > 0.0 ? std::log(d) * hval(th) : 0.0;
    };
    integral = tanh_sinh(f, 0.0, ts) + tanh_sinh(f, ts, kPi);
  } else {
    auto f = [&](double th) { return std::log(std::abs(x - c - r * std::cos(th))) * hval(th); };
    integral = tanh_sinh(f, 0.0, kPi);
  }
  return -2.0 * pref * integral + field.potential(x);
}

std::vector<double> interior_grid(const EquilibriumMeasure& eq, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(eq.center() + eq.half_width() * std::cos((i + 0.5) * kPi / n));
  return g;
}

std::vector<double> exterior_grid(const EquilibriumMeasure& eq, int n, double reach) {
  std::vector<double> g;
  int half = n / 2;
  for (int k = 1; k <= half; ++k) {
    g.push_back(eq.cut().alpha - reach * k / half);
    g.push_back(eq.cut().beta + reach * k / half);
  }
  return g;
}

VariationalReport lagrange_and_variational_check(const EquilibriumMeasure& eq, const ExternalField& field,
                                                 const std::vector<double>& interior,
                                                 const std::vector<double>& exterior, bool parallel) {
  if (interior.empty()) throw std::invalid_argument("grid empty");
  std::vector<double> pts = interior;
  pts.insert(pts.end(), exterior.begin(), exterior.end());
  std::vector<double> phi(pts.size());
  long n = long(pts.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) phi[i] = effective_potential(eq, field, pts[i]);
  VariationalReport rep;
  double sum = 0.0;
  for (std::size_t i = 0; i < interior.size(); ++i) sum += phi[i];
  rep.l = sum / double(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) rep.max_eq_dev = std::max(rep.max_eq_dev, std::abs(phi[i] - rep.l));
  rep.min_ineq_margin = exterior.empty() ? 0.0 : 1e300;
  for (std::size_t i = interior.size(); i < pts.size(); ++i)
    rep.min_ineq_margin = std::min(rep.min_ineq_margin, phi[i] - rep.l);
  return rep;
}

AlgebraicFn resolvent_p0(const EquilibriumMeasure& eq, const ExternalField& field) {
  Cut cut = eq.cut();
  AlgebraicFn R = AlgebraicFn::branch(eq.branch, field.space);
  AlgebraicFn f = AlgebraicFn::from_poly(v_prime(field), cut) - R * eq.h.in_space(field.space);
  return f * 0.5;
}

}  // namespace loopeq
