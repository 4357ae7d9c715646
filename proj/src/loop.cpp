#include "loopeq/loop.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "loopeq/error.hpp"

namespace loopeq {

namespace {

CPoly trimmed_order0(const PolyZ& p) {
  int d = p.degree0();
  CPoly c = p.order0();
  c.resize(std::max(d, 0) + 1);
  return c;
}

// Value of f at a plain point, going through the removable-singularity path when
// the point is a denominator root.
Jet value_at(const AlgebraicFn& f, cplx z, double* residual) {
  if (f.d.find(z, 1e-8) >= 0) {
    LimitValue lv = alg_eval_limit(f, z, Jet(f.space(), z));
    if (residual) *residual = std::max(*residual, lv.residual);
    return lv.value;
  }
  return alg_eval(f, z);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

AlgebraicFn vertex_derivative(const AlgebraicFn& f) {
  const SpacePtr& s = f.space();
  int m = s->num_vars();
  if (s->order() < 1 || m == 0) numerical_error("insufficient jet order");
  SpacePtr target = m > s->physical() ? s->partial_space(m - 1, 1) : s->partial_space(0, 1);
  // -(sum_j z^(m-j) d_j f) / z^(m+1)
  PolyZ A(target, f.a.size() ? f.a.size() + m : 0), B(target, f.b.size() ? f.b.size() + m : 0);
  for (int j = 1; j <= m; ++j) {
    PolyZ pa = f.a.partial(j - 1, 1).in_space(target);
    PolyZ pb = f.b.partial(j - 1, 1).in_space(target);
    for (int k = 0; k < int(pa.size()); ++k) A[k + m - j] -= pa[k];
    for (int k = 0; k < int(pb.size()); ++k) B[k + m - j] -= pb[k];
  }
  AlgebraicFn r(target, f.cut);
  r.a = A;
  r.b = B;
  r.d = f.d;
  r.d.add(0.0, m + 1);
  return r;
}

AlgebraicFn LoopOperator::full() const {
  AlgebraicFn r = parts.at(0);
  for (std::size_t i = 1; i < parts.size(); ++i) r += parts[i];
  return r;
}

LoopOperator LoopOperator::in_space(const SpacePtr& target) const {
  LoopOperator r = *this;
  r.parts.resize(std::min<std::size_t>(parts.size(), target->order() + 1));
  for (auto& p : r.parts) p = p.in_space(target);
  return r;
}

LoopOperator loop_operator(const EquilibriumMeasure& eq, const SpacePtr& space) {
  LoopOperator op;
  op.cut = eq.cut();
  PolyZ h = eq.h.in_space(space);
  op.h0 = trimmed_order0(h);
  op.roots = op.h0.size() > 1 ? cpoly_roots(op.h0) : std::vector<cplx>{};
  Jet alpha = eq.branch.alpha.in_space(space), beta = eq.branch.beta.in_space(space);
  PolyZ eps(space, 2);
  eps[0] = alpha * beta - cplx(op.cut.alpha * op.cut.beta);
  eps[1] = -(alpha + beta) + cplx(op.cut.alpha + op.cut.beta);
  eps[0].coeffs()[0] = 0.0;
  eps[1].coeffs()[0] = 0.0;
  CPoly w0 = op.cut.w0();
  int K = space->order();
  // R = R0 sum_k c_k eps^k / W0^k; the degree-i part of R h only sees k <= i
  std::vector<double> c(K + 1);
  std::vector<PolyZ> epsk(K + 1, PolyZ(space, CPoly{1.0}));
  c[0] = 1.0;
  for (int k = 1; k <= K; ++k) {
    c[k] = c[k - 1] * (0.5 - double(k - 1)) / double(k);
    epsk[k] = epsk[k - 1] * eps;
  }
  std::vector<CPoly> w0pow(K + 1, CPoly{1.0});
  for (int k = 1; k <= K; ++k) w0pow[k] = cpoly_mul(w0pow[k - 1], w0);
  for (int i = 0; i <= K; ++i) {
    PolyZ T(space, 0);
    for (int k = 0; k <= i; ++k) T += (epsk[k] * w0pow[i - k]) * cplx(c[k]);
    AlgebraicFn part(space, op.cut);
    part.b = (T * h).homogeneous(i);
    part.d = Denominator::from_roots({op.cut.alpha, op.cut.beta}).power(i);
    op.parts.push_back(part);
  }
  return op;
}

AlgebraicFn solve_with_source(const AlgebraicFn& U, const LoopOperator& op_in, double* regularity_residual) {
  SpacePtr s = U.space();
  LoopOperator op = op_in.in_space(s);
  int K = s->order();
  int d = int(op.h0.size()) - 1;
  cplx lead = op.h0.back();
  std::vector<cplx> extra{op.cut.alpha, op.cut.beta};
  extra.insert(extra.end(), op.roots.begin(), op.roots.end());
  Denominator over = Denominator::from_roots(extra);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  if (d > 0) {
    Eigen::MatrixXcd V(d, d);
    for (int i = 0; i < d; ++i)
      for (int p = 0; p < d; ++p) V(i, p) = std::pow(op.roots[i], p);
    lu.compute(V);
  }
  double resid = 0.0;

  auto solve0 = [&](const AlgebraicFn& X) {
    AlgebraicFn Y = X;
    int top = X.top_power();
    if (top >= d) {
      LaurentSeries L = laurent_expand(X, 1);
      PolyZ q(s, std::size_t(top + 1));
      for (int p = d; p <= top; ++p) q[p] = -L.coeff(p);
      Y += AlgebraicFn::from_poly(q, op.cut);
    }
    if (d > 0) {
      std::size_t n = s->size();
      Eigen::MatrixXcd rhs(d, n);
      for (int i = 0; i < d; ++i) {
        Jet v = value_at(Y, op.roots[i], &resid);
        for (std::size_t k = 0; k < n; ++k) rhs(i, k) = -v[k];
      }
      Eigen::MatrixXcd sol = lu.solve(rhs);
      PolyZ q(s, std::size_t(d));
      for (int p = 0; p < d; ++p)
        for (std::size_t k = 0; k < n; ++k) q[p].coeffs()[k] = sol(p, k);
      Y += AlgebraicFn::from_poly(q, op.cut);
    }
    return Y.times_r0().over(over) * (1.0 / lead);
  };

  std::vector<AlgebraicFn> P;
  for (int k = 0; k <= K; ++k) {
    AlgebraicFn X = U.homogeneous(k);
    for (int i = 1; i <= k; ++i) X -= op.parts[i] * P[k - i];
    P.push_back(solve0(X));
  }
  AlgebraicFn r = P[0];
  for (int k = 1; k <= K; ++k) r += P[k];
  if (regularity_residual) *regularity_residual = resid;
  return r;
}

int choose_probe_count(const EquilibriumMeasure& eq0, int upsilon, const LoopOptions& opt, double* ratio) {
  CPoly h0 = trimmed_order0(eq0.h);
  Cut cut = eq0.cut();
  double reach = std::max(std::abs(cut.alpha), std::abs(cut.beta));
  double rho = 0.0;
  if (h0.size() > 1) {
    double rmin = 1e300;
    for (auto z : cpoly_roots(h0)) {
      if (cut.dist(z) < opt.root_margin) numerical_error("roots of h too close to the cut (near-critical field)");
      rmin = std::min(rmin, std::abs(z));
    }
    rho = reach / rmin;
  }
  if (ratio) *ratio = rho;
  if (rho >= 1.0) numerical_error("roots of h inside the disk of the cut; the probe series diverges there");
  int m = std::max(upsilon, opt.laurent_depth);
  double tol = opt.probe_tol > 0.0 ? opt.probe_tol : (opt.g_max >= 2 ? 1e-9 : 1e-11);
  if (rho > 0.0) m = std::max(m, int(std::ceil(std::log(tol) / std::log(rho))));
  if (m > opt.probe_max) numerical_error("required probe count exceeds probe_max");
  return m;
}

LoopHierarchy start_hierarchy(const ExternalField& physical, const LoopOptions& opt) {
  if (opt.g_max < 0) usage_error("g_max must be non-negative");
  if (opt.laurent_depth < 1) usage_error("laurent_depth must be positive");
  if (opt.taylor_order < 1) usage_error("taylor_order must be at least 1");
  LoopHierarchy h;
  h.g_max = opt.g_max;
  h.laurent_depth = opt.laurent_depth;
  h.taylor_order = opt.taylor_order;
  EquilibriumMeasure eq0 = solve_equilibrium(physical.with_layout(physical.upsilon, 0));
  int m = choose_probe_count(eq0, physical.upsilon, opt, &h.probe_ratio);
  if (opt.probe_m > 0) m = std::max(opt.probe_m, physical.upsilon);
  int K = opt.g_max + opt.taylor_order - 1;
  h.field = physical.with_layout(m, K, std::min(opt.g_max, K));
  h.eq = solve_equilibrium(h.field);
  h.op = loop_operator(h.eq, h.field.space);
  h.levels.push_back(resolvent_p0(h.eq, h.field));
  h.sources.push_back(AlgebraicFn(h.field.space, h.eq.cut()));
  h.regularity_residuals.push_back(0.0);
  return h;
}

const AlgebraicFn& solve_loop_level(LoopHierarchy& h) {
  int g = int(h.levels.size());
  AlgebraicFn U = vertex_derivative(h.levels[g - 1]);
  SpacePtr s = U.space();
  for (int gp = 1; gp <= g - 1; ++gp) U += h.levels[gp].in_space(s) * h.levels[g - gp].in_space(s);
  double resid = 0.0;
  AlgebraicFn P = solve_with_source(U, h.op, &resid);
  h.sources.push_back(U);
  h.levels.push_back(P);
  h.regularity_residuals.push_back(resid);
  return h.levels.back();
}

LoopHierarchy solve_hierarchy(const ExternalField& physical, const LoopOptions& opt) {
  LoopHierarchy h = start_hierarchy(physical, opt);
  for (int g = 1; g <= opt.g_max; ++g) solve_loop_level(h);
  return h;
}

EgDerivativeTable extract_eg_derivatives(const LoopHierarchy& h) {
  int ups = h.field.upsilon;
  if (h.laurent_depth < ups + 1) usage_error("Laurent depth too small for the e_g table");
  EgDerivativeTable t;
  t.upsilon = ups;
  t.taylor_order = h.taylor_order;
  int T = h.taylor_order;
  int m = h.field.probe_m;
  for (const auto& P : h.levels) {
    LaurentSeries L = laurent_expand(P, ups + 1);
    std::vector<Jet> J;
    std::vector<double> row;
    for (int j = 1; j <= ups; ++j) {
      J.push_back(-L.coeff(-j - 1));
      row.push_back(J.back().value().real());
    }
    t.entries.push_back(row);

    std::map<MultiIndex, double> tay;
    double asym = 0.0;
    const SpacePtr& s = P.space();
    MultiIndex a(ups, 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
      if (var == ups) {
        int deg = 0;
        for (auto e : a) deg += e;
        if (deg == 0) return;
        double afact = 1.0;
        for (auto e : a) afact *= factorial(e);
        bool have = false;
        double first = 0.0;
        for (int j = 0; j < ups; ++j) {
          if (!a[j]) continue;
          MultiIndex b(m, 0);
          std::copy(a.begin(), a.end(), b.begin());
          b[j] -= 1;
          long idx = s->index_of(b);
          if (idx < 0) usage_error("insufficient jet order for the requested Taylor order");
          double bfact = 1.0;
          for (int i = 0; i < ups; ++i) bfact *= factorial(b[i]);
          double v = (bfact * J[j][idx] / afact).real();
          if (!have) {
            first = v;
            have = true;
          } else {
            asym = std::max(asym, std::abs(v - first) / std::max(1.0, std::abs(first)));
          }
        }
        tay[a] = first;
        return;
      }
      for (int e = 0; e <= left; ++e) {
        a[var] = std::uint8_t(e);
        rec(var + 1, left - e);
      }
      a[var] = 0;
    };
    rec(0, T);
    t.taylor.push_back(std::move(tay));
    t.mixed_partial_asymmetry.push_back(asym);
  }
  return t;
}

double taylor_increment(const std::map<MultiIndex, double>& taylor, const std::vector<double>& dt) {
  double s = 0.0;
  for (const auto& [a, c] : taylor) {
    double term = c;
    for (std::size_t j = 0; j < a.size(); ++j) term *= std::pow(j < dt.size() ? dt[j] : 0.0, a[j]);
    s += term;
  }
  return s;
}

std::vector<double> eg_by_panels(const ExternalField& physical, int g_max, int taylor_order, int panels,
                                 const LoopOptions& base) {
  if (panels < 1) usage_error("panels must be positive");
  LoopOptions opt = base;
  opt.g_max = g_max;
  opt.taylor_order = taylor_order;
  opt.laurent_depth = std::max(opt.laurent_depth, physical.upsilon + 1);
  std::vector<double> e(g_max + 1, 0.0);
  std::vector<double> dt = physical.t_phys;
  for (auto& v : dt) v /= panels;
  for (int k = 0; k < panels; ++k) {
    ExternalField f = physical.scaled(double(k) / panels);
    LoopHierarchy h = solve_hierarchy(f, opt);
    EgDerivativeTable tab = extract_eg_derivatives(h);
    for (int g = 0; g <= g_max; ++g) e[g] += taylor_increment(tab.taylor[g], dt);
  }
  return e;
}

std::vector<cplx> laurent_table(const AlgebraicFn& f, int depth) {
  LaurentSeries L = laurent_expand(f, depth);
  std::vector<cplx> out;
  for (int p = -1; p >= -depth; --p) out.push_back(L.coeff(p).value());
  return out;
}

}  // namespace loopeq
