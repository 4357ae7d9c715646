#include "loopeq/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loopeq/error.hpp"

namespace loopeq {

namespace {

constexpr double kRootMergeTol = 1e-9;

void axpy(Jet& y, cplx s, const Jet& x) {
  if (s == 0.0) return;
  auto& yc = y.coeffs();
  const auto& xc = x.coeffs();
  if (yc.size() == xc.size()) {
    for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += s * xc[i];
  } else if (xc.size() == 1) {
    yc[0] += s * xc[0];
  } else {
    y += x * s;
  }
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// Coefficients of z^(1-n) in R0(z) = z sqrt(1-a/z) sqrt(1-b/z).
std::vector<cplx> r0_series(double a, double b, int count) {
  std::vector<double> c(count);
  double v = 1.0;
  for (int i = 0; i < count; ++i) {
    c[i] = v;
    v *= -(0.5 - double(i)) / double(i + 1);
  }
  std::vector<cplx> rho(count, 0.0);
  for (int n = 0; n < count; ++n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += c[i] * c[n - i] * std::pow(a, i) * std::pow(b, n - i);
    rho[n] = s;
  }
  return rho;
}

std::vector<cplx> series_mul(const std::vector<cplx>& x, const std::vector<cplx>& y, int count) {
  std::vector<cplx> r(count, 0.0);
  for (int i = 0; i < count && i < int(x.size()); ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; i + j < count && j < int(y.size()); ++j) r[i + j] += x[i] * y[j];
  }
  return r;
}

// Taylor coefficients of p(r + e) up to e^n.
std::vector<Jet> taylor_shift(const PolyZ& p, cplx r, int n) {
  std::vector<Jet> work(p.coeffs());
  std::vector<Jet> out(n + 1, Jet(p.space()));
  int deg = p.degree();
  for (int q = 0; q <= n && q <= deg; ++q) {
    // synthetic division by (z - r) from the top; remainder is the q-th coefficient
    for (int k = deg - 1; k >= q; --k) axpy(work[k], r, work[k + 1]);
    out[q] = work[q];
  }
  return out;
}

}  // namespace

CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
  if (a.empty() || b.empty()) return {};
  CPoly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

cplx cpoly_eval(const CPoly& p, cplx z) {
  cplx v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + *it;
  return v;
}

CPoly cpoly_from_roots(const std::vector<cplx>& roots) {
  CPoly p{1.0};
  for (auto r : roots) p = cpoly_mul(p, {-r, 1.0});
  return p;
}

std::vector<cplx> cpoly_roots(const CPoly& p_in) {
  CPoly p = p_in;
  double scale = 0.0;
  for (auto c : p) scale = std::max(scale, std::abs(c));
  while (!p.empty() && std::abs(p.back()) <= 1e-14 * scale) p.pop_back();
  if (p.size() <= 1) return {};
  int n = int(p.size()) - 1;
  std::vector<cplx> roots;
  if (n == 1) {
    roots.push_back(-p[0] / p[1]);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p[i] / p[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  }
  CPoly dp(n);
  for (int k = 1; k <= n; ++k) dp[k - 1] = double(k) * p[k];
  for (auto& r : roots) {
    for (int it = 0; it < 4; ++it) {
      cplx d = cpoly_eval(dp, r);
      if (d == 0.0) break;
      cplx f = cpoly_eval(p, r);
      cplx step = f / d;
      cplx next = r - step;
      if (std::abs(cpoly_eval(p, next)) >= std::abs(f)) break;
      r = next;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

// ---------------------------------------------------------------- PolyZ

PolyZ::PolyZ(SpacePtr space, const CPoly& p) : space_(std::move(space)) {
  c_.reserve(p.size());
  for (auto v : p) c_.emplace_back(space_, v);
}

PolyZ::PolyZ(SpacePtr space, std::vector<Jet> coeffs) : space_(std::move(space)), c_(std::move(coeffs)) {
  for (auto& c : c_)
    if (c.space() != space_) c = c.space()->num_vars() == 0 ? Jet(space_, c.value()) : c.in_space(space_);
}

int PolyZ::degree0(double tol) const {
  double scale = 0.0;
  for (auto& c : c_) scale = std::max(scale, std::abs(c.value()));
  for (int k = degree(); k >= 0; --k)
    if (std::abs(c_[k].value()) > tol * scale) return k;
  return -1;
}

bool PolyZ::is_zero() const {
  for (auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

PolyZ& PolyZ::trim(double tol) {
  while (!c_.empty() && c_.back().is_zero(tol)) c_.pop_back();
  return *this;
}

CPoly PolyZ::order0() const {
  CPoly p(c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) p[k] = c_[k].value();
  return p;
}

PolyZ PolyZ::derivative() const {
  PolyZ r(space_, c_.empty() ? 0 : c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) r.c_[k - 1] = c_[k] * cplx(double(k));
  return r;
}

PolyZ PolyZ::homogeneous(int d) const {
  PolyZ r = *this;
  for (auto& c : r.c_) c = c.homogeneous(d);
  return r;
}

PolyZ PolyZ::in_space(const SpacePtr& target) const {
  PolyZ r(target, 0);
  r.c_.reserve(c_.size());
  for (auto& c : c_) r.c_.push_back(c.in_space(target));
  return r;
}

PolyZ PolyZ::partial(int var, int k) const {
  SpacePtr target = space_->partial_space(var, k);
  PolyZ r(target, 0);
  r.c_.reserve(c_.size());
  for (auto& c : c_) r.c_.push_back(extract_partial(c, var, k));
  return r;
}

PolyZ PolyZ::shifted(int k) const {
  if (k < 0) throw std::invalid_argument("negative polynomial shift");
  if (c_.empty()) return *this;
  PolyZ r(space_, c_.size() + k);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i + k] = c_[i];
  return r;
}

Jet PolyZ::eval(cplx z) const {
  Jet v(space_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    v *= z;
    v += *it;
  }
  return v;
}

Jet PolyZ::eval(const Jet& z) const {
  Jet v(space_);
  if (z.is_scalar()) return eval(z.value());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * z + *it;
  return v;
}

PolyZ& PolyZ::operator+=(const PolyZ& o) {
  if (o.c_.size() > c_.size()) resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) axpy(c_[k], 1.0, o.c_[k]);
  return *this;
}

PolyZ& PolyZ::operator-=(const PolyZ& o) {
  if (o.c_.size() > c_.size()) resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) axpy(c_[k], -1.0, o.c_[k]);
  return *this;
}

PolyZ& PolyZ::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  return *this;
}

PolyZ operator+(PolyZ a, const PolyZ& b) { return a += b; }
PolyZ operator-(PolyZ a, const PolyZ& b) { return a -= b; }
PolyZ operator*(PolyZ a, cplx s) { return a *= s; }

PolyZ operator*(const PolyZ& a, const PolyZ& b) {
  if (a.size() == 0 || b.size() == 0) return PolyZ(common_space(a.space(), b.space()), 0);
  SpacePtr s = common_space(a.space(), b.space());
  PolyZ r(s, a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

PolyZ operator*(const PolyZ& a, const CPoly& b) {
  if (a.size() == 0 || b.empty()) return PolyZ(a.space(), 0);
  PolyZ r(a.space(), a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) axpy(r[i + j], b[j], a[i]);
  return r;
}

PolyZ operator*(const PolyZ& a, const Jet& s) {
  PolyZ r(common_space(a.space(), s.space()), 0);
  std::vector<Jet> c;
  c.reserve(a.size());
  for (auto& x : a.coeffs()) c.push_back(x * s);
  return PolyZ(r.space(), std::move(c));
}

// ---------------------------------------------------------------- Cut

cplx Cut::r0(cplx z) const { return std::sqrt(z - alpha) * std::sqrt(z - beta); }

Jet Cut::r0(const Jet& z) const {
  Jet w = (z - cplx(alpha)) * (z - cplx(beta));
  return sqrt(w, r0(z.value()));
}

double Cut::dist(cplx z) const {
  double x = std::clamp(z.real(), alpha, beta);
  return std::abs(z - cplx(x));
}

// ---------------------------------------------------------------- Denominator

Denominator Denominator::from_roots(const std::vector<cplx>& roots) {
  Denominator d;
  for (auto r : roots) d.add(r, 1);
  return d;
}

int Denominator::degree() const {
  int n = 0;
  for (auto& f : f_) n += f.mult;
  return n;
}

int Denominator::find(cplx z, double tol) const {
  for (std::size_t i = 0; i < f_.size(); ++i)
    if (std::abs(f_[i].root - z) <= tol * std::max(1.0, std::abs(z))) return int(i);
  return -1;
}

void Denominator::add(cplx root, int mult) {
  if (mult <= 0) return;
  int i = find(root, kRootMergeTol);
  if (i >= 0) {
    f_[i].mult += mult;
  } else {
    f_.push_back({root, mult});
  }
}

Denominator Denominator::times(const Denominator& o) const {
  Denominator r = *this;
  for (auto& f : o.f_) r.add(f.root, f.mult);
  return r;
}

Denominator Denominator::power(int k) const {
  Denominator r = *this;
  for (auto& f : r.f_) f.mult *= k;
  return r;
}

Denominator Denominator::lcm(const Denominator& a, const Denominator& b) {
  Denominator r = a;
  for (auto& f : b.f_) {
    int i = r.find(f.root, kRootMergeTol);
    if (i < 0) {
      r.f_.push_back(f);
    } else {
      r.f_[i].mult = std::max(r.f_[i].mult, f.mult);
    }
  }
  return r;
}

CPoly Denominator::cofactor(const Denominator& part) const {
  CPoly p{1.0};
  for (auto& f : f_) {
    int i = part.find(f.root, kRootMergeTol);
    int m = f.mult - (i >= 0 ? part.f_[i].mult : 0);
    if (m < 0) throw std::logic_error("cofactor of a non-divisor");
    for (int k = 0; k < m; ++k) p = cpoly_mul(p, {-f.root, 1.0});
  }
  return p;
}

CPoly Denominator::poly() const { return cofactor(Denominator()); }

cplx Denominator::eval(cplx z) const {
  cplx v = 1.0;
  for (auto& f : f_) v *= std::pow(z - f.root, f.mult);
  return v;
}

Jet Denominator::eval(const Jet& z) const {
  Jet v(z.space(), 1.0);
  for (auto& f : f_) v = v * pow(z - f.root, f.mult);
  return v;
}

std::vector<cplx> Denominator::inverse_series(int count) const {
  std::vector<cplx> s(std::max(count, 0), 0.0);
  if (count <= 0) return s;
  s[0] = 1.0;
  for (auto& f : f_) {
    if (f.root == 0.0) continue;
    std::vector<cplx> g(count);
    cplx rn = 1.0;
    for (int n = 0; n < count; ++n) {
      g[n] = binom(f.mult + n - 1, n) * rn;
      rn *= f.root;
    }
    s = series_mul(s, g, count);
  }
  return s;
}

// ---------------------------------------------------------------- AlgebraicFn

AlgebraicFn::AlgebraicFn(SpacePtr space, Cut c) : a(space, 0), b(space, 0), cut(c) {}

AlgebraicFn AlgebraicFn::from_poly(const PolyZ& p, Cut c) {
  AlgebraicFn f(p.space(), c);
  f.a = p;
  return f;
}

AlgebraicFn AlgebraicFn::constant(SpacePtr space, Cut c, cplx value) {
  AlgebraicFn f(space, c);
  f.a = PolyZ(space, CPoly{value});
  return f;
}

AlgebraicFn AlgebraicFn::r0(SpacePtr space, Cut c) {
  AlgebraicFn f(space, c);
  f.b = PolyZ(space, CPoly{1.0});
  return f;
}

AlgebraicFn AlgebraicFn::branch(const BranchRoot& br, const SpacePtr& space) {
  Cut c = br.cut();
  Jet alpha = br.alpha.in_space(space), beta = br.beta.in_space(space);
  // eps = (z-alpha)(z-beta) - W0, nilpotent
  PolyZ eps(space, 2);
  eps[0] = alpha * beta - cplx(c.alpha * c.beta);
  eps[1] = -(alpha + beta) + cplx(c.alpha + c.beta);
  eps[0].coeffs()[0] = 0.0;
  eps[1].coeffs()[0] = 0.0;
  if (eps.is_zero()) return r0(space, c);
  int K = space->order();
  CPoly w0 = c.w0();
  // R = R0 * sum_k binom(1/2,k) eps^k W0^(K-k) / W0^K
  std::vector<CPoly> w0pow(K + 1, CPoly{1.0});
  for (int k = 1; k <= K; ++k) w0pow[k] = cpoly_mul(w0pow[k - 1], w0);
  PolyZ num(space, 0);
  PolyZ epsk(space, CPoly{1.0});
  double coef = 1.0;
  for (int k = 0; k <= K; ++k) {
    num += (epsk * w0pow[K - k]) * cplx(coef);
    coef *= (0.5 - double(k)) / double(k + 1);
    epsk = epsk * eps;
  }
  AlgebraicFn f(space, c);
  f.b = num;
  f.d = Denominator::from_roots({c.alpha, c.beta}).power(K);
  return f;
}

int AlgebraicFn::top_power() const {
  int da = a.size() ? a.degree() : -1000000;
  int db = b.size() ? b.degree() + 1 : -1000000;
  return std::max(da, db) - d.degree();
}

AlgebraicFn AlgebraicFn::homogeneous(int deg) const {
  AlgebraicFn f = *this;
  f.a = a.homogeneous(deg);
  f.b = b.homogeneous(deg);
  return f;
}

AlgebraicFn AlgebraicFn::in_space(const SpacePtr& target) const {
  AlgebraicFn f = *this;
  f.a = a.in_space(target);
  f.b = b.in_space(target);
  return f;
}

AlgebraicFn AlgebraicFn::partial(int var, int k) const {
  AlgebraicFn f = *this;
  f.a = a.partial(var, k);
  f.b = b.partial(var, k);
  return f;
}

AlgebraicFn AlgebraicFn::shifted(int k) const {
  AlgebraicFn f = *this;
  if (k < 0) {
    f.d.add(0.0, -k);
    return f;
  }
  int i = f.d.find(0.0, 0.0);
  int cancel = 0;
  if (i >= 0) {
    Denominator nd;
    for (std::size_t j = 0; j < f.d.factors().size(); ++j) {
      auto fac = f.d.factors()[j];
      if (int(j) == i) {
        cancel = std::min(k, fac.mult);
        fac.mult -= cancel;
      }
      nd.add(fac.root, fac.mult);
    }
    f.d = nd;
  }
  f.a = a.shifted(k - cancel);
  f.b = b.shifted(k - cancel);
  return f;
}

AlgebraicFn AlgebraicFn::over(const Denominator& extra) const {
  AlgebraicFn f = *this;
  f.d = d.times(extra);
  return f;
}

AlgebraicFn AlgebraicFn::times_r0() const {
  AlgebraicFn f = *this;
  f.a = b * cut.w0();
  f.b = a;
  return f;
}

AlgebraicFn& AlgebraicFn::operator*=(cplx s) {
  a *= s;
  b *= s;
  return *this;
}

namespace {

bool same_denominator(const Denominator& x, const Denominator& y) {
  if (x.factors().size() != y.factors().size()) return false;
  for (auto& f : x.factors()) {
    int i = y.find(f.root, kRootMergeTol);
    if (i < 0 || y.factors()[i].mult != f.mult) return false;
  }
  return true;
}

void check_cut(const AlgebraicFn& f, const AlgebraicFn& g) {
  if (!(f.cut == g.cut)) throw std::invalid_argument("algebraic functions over different cuts");
}

}  // namespace

AlgebraicFn& AlgebraicFn::operator+=(const AlgebraicFn& o) {
  check_cut(*this, o);
  if (same_denominator(d, o.d)) {
    a += o.a;
    b += o.b;
    return *this;
  }
  Denominator l = Denominator::lcm(d, o.d);
  CPoly cf = l.cofactor(d), co = l.cofactor(o.d);
  a = a * cf + o.a * co;
  b = b * cf + o.b * co;
  d = l;
  return *this;
}

AlgebraicFn& AlgebraicFn::operator-=(const AlgebraicFn& o) {
  AlgebraicFn n = o;
  n *= -1.0;
  return *this += n;
}

AlgebraicFn operator+(AlgebraicFn f, const AlgebraicFn& g) { return f += g; }
AlgebraicFn operator-(AlgebraicFn f, const AlgebraicFn& g) { return f -= g; }
AlgebraicFn operator*(AlgebraicFn f, cplx s) { return f *= s; }

AlgebraicFn operator*(const AlgebraicFn& f, const AlgebraicFn& g) {
  check_cut(f, g);
  SpacePtr s = common_space(f.space(), g.space());
  AlgebraicFn r(s, f.cut);
  r.a = f.a * g.a + (f.b * g.b) * f.cut.w0();
  r.b = f.a * g.b + f.b * g.a;
  r.d = f.d.times(g.d);
  return r;
}

AlgebraicFn operator*(const AlgebraicFn& f, const PolyZ& p) {
  AlgebraicFn r = f;
  r.a = f.a * p;
  r.b = f.b * p;
  return r;
}

AlgebraicFn divide(const AlgebraicFn& f, const PolyZ& p_in) {
  PolyZ p = p_in;
  p.trim();
  int deg0 = p.degree0(1e-13);
  if (deg0 < 0) numerical_error("division by an AlgebraicFn with zero order-0 part");
  CPoly p0 = p.order0();
  p0.resize(deg0 + 1);
  cplx lead = p0.back();

  // deflate roots we already know about before calling the eigen solver
  std::vector<cplx> known{f.cut.alpha, f.cut.beta, 0.0};
  for (auto& fac : f.d.factors()) known.push_back(fac.root);
  Denominator roots;
  CPoly rest = p0;
  for (auto r : known) {
    while (rest.size() > 1) {
      // synthetic division by (z - r)
      int n = int(rest.size()) - 1;
      CPoly q(n);
      cplx carry = rest[n];
      for (int k = n - 1; k >= 0; --k) {
        q[k] = carry;
        carry = rest[k] + r * carry;
      }
      double rscale = 0.0, pw = 1.0;
      for (int k = 0; k <= n; ++k) {
        rscale += std::abs(rest[k]) * pw;
        pw *= std::max(1.0, std::abs(r));
      }
      if (std::abs(carry) > 1e-11 * rscale) break;
      roots.add(r, 1);
      rest = q;
    }
  }
  auto others = cpoly_roots(rest);
  for (std::size_t i = 0; i < others.size(); ++i)
    for (std::size_t j = i + 1; j < others.size(); ++j)
      if (std::abs(others[i] - others[j]) < 1e-6 * std::max(1.0, std::abs(others[i])))
        numerical_error("confluent roots unsupported");
  for (auto r : others) roots.add(r, 1);

  PolyZ nil = p;
  for (int k = 0; k < int(nil.size()); ++k) nil[k].coeffs()[0] = 0.0;
  AlgebraicFn r = f;
  if (nil.is_zero()) {
    r.d = f.d.times(roots);
    r *= 1.0 / lead;
    return r;
  }
  int K = p.space()->order();
  PolyZ p0z(p.space(), p0);
  // 1/p = sum_k (-nil)^k p0^(K-k) / p0^(K+1)
  std::vector<PolyZ> p0pow(K + 1, PolyZ(p.space(), CPoly{1.0}));
  for (int k = 1; k <= K; ++k) p0pow[k] = p0pow[k - 1] * p0;
  PolyZ num(p.space(), 0);
  PolyZ nk(p.space(), CPoly{1.0});
  for (int k = 0; k <= K; ++k) {
    num += nk * p0pow[K - k];
    nk = nk * nil * cplx(-1.0);
  }
  r = f * num;
  r.d = f.d.times(roots.power(K + 1));
  r *= std::pow(lead, -(K + 1));
  return r;
}

AlgebraicFn operator/(const AlgebraicFn& f, const AlgebraicFn& g) {
  check_cut(f, g);
  CPoly gd = g.d.poly();
  if (g.b.is_zero()) return divide(f * PolyZ(g.space(), gd), g.a);
  if (g.a.is_zero()) {
    AlgebraicFn t = (f * PolyZ(g.space(), gd)).times_r0().over(Denominator::from_roots({f.cut.alpha, f.cut.beta}));
    return divide(t, g.b);
  }
  AlgebraicFn conj(g.space(), g.cut);
  conj.a = g.a * gd;
  conj.b = g.b * gd * cplx(-1.0);
  PolyZ n = g.a * g.a - (g.b * g.b) * g.cut.w0();
  return divide(f * conj, n);
}

// ---------------------------------------------------------------- LaurentSeries

LaurentSeries::LaurentSeries(SpacePtr space, int top, int depth)
    : space_(std::move(space)), top_(std::max(top, -depth)), depth_(depth) {
  c_.assign(top_ + depth_ + 1, Jet(space_));
}

Jet LaurentSeries::coeff(int p) const {
  if (p > top_ || p < -depth_) return Jet(space_);
  return c_[top_ - p];
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
  SpacePtr s = common_space(space_, o.space_);
  int top = std::max(top_, o.top_);
  int depth = std::min(depth_, o.depth_);
  LaurentSeries r(s, top, depth);
  for (int p = top; p >= -depth; --p) {
    Jet v(s);
    if (p <= top_ && p >= -depth_) axpy(v, 1.0, c_[top_ - p]);
    if (p <= o.top_ && p >= -o.depth_) axpy(v, 1.0, o.c_[o.top_ - p]);
    r.at(p) = v;
  }
  return *this = r;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) {
  LaurentSeries n = o;
  for (auto& c : n.c_) c = -c;
  return *this += n;
}

LaurentSeries LaurentSeries::truncated(int depth) const {
  LaurentSeries r(space_, top_, std::min(depth, depth_));
  for (int p = r.top_; p >= -r.depth_; --p) r.at(p) = coeff(p);
  return r;
}

LaurentSeries LaurentSeries::homogeneous(int d) const {
  LaurentSeries r = *this;
  for (auto& c : r.c_) c = c.homogeneous(d);
  return r;
}

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  SpacePtr s = common_space(a.space(), b.space());
  int top = a.top_power() + b.top_power();
  // keep only powers to which every contributing pair is known
  int depth = std::min(a.depth() - b.top_power(), b.depth() - a.top_power());
  depth = std::max(depth, -top);
  LaurentSeries r(s, top, depth);
  for (int p = a.top_power(); p >= -a.depth(); --p) {
    Jet ap = a.coeff(p);
    if (ap.is_zero()) continue;
    for (int q = b.top_power(); q >= -b.depth(); --q) {
      if (p + q < -depth) break;
      r.at(p + q) += ap * b.coeff(q);
    }
  }
  return r;
}

LaurentSeries laurent_expand(const AlgebraicFn& f, int depth) {
  if (depth < 1) throw std::invalid_argument("Laurent depth must be >= 1");
  SpacePtr s = f.space();
  if (f.is_zero()) return LaurentSeries(s, 0, depth);
  int top = f.top_power();
  LaurentSeries r(s, top, depth);
  int degD = f.d.degree();
  int count = top + depth + 2;
  std::vector<cplx> inv = f.d.inverse_series(count);
  for (int k = 0; k < int(f.a.size()); ++k) {
    if (f.a[k].is_zero()) continue;
    for (int p = std::min(top, k - degD); p >= -depth; --p) axpy(r.at(p), inv[k - degD - p], f.a[k]);
  }
  if (f.b.size()) {
    std::vector<cplx> u = series_mul(r0_series(f.cut.alpha, f.cut.beta, count), inv, count);
    for (int k = 0; k < int(f.b.size()); ++k) {
      if (f.b[k].is_zero()) continue;
      for (int p = std::min(top, k + 1 - degD); p >= -depth; --p) axpy(r.at(p), u[k + 1 - degD - p], f.b[k]);
    }
  }
  return r;
}

Parts project_parts(const LaurentSeries& s) {
  Parts out{PolyZ(s.space(), std::max(s.top_power() + 1, 0)), LaurentSeries(s.space(), -1, s.depth())};
  for (int p = s.top_power(); p >= 0; --p) out.plus[p] = s.coeff(p);
  for (int p = -1; p >= -s.depth(); --p) out.minus.at(p) = s.coeff(p);
  return out;
}

// ---------------------------------------------------------------- evaluation

namespace {

void check_eval_point(const AlgebraicFn& f, cplx z0) {
  if (f.b.size() && !f.b.is_zero() && f.cut.dist(z0) < 1e-8) numerical_error("evaluation on the cut");
  for (auto& fac : f.d.factors())
    if (std::abs(z0 - fac.root) < 1e-8) numerical_error("evaluation at a denominator root");
}

// p(z) * z^(-deg p) by Horner in 1/z.
Jet reversed_horner(const PolyZ& p, cplx w) {
  Jet v(p.space());
  for (auto& c : p.coeffs()) {
    v *= w;
    v += c;
  }
  return v;
}

Jet reversed_horner(const PolyZ& p, const Jet& w) {
  Jet v(p.space());
  for (auto& c : p.coeffs()) v = v * w + c;
  return v;
}

}  // namespace

Jet alg_eval(const AlgebraicFn& f, cplx z0) {
  check_eval_point(f, z0);
  SpacePtr s = f.space();
  cplx r0 = f.cut.r0(z0);
  if (std::abs(z0) <= 1.0) {
    Jet v = f.a.eval(z0) + f.b.eval(z0) * r0;
    return v / f.d.eval(z0);
  }
  cplx w = 1.0 / z0;
  cplx dt = 1.0;
  for (auto& fac : f.d.factors()) dt *= std::pow(1.0 - fac.root * w, fac.mult);
  int degD = f.d.degree();
  Jet v(s);
  if (f.a.size()) v += reversed_horner(f.a, w) * (std::pow(z0, f.a.degree() - degD) / dt);
  if (f.b.size()) v += reversed_horner(f.b, w) * (r0 * std::pow(z0, f.b.degree() - degD) / dt);
  return v;
}

Jet alg_eval(const AlgebraicFn& f, const Jet& z0) {
  if (z0.is_scalar()) return alg_eval(f, z0.value());
  check_eval_point(f, z0.value());
  SpacePtr s = common_space(f.space(), z0.space());
  Jet z = z0.in_space(s);
  Jet r0 = f.cut.r0(z);
  if (std::abs(z0.value()) <= 1.0) {
    Jet v = f.a.eval(z) + f.b.eval(z) * r0;
    return v / f.d.eval(z);
  }
  Jet w = inverse(z);
  Jet dt(s, 1.0);
  for (auto& fac : f.d.factors()) dt = dt * pow(1.0 - fac.root * w, fac.mult);
  int degD = f.d.degree();
  Jet v(s);
  if (f.a.size()) v += reversed_horner(f.a, w) * pow(z, f.a.degree() - degD);
  if (f.b.size()) v += reversed_horner(f.b, w) * r0 * pow(z, f.b.degree() - degD);
  return v / dt;
}

LimitValue alg_eval_limit(const AlgebraicFn& f, cplx root, const Jet& z0) {
  int idx = f.d.find(root, 1e-8);
  SpacePtr s = common_space(f.space(), z0.space());
  if (idx < 0) return {alg_eval(f, z0), 0.0};
  cplx r = f.d.factors()[idx].root;
  int p = f.d.factors()[idx].mult;
  Jet delta = z0.in_space(s) - r;
  if (std::abs(delta.value()) > 1e-8 * std::max(1.0, std::abs(r)))
    throw std::invalid_argument("limit point is not at the denominator root");
  if (f.cut.dist(r) < 1e-8) numerical_error("removable-point evaluation on the cut");
  int extra = s->order() + (delta.value() == 0.0 ? 0 : 2);
  int n = p + extra;

  std::vector<Jet> A = taylor_shift(f.a.in_space(s), r, n);
  std::vector<Jet> B = taylor_shift(f.b.in_space(s), r, n);
  // local series of R0 around r
  std::vector<cplx> w{(r - f.cut.alpha) * (r - f.cut.beta), 2.0 * r - (f.cut.alpha + f.cut.beta), 1.0};
  std::vector<cplx> rs(n + 1, 0.0);
  rs[0] = f.cut.r0(r);
  for (int k = 1; k <= n; ++k) {
    cplx acc = k < 3 ? w[k] : cplx(0.0);
    for (int i = 1; i < k; ++i) acc -= rs[i] * rs[k - i];
    rs[k] = acc / (2.0 * rs[0]);
  }
  // 1 / (other factors) around r
  std::vector<cplx> inv(n + 1, 0.0);
  inv[0] = 1.0;
  for (std::size_t j = 0; j < f.d.factors().size(); ++j) {
    if (int(j) == idx) continue;
    auto fac = f.d.factors()[j];
    cplx dr = r - fac.root;
    std::vector<cplx> g(n + 1);
    for (int k = 0; k <= n; ++k) g[k] = binom(fac.mult + k - 1, k) * std::pow(-1.0 / dr, k) * std::pow(dr, -fac.mult);
    inv = series_mul(inv, g, n + 1);
  }
  std::vector<Jet> N(n + 1, Jet(s));
  for (int k = 0; k <= n; ++k) {
    N[k] = A[k];
    for (int i = 0; i <= k; ++i) axpy(N[k], rs[k - i], B[i]);
  }
  std::vector<Jet> G(n + 1, Jet(s));
  double scale = 0.0, sing = 0.0;
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i <= k; ++i) axpy(G[k], inv[k - i], N[i]);
    scale = std::max(scale, std::max(A[k].max_abs(), (B[k] * rs[0]).max_abs()) * std::abs(inv[0]));
    if (k < p) sing = std::max(sing, G[k].max_abs());
  }
  Jet v(s);
  Jet dq(s, 1.0);
  for (int q = 0; p + q <= n; ++q) {
    v += G[p + q] * dq;
    dq = dq * delta;
  }
  return {v, scale > 0.0 ? sing / scale : sing};
}

std::vector<Jet> poly_roots_lifted(const PolyZ& p) {
  int deg0 = p.degree0(1e-13);
  if (deg0 < 0) throw std::invalid_argument("zero polynomial has no roots");
  CPoly p0 = p.order0();
  p0.resize(deg0 + 1);
  auto roots = cpoly_roots(p0);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-6 * std::max(1.0, std::abs(roots[i])))
        numerical_error("confluent roots unsupported");
  PolyZ dp = p.derivative();
  std::vector<Jet> out;
  int K = p.space()->order();
  for (auto r : roots) {
    Jet z(p.space(), r);
    cplx d0 = cpoly_eval(dp.order0(), r);
    for (int it = 0; it <= K + 1; ++it) z -= p.eval(z) / d0;
    // one full Newton step to clean up order-0 roundoff
    z -= p.eval(z) / dp.eval(z);
    out.push_back(z);
  }
  return out;
}

}  // namespace loopeq
