#pragma once

#include <vector>

#include "loopeq/jet.hpp"

namespace loopeq {

// Plain complex polynomial, index = power of z.
using CPoly = std::vector<cplx>;

CPoly cpoly_mul(const CPoly& a, const CPoly& b);
cplx cpoly_eval(const CPoly& p, cplx z);
CPoly cpoly_from_roots(const std::vector<cplx>& roots);
// Roots of p by companion eigenvalues with Newton polishing.
std::vector<cplx> cpoly_roots(const CPoly& p);

class PolyZ {
public:
  PolyZ() : space_(JetSpace::scalar()) {}
  explicit PolyZ(SpacePtr space, std::size_t n = 0) : space_(std::move(space)), c_(n, Jet(space_)) {}
  PolyZ(SpacePtr space, const CPoly& p);
  PolyZ(SpacePtr space, std::vector<Jet> coeffs);

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return c_.size(); }
  int degree() const { return int(c_.size()) - 1; }
  // Highest power whose order-0 coefficient exceeds tol (relative to the largest).
  int degree0(double tol = 1e-13) const;
  bool is_zero() const;

  const Jet& operator[](std::size_t k) const { return c_[k]; }
  Jet& operator[](std::size_t k) { return c_[k]; }
  Jet coeff(int k) const { return k >= 0 && k < int(c_.size()) ? c_[k] : Jet(space_); }
  const std::vector<Jet>& coeffs() const { return c_; }

  void resize(std::size_t n) { c_.resize(n, Jet(space_)); }
  // Drop top coefficients that vanish entirely (jet parts included).
  PolyZ& trim(double tol = 0.0);

  CPoly order0() const;
  PolyZ derivative() const;
  PolyZ homogeneous(int d) const;
  PolyZ in_space(const SpacePtr& target) const;
  PolyZ partial(int var, int k) const;
  PolyZ shifted(int k) const;  // times z^k

  Jet eval(cplx z) const;
  Jet eval(const Jet& z) const;

  PolyZ& operator+=(const PolyZ& o);
  PolyZ& operator-=(const PolyZ& o);
  PolyZ& operator*=(cplx s);

private:
  SpacePtr space_;
  std::vector<Jet> c_;
};

PolyZ operator+(PolyZ a, const PolyZ& b);
PolyZ operator-(PolyZ a, const PolyZ& b);
PolyZ operator*(const PolyZ& a, const PolyZ& b);
PolyZ operator*(const PolyZ& a, const CPoly& b);
PolyZ operator*(PolyZ a, cplx s);
PolyZ operator*(const PolyZ& a, const Jet& s);

// Order-0 cut data: R0(z) = sqrt((z-alpha)(z-beta)) ~ z, cut on [alpha, beta].
struct Cut {
  double alpha = -2.0, beta = 2.0;
  cplx r0(cplx z) const;
  Jet r0(const Jet& z) const;
  CPoly w0() const { return {alpha * beta, -(alpha + beta), 1.0}; }
  double dist(cplx z) const;  // distance to the segment
  bool operator==(const Cut& o) const { return alpha == o.alpha && beta == o.beta; }
};

// Branch points carried as jets.
struct BranchRoot {
  Jet alpha, beta;
  Cut cut() const { return {alpha.value().real(), beta.value().real()}; }
};

// Monic denominator stored as roots with multiplicity.
class Denominator {
public:
  struct Factor {
    cplx root;
    int mult;
  };
  Denominator() = default;
  static Denominator from_roots(const std::vector<cplx>& roots);

  const std::vector<Factor>& factors() const { return f_; }
  int degree() const;
  bool empty() const { return f_.empty(); }
  void add(cplx root, int mult);
  Denominator times(const Denominator& o) const;
  Denominator power(int k) const;
  static Denominator lcm(const Denominator& a, const Denominator& b);
  // Polynomial this / part; part must divide this.
  CPoly cofactor(const Denominator& part) const;
  CPoly poly() const;
  cplx eval(cplx z) const;
  Jet eval(const Jet& z) const;
  // prod (1 - r/z)^(-p) as coefficients of z^(-n), n = 0..count-1.
  std::vector<cplx> inverse_series(int count) const;
  // Index of a factor within tol of z, or -1.
  int find(cplx z, double tol) const;

private:
  std::vector<Factor> f_;
};

class LaurentSeries;

// (A + B*R0)/D over the order-0 cut.
class AlgebraicFn {
public:
  AlgebraicFn() = default;
  AlgebraicFn(SpacePtr space, Cut cut);
  static AlgebraicFn from_poly(const PolyZ& p, Cut cut);
  static AlgebraicFn constant(SpacePtr space, Cut cut, cplx value);
  static AlgebraicFn r0(SpacePtr space, Cut cut);
  // The jet branch sqrt((z-alpha)(z-beta)) in this representation.
  static AlgebraicFn branch(const BranchRoot& br, const SpacePtr& space);

  PolyZ a, b;
  Denominator d;
  Cut cut;

  const SpacePtr& space() const { return a.space(); }
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  int top_power() const;

  AlgebraicFn homogeneous(int deg) const;
  AlgebraicFn in_space(const SpacePtr& target) const;
  AlgebraicFn partial(int var, int k) const;
  AlgebraicFn shifted(int k) const;  // times z^k (k may be negative)
  AlgebraicFn over(const Denominator& extra) const;
  AlgebraicFn times_r0() const;
  AlgebraicFn& operator*=(cplx s);
  AlgebraicFn& operator+=(const AlgebraicFn& o);
  AlgebraicFn& operator-=(const AlgebraicFn& o);
};

AlgebraicFn operator+(AlgebraicFn f, const AlgebraicFn& g);
AlgebraicFn operator-(AlgebraicFn f, const AlgebraicFn& g);
AlgebraicFn operator*(const AlgebraicFn& f, const AlgebraicFn& g);
AlgebraicFn operator*(const AlgebraicFn& f, const PolyZ& p);
AlgebraicFn operator*(AlgebraicFn f, cplx s);
AlgebraicFn operator/(const AlgebraicFn& f, const AlgebraicFn& g);
// f / p with the nilpotent tail of p expanded as a finite geometric series.
AlgebraicFn divide(const AlgebraicFn& f, const PolyZ& p);

class LaurentSeries {
public:
  LaurentSeries() : space_(JetSpace::scalar()) {}
  LaurentSeries(SpacePtr space, int top, int depth);

  const SpacePtr& space() const { return space_; }
  int top_power() const { return top_; }
  int depth() const { return depth_; }
  // Coefficient of z^p (zero outside the stored range).
  Jet coeff(int p) const;
  Jet& at(int p) { return c_[top_ - p]; }
  const std::vector<Jet>& coeffs() const { return c_; }

  LaurentSeries& operator+=(const LaurentSeries& o);
  LaurentSeries& operator-=(const LaurentSeries& o);
  LaurentSeries truncated(int depth) const;
  LaurentSeries homogeneous(int d) const;

private:
  SpacePtr space_;
  int top_ = 0, depth_ = 1;
  std::vector<Jet> c_;
};

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

LaurentSeries laurent_expand(const AlgebraicFn& f, int depth);

struct Parts {
  PolyZ plus;
  LaurentSeries minus;
};
Parts project_parts(const LaurentSeries& s);

// Value at z0 off the cut and away from denominator roots.
Jet alg_eval(const AlgebraicFn& f, cplx z0);
Jet alg_eval(const AlgebraicFn& f, const Jet& z0);

// Value at a removable singularity of the representation: z0's order-0 part is
// (numerically) the denominator root `root`. `residual` measures the size of
// the would-be singular part relative to the numerator scale.
struct LimitValue {
  Jet value;
  double residual;
};
LimitValue alg_eval_limit(const AlgebraicFn& f, cplx root, const Jet& z0);

std::vector<Jet> poly_roots_lifted(const PolyZ& p);

}  // namespace loopeq
