#include "loopeq/jet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <tuple>

#include "loopeq/error.hpp"

namespace loopeq {

namespace {

double factorial_ratio(int n, int k) {
  // n! / (n-k)!
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= double(n - i);
  return r;
}

}  // namespace

SpacePtr JetSpace::get(int num_vars, int order, int physical, int probe_budget) {
  if (num_vars < 0 || order < 0) throw std::invalid_argument("negative jet dimensions");
  if (num_vars == 0) order = 0;
  if (physical < 0 || physical > num_vars) physical = num_vars;
  if (probe_budget < 0 || probe_budget > order) probe_budget = order;
  if (physical == num_vars) probe_budget = order;

  static std::mutex registry_mutex;
  static std::map<std::tuple<int, int, int, int>, SpacePtr> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto key = std::make_tuple(num_vars, order, physical, probe_budget);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  SpacePtr s(new JetSpace(num_vars, order, physical, probe_budget));
  registry.emplace(key, s);
  return s;
}

JetSpace::JetSpace(int num_vars, int order, int physical, int probe_budget)
    : num_vars_(num_vars), order_(order), physical_(physical), probe_budget_(probe_budget) {
  build();
}

void JetSpace::build() {
  std::vector<std::vector<std::uint8_t>> mons;
  std::vector<std::uint8_t> cur(num_vars_, 0);
  std::function<void(int, int, int)> rec = [&](int var, int left, int probe_left) {
    if (var == num_vars_) {
      mons.push_back(cur);
      return;
    }
    int cap = var >= physical_ ? std::min(left, probe_left) : left;
    for (int e = 0; e <= cap; ++e) {
      cur[var] = std::uint8_t(e);
      rec(var + 1, left - e, var >= physical_ ? probe_left - e : probe_left);
    }
    cur[var] = 0;
  };
  rec(0, order_, probe_budget_);

  auto deg = [](const std::vector<std::uint8_t>& m) {
    int d = 0;
    for (auto e : m) d += e;
    return d;
  };
  std::stable_sort(mons.begin(), mons.end(), [&](const auto& a, const auto& b) {
    int da = deg(a), db = deg(b);
    if (da != db) return da < db;
    return a > b;
  });

  exps_.reserve(mons.size() * num_vars_);
  for (std::size_t i = 0; i < mons.size(); ++i) {
    exps_.insert(exps_.end(), mons[i].begin(), mons[i].end());
    degree_.push_back(deg(mons[i]));
    lookup_.emplace(mons[i], std::uint32_t(i));
  }
  var_index_.assign(num_vars_, -1);
  for (int v = 0; v < num_vars_; ++v) {
    std::vector<std::uint8_t> e(num_vars_, 0);
    e[v] = 1;
    var_index_[v] = index_of(e);
  }

  row_start_.assign(size() + 1, 0);
  std::vector<std::uint8_t> sum(num_vars_);
  for (std::size_t i = 0; i < size(); ++i) {
    row_start_[i] = std::uint32_t(products_.size());
    for (std::size_t j = 0; j < size(); ++j) {
      if (degree_[i] + degree_[j] > order_) break;  // sorted by degree
      int probe = 0;
      for (int v = 0; v < num_vars_; ++v) {
        sum[v] = std::uint8_t(exps_[i * num_vars_ + v] + exps_[j * num_vars_ + v]);
        if (v >= physical_) probe += sum[v];
      }
      if (probe > probe_budget_) continue;
      auto it = lookup_.find(sum);
      if (it != lookup_.end()) products_.push_back({std::uint32_t(j), it->second});
    }
  }
  row_start_[size()] = std::uint32_t(products_.size());
}

long JetSpace::index_of(const std::vector<std::uint8_t>& exps) const {
  auto it = lookup_.find(exps);
  return it == lookup_.end() ? -1 : long(it->second);
}

SpacePtr JetSpace::partial_space(int var, int k) const {
  if (k > order_) numerical_error("insufficient jet order");
  if (var >= physical_) {
    if (k > probe_budget_) numerical_error("insufficient jet order");
    return get(num_vars_, order_ - k, physical_, probe_budget_ - k);
  }
  return get(num_vars_, order_ - k, physical_, std::min(probe_budget_, order_ - k));
}

const std::vector<JetSpace::Transfer>& JetSpace::partial_map(int var, int k) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto key = std::make_pair(var, k);
  auto it = partial_cache_.find(key);
  if (it != partial_cache_.end()) return it->second;
  SpacePtr target = partial_space(var, k);
  std::vector<Transfer> map;
  std::vector<std::uint8_t> e(num_vars_);
  for (std::size_t t = 0; t < target->size(); ++t) {
    const std::uint8_t* te = target->exponents(t);
    std::copy(te, te + num_vars_, e.begin());
    e[var] = std::uint8_t(e[var] + k);
    long src = index_of(e);
    if (src < 0) continue;
    map.push_back({std::uint32_t(src), std::uint32_t(t), factorial_ratio(e[var], k)});
  }
  return partial_cache_.emplace(key, std::move(map)).first->second;
}

const std::vector<JetSpace::Transfer>& JetSpace::transfer_map(const JetSpace& target) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = transfer_cache_.find(&target);
  if (it != transfer_cache_.end()) return it->second;
  if (target.num_vars_ != num_vars_ && num_vars_ != 0)
    throw std::invalid_argument("jet space mismatch");
  std::vector<Transfer> map;
  if (num_vars_ == 0) {
    map.push_back({0, 0, 1.0});
  } else {
    std::vector<std::uint8_t> e(num_vars_);
    for (std::size_t t = 0; t < target.size(); ++t) {
      const std::uint8_t* te = target.exponents(t);
      std::copy(te, te + num_vars_, e.begin());
      long src = index_of(e);
      if (src >= 0) map.push_back({std::uint32_t(src), std::uint32_t(t), 1.0});
    }
  }
  return transfer_cache_.emplace(&target, std::move(map)).first->second;
}

SpacePtr common_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return a;
  if (a->num_vars() == 0) return b;
  if (b->num_vars() == 0) return a;
  throw std::invalid_argument("jet space mismatch");
}

Jet::Jet(SpacePtr space, cplx value) : space_(std::move(space)), c_(space_->size(), cplx(0.0)) {
  c_[0] = value;
}

Jet::Jet(SpacePtr space, std::vector<cplx> coeffs) : space_(std::move(space)), c_(std::move(coeffs)) {
  if (c_.size() != space_->size()) throw std::invalid_argument("jet coefficient count mismatch");
}

Jet Jet::variable(SpacePtr space, int var, cplx base) {
  Jet r(space, base);
  long idx = space->index_of_var(var);
  if (idx >= 0) r.c_[idx] = 1.0;
  return r;
}

cplx Jet::coeff(const std::vector<std::uint8_t>& exps) const {
  long idx = space_->index_of(exps);
  return idx < 0 ? cplx(0.0) : c_[idx];
}

bool Jet::is_scalar() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0.0) return false;
  return true;
}

bool Jet::is_zero(double tol) const {
  for (auto& v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

double Jet::max_abs() const {
  double m = 0.0;
  for (auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

double Jet::nil_abs() const {
  double m = 0.0;
  for (std::size_t i = 1; i < c_.size(); ++i) m = std::max(m, std::abs(c_[i]));
  return m;
}

Jet& Jet::operator+=(const Jet& o) {
  if (space_ == o.space_) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  } else if (o.space_->num_vars() == 0) {
    c_[0] += o.c_[0];
  } else {
    SpacePtr s = common_space(space_, o.space_);
    cplx v = c_[0];
    *this = o;
    c_[0] += v;
    (void)s;
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  *this += -o;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.space_->num_vars() == 0) return b * a.c_[0];
  if (b.space_->num_vars() == 0) return a * b.c_[0];
  if (a.space_ != b.space_) throw std::invalid_argument("jet space mismatch");
  const JetSpace& s = *a.space_;
  Jet r(a.space_, cplx(0.0));
  const auto& rows = s.row_start();
  const auto& prods = s.products();
  const cplx* bc = b.c_.data();
  cplx* rc = r.c_.data();
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    cplx ai = a.c_[i];
    if (ai == 0.0) continue;
    for (std::uint32_t p = rows[i]; p < rows[i + 1]; ++p) rc[prods[p].k] += ai * bc[prods[p].j];
  }
  return r;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  *this = *this / o;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet Jet::homogeneous(int d) const {
  Jet r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (space_->degree(i) != d) r.c_[i] = 0.0;
  return r;
}

Jet Jet::truncated(int d) const {
  Jet r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (space_->degree(i) > d) r.c_[i] = 0.0;
  return r;
}

Jet Jet::in_space(const SpacePtr& target) const {
  if (target == space_) return *this;
  Jet r(target, cplx(0.0));
  for (const auto& t : space_->transfer_map(*target)) r.c_[t.dst] = c_[t.src];
  return r;
}

Jet Jet::conj() const {
  Jet r = *this;
  for (auto& v : r.c_) v = std::conj(v);
  return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, cplx s) { return a *= s; }
Jet operator*(cplx s, Jet a) { return a *= s; }
Jet operator/(Jet a, cplx s) { return a *= 1.0 / s; }
Jet operator+(Jet a, cplx s) {
  a.coeffs()[0] += s;
  return a;
}
Jet operator-(Jet a, cplx s) {
  a.coeffs()[0] -= s;
  return a;
}
Jet operator-(cplx s, const Jet& a) { return -a + s; }

namespace {

// sum_k coef[k] * n^k for the nilpotent part n, Horner form.
Jet nil_series(const Jet& n, const std::vector<cplx>& coef) {
  Jet acc(n.space(), coef.back());
  for (int k = int(coef.size()) - 2; k >= 0; --k) acc = acc * n + coef[k];
  return acc;
}

}  // namespace

Jet inverse(const Jet& a) {
  cplx a0 = a.value();
  if (a0 == 0.0) numerical_error("non-invertible jet");
  if (a.is_scalar()) return Jet(a.space(), 1.0 / a0);
  Jet n = a / a0 - 1.0;
  std::vector<cplx> coef(a.order() + 1);
  for (std::size_t k = 0; k < coef.size(); ++k) coef[k] = (k % 2 ? -1.0 : 1.0);
  return nil_series(n, coef) / a0;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.space()->num_vars() == 0 || b.is_scalar()) {
    if (b.value() == 0.0) numerical_error("non-invertible jet");
    return a / b.value();
  }
  return a * inverse(b);
}

Jet sqrt(const Jet& a, cplx root0) {
  cplx a0 = a.value();
  if (a0 == 0.0) numerical_error("square root of a jet with zero order-0 part");
  if (std::abs(root0 * root0 - a0) > 1e-8 * std::abs(a0))
    throw std::invalid_argument("root0 is not a square root of the order-0 part");
  if (a.is_scalar()) return Jet(a.space(), root0);
  Jet n = a / a0 - 1.0;
  std::vector<cplx> coef(a.order() + 1);
  double c = 1.0;
  for (std::size_t k = 0; k < coef.size(); ++k) {
    coef[k] = c;
    c *= (0.5 - double(k)) / double(k + 1);
  }
  return nil_series(n, coef) * root0;
}

Jet sqrt(const Jet& a) {
  cplx a0 = a.value();
  if (a0 == 0.0 || (a0.real() < 0.0 && a0.imag() == 0.0))
    numerical_error("square root of a jet on the branch cut");
  return sqrt(a, std::sqrt(a0));
}

Jet pow(const Jet& a, int n) {
  if (n < 0) return pow(inverse(a), -n);
  Jet r(a.space(), 1.0);
  Jet b = a;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

Jet log(const Jet& a) {
  cplx a0 = a.value();
  if (a0 == 0.0) numerical_error("log of a jet with zero order-0 part");
  Jet n = a / a0 - 1.0;
  std::vector<cplx> coef(a.order() + 1);
  coef[0] = 0.0;
  for (std::size_t k = 1; k < coef.size(); ++k) coef[k] = (k % 2 ? 1.0 : -1.0) / double(k);
  return nil_series(n, coef) + std::log(a0);
}

Jet extract_partial(const Jet& a, int var, int k) {
  if (k == 0) return a;
  if (k < 0 || k > a.order()) numerical_error("insufficient jet order");
  if (var < 0 || var >= a.num_vars()) throw std::invalid_argument("direction out of range");
  const JetSpace& s = *a.space();
  SpacePtr target = s.partial_space(var, k);
  Jet r(target, cplx(0.0));
  for (const auto& t : s.partial_map(var, k)) r.coeffs()[t.dst] = t.factor * a[t.src];
  return r;
}

cplx derivative(const Jet& a, const std::vector<std::uint8_t>& exps) {
  double f = 1.0;
  for (auto e : exps)
    for (int i = 2; i <= e; ++i) f *= i;
  return a.coeff(exps) * f;
}

}  // namespace loopeq
