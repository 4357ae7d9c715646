#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace loopeq {

using cplx = std::complex<double>;

class JetSpace;
using SpacePtr = std::shared_ptr<const JetSpace>;

// Monomials in num_vars coupling directions with total degree <= order.
// Directions at index >= physical are probes; their combined degree is
// capped at probe_budget, which is all the vertex operator ever consumes.
class JetSpace : public std::enable_shared_from_this<JetSpace> {
public:
  struct Product {
    std::uint32_t j, k;
  };
  struct Transfer {
    std::uint32_t src, dst;
    double factor;
  };

  static SpacePtr get(int num_vars, int order, int physical = -1, int probe_budget = -1);
  static SpacePtr scalar() { return get(0, 0); }

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  int physical() const { return physical_; }
  int probe_budget() const { return probe_budget_; }
  std::size_t size() const { return degree_.size(); }

  const std::uint8_t* exponents(std::size_t idx) const { return &exps_[idx * num_vars_]; }
  int degree(std::size_t idx) const { return degree_[idx]; }
  // -1 when the monomial is not stored.
  long index_of(const std::vector<std::uint8_t>& exps) const;
  long index_of_var(int var) const { return var_index_[var]; }

  // products grouped by left index: entries [row_start[i], row_start[i+1]).
  const std::vector<std::uint32_t>& row_start() const { return row_start_; }
  const std::vector<Product>& products() const { return products_; }

  // Space holding the k-th partial along var.
  SpacePtr partial_space(int var, int k) const;
  const std::vector<Transfer>& partial_map(int var, int k) const;
  // Coefficient map from this space into `target` (truncation or embedding).
  const std::vector<Transfer>& transfer_map(const JetSpace& target) const;

private:
  JetSpace(int num_vars, int order, int physical, int probe_budget);
  void build();

  int num_vars_, order_, physical_, probe_budget_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<long> var_index_;
  std::map<std::vector<std::uint8_t>, std::uint32_t> lookup_;
  std::vector<std::uint32_t> row_start_;
  std::vector<Product> products_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<int, int>, std::vector<Transfer>> partial_cache_;
  mutable std::map<const JetSpace*, std::vector<Transfer>> transfer_cache_;
};

// Truncated multivariate Taylor polynomial; coefficients already carry 1/k!.
class Jet {
public:
  Jet() : space_(JetSpace::scalar()), c_(1, cplx(0.0)) {}
  explicit Jet(cplx value) : space_(JetSpace::scalar()), c_(1, value) {}
  explicit Jet(double value) : Jet(cplx(value)) {}
  Jet(SpacePtr space, cplx value = 0.0);
  Jet(SpacePtr space, std::vector<cplx> coeffs);

  // Coupling var at base value `base` with unit first-order part.
  static Jet variable(SpacePtr space, int var, cplx base);

  const SpacePtr& space() const { return space_; }
  int order() const { return space_->order(); }
  int num_vars() const { return space_->num_vars(); }
  std::size_t size() const { return c_.size(); }
  const std::vector<cplx>& coeffs() const { return c_; }
  std::vector<cplx>& coeffs() { return c_; }
  cplx value() const { return c_[0]; }
  cplx operator[](std::size_t idx) const { return c_[idx]; }
  cplx coeff(const std::vector<std::uint8_t>& exps) const;
  bool is_scalar() const;
  bool is_zero(double tol = 0.0) const;
  double max_abs() const;
  double nil_abs() const;  // largest |coefficient| beyond order 0

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator*=(cplx s);
  Jet operator-() const;

  // Homogeneous component of total degree d.
  Jet homogeneous(int d) const;
  Jet truncated(int d) const;
  Jet in_space(const SpacePtr& target) const;
  Jet conj() const;

private:
  friend Jet operator*(const Jet& a, const Jet& b);
  SpacePtr space_;
  std::vector<cplx> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator*(Jet a, cplx s);
Jet operator*(cplx s, Jet a);
Jet operator/(Jet a, cplx s);
Jet operator+(Jet a, cplx s);
Jet operator-(Jet a, cplx s);
Jet operator-(cplx s, const Jet& a);

Jet inverse(const Jet& a);
// Square root continued from the order-0 root `root0` (principal when omitted).
Jet sqrt(const Jet& a);
Jet sqrt(const Jet& a, cplx root0);
Jet pow(const Jet& a, int n);
Jet log(const Jet& a);
// k-th partial derivative along var, as a jet of order K-k.
Jet extract_partial(const Jet& a, int var, int k);
// Physical derivative values d^|e|/dt^e at the base point (factorials restored).
cplx derivative(const Jet& a, const std::vector<std::uint8_t>& exps);

SpacePtr common_space(const SpacePtr& a, const SpacePtr& b);

}  // namespace loopeq
