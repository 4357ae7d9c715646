#include "loopeq/model.hpp"

#include <cmath>

#include "loopeq/error.hpp"

namespace loopeq {

bool ExternalField::gaussian() const {
  for (double v : t_phys)
    if (v != 0.0) return false;
  return true;
}

Jet ExternalField::coupling(int j) const { return Jet::variable(space, j - 1, t(j)); }

double ExternalField::potential(double x) const {
  double v = 0.0;
  for (int j = int(t_phys.size()); j >= 1; --j) v = (v + t_phys[j - 1]) * x;
  return v + 0.5 * x * x;
}

double ExternalField::potential_derivative(double x) const {
  double v = 0.0;
  for (int j = int(t_phys.size()); j >= 1; --j) v = v * x + j * t_phys[j - 1];
  return v + x;
}

ExternalField ExternalField::with_layout(int m, int K, int budget) const {
  return build_field(upsilon, t_phys, m, K, budget);
}

ExternalField ExternalField::scaled(double s) const {
  ExternalField f = *this;
  for (auto& v : f.t_phys) v *= s;
  return f;
}

ExternalField build_field(int upsilon, std::vector<double> t_phys, int probe_m, int jet_order, int probe_budget) {
  if (upsilon < 2 || upsilon % 2) usage_error("upsilon must be even and at least 2");
  if (int(t_phys.size()) > upsilon) {
    for (std::size_t j = upsilon; j < t_phys.size(); ++j)
      if (t_phys[j] != 0.0) usage_error("couplings beyond upsilon must vanish");
  }
  t_phys.resize(upsilon, 0.0);
  for (double v : t_phys)
    if (!std::isfinite(v)) usage_error("couplings must be finite");
  bool zero = true;
  for (double v : t_phys) zero = zero && v == 0.0;
  if (!zero && !(t_phys[upsilon - 1] > 0.0)) usage_error("t_upsilon must be positive");
  if (probe_m < upsilon) usage_error("probe_m must be at least upsilon");
  if (jet_order < 0) usage_error("jet_order must be non-negative");
  ExternalField f;
  f.upsilon = upsilon;
  f.t_phys = std::move(t_phys);
  f.probe_m = probe_m;
  f.jet_order = jet_order;
  f.space = JetSpace::get(probe_m, jet_order, upsilon, probe_budget);
  return f;
}

Admissibility admissibility_check(const ExternalField& field, const AdmissibilityParams& params) {
  if (field.gaussian()) return {true, "Gaussian closure point"};
  double norm = 0.0, lower = 0.0;
  for (int j = 1; j <= field.upsilon; ++j) {
    norm += field.t(j) * field.t(j);
    if (j < field.upsilon) lower += std::abs(field.t(j));
  }
  if (std::sqrt(norm) > params.T_bound) return {false, "|t| exceeds T"};
  if (!(field.t(field.upsilon) > params.gamma * lower))
    return {false, "t_upsilon must exceed gamma times the sum of lower |t_j|"};
  return {true, "admissible"};
}

PolyZ v_prime(const ExternalField& field) {
  PolyZ p(field.space, std::size_t(field.probe_m));
  for (int j = 1; j <= field.probe_m; ++j) p[j - 1] = field.coupling(j) * cplx(double(j));
  p[1] += Jet(field.space, 1.0);
  return p;
}

}  // namespace loopeq
