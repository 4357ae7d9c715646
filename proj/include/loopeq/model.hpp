#pragma once

#include <string>
#include <vector>

#include "loopeq/algebra.hpp"

namespace loopeq {

struct AdmissibilityParams {
  double T_bound = 1.0;
  double gamma = 1.0;
};

// V(x) = x^2/2 + sum_j t_j x^j. Couplings 1..upsilon are physical, the rest up
// to probe_m are zero at the base point and exist only as jet directions.
struct ExternalField {
  int upsilon = 2;
  std::vector<double> t_phys;  // t_1..t_upsilon
  int probe_m = 2;
  int jet_order = 0;
  SpacePtr space;

  double t(int j) const { return j >= 1 && j <= int(t_phys.size()) ? t_phys[j - 1] : 0.0; }
  bool gaussian() const;
  // t_j as a jet (direction j-1).
  Jet coupling(int j) const;
  double potential(double x) const;
  double potential_derivative(double x) const;
  // The same physical couplings with another probe/jet layout.
  ExternalField with_layout(int probe_m, int jet_order, int probe_budget = -1) const;
  ExternalField scaled(double s) const;
};

ExternalField build_field(int upsilon, std::vector<double> t_phys, int probe_m, int jet_order, int probe_budget = -1);

struct Admissibility {
  bool ok;
  std::string reason;
};
Admissibility admissibility_check(const ExternalField& field, const AdmissibilityParams& params);

PolyZ v_prime(const ExternalField& field);

}  // namespace loopeq
