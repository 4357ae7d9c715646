#pragma once

#include <vector>

#include "loopeq/algebra.hpp"
#include "loopeq/model.hpp"

namespace loopeq {

struct EquilibriumResiduals {
  double endpoint = 0.0;        // order-0 endpoint equations
  double endpoint_jet = 0.0;    // all jet orders
  double normalization_poly = 0.0;  // polynomial part of V' - R h
  double normalization_mass = 0.0;  // |[z^-1](V' - R h) - 2|
  double mass = 0.0;            // |int psi - 1|
  double h_min = 0.0;           // min of h on the support
};

struct EquilibriumMeasure {
  BranchRoot branch;
  PolyZ h;
  Jet lagrange_l;
  EquilibriumResiduals residuals;
  Cut cut() const { return branch.cut(); }
  double center() const { return 0.5 * (cut().alpha + cut().beta); }
  double half_width() const { return 0.5 * (cut().beta - cut().alpha); }
};

BranchRoot solve_endpoints(const ExternalField& field);
PolyZ compute_h(const ExternalField& field, const BranchRoot& branch);
// Endpoints, h and the validation residuals (lagrange_l left unset).
EquilibriumMeasure solve_equilibrium(const ExternalField& field);

double density_psi(const EquilibriumMeasure& eq, double lambda);

struct VariationalReport {
  double l = 0.0;
  double max_eq_dev = 0.0;
  double min_ineq_margin = 0.0;
};

// Effective potential 2 int log|x - y|^-1 psi(y) dy + V(x).
double effective_potential(const EquilibriumMeasure& eq, const ExternalField& field, double x);
std::vector<double> interior_grid(const EquilibriumMeasure& eq, int n = 64);
std::vector<double> exterior_grid(const EquilibriumMeasure& eq, int n = 32, double reach = 2.0);
VariationalReport lagrange_and_variational_check(const EquilibriumMeasure& eq, const ExternalField& field,
                                                 const std::vector<double>& interior,
                                                 const std::vector<double>& exterior, bool parallel = true);

AlgebraicFn resolvent_p0(const EquilibriumMeasure& eq, const ExternalField& field);

}  // namespace loopeq
