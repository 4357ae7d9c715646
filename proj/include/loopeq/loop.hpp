#pragma once

#include <map>
#include <vector>

#include "loopeq/algebra.hpp"
#include "loopeq/equilibrium.hpp"
#include "loopeq/model.hpp"

namespace loopeq {

struct LoopOptions {
  int g_max = 2;
  int laurent_depth = 12;
  int taylor_order = 1;    // Taylor order of e_g in the physical couplings
  int probe_m = 0;         // 0 picks the probe count from the geometry
  // Target for (reach/|z_i|)^m; 0 picks 1e-11, or 1e-9 from genus 2 on, where
  // roundoff in the higher probe components grows faster than the tail shrinks.
  double probe_tol = 0.0;
  int probe_max = 120;
  double root_margin = 0.1;  // minimum distance of h's roots from the cut
};

// -sum_{j=1}^{m} z^(-j-1) d/dt_j f; the result carries one jet order less.
AlgebraicFn vertex_derivative(const AlgebraicFn& f);

// M = V' - 2 P_0 = R h split into homogeneous jet components; the degree-i
// component is stored over W0^i.
struct LoopOperator {
  Cut cut;
  CPoly h0;                  // order-0 h, trimmed
  std::vector<cplx> roots;   // roots of h0
  std::vector<AlgebraicFn> parts;
  AlgebraicFn full() const;
  LoopOperator in_space(const SpacePtr& target) const;
};

LoopOperator loop_operator(const EquilibriumMeasure& eq, const SpacePtr& space);

struct LoopHierarchy {
  ExternalField field;  // the probe/jet layout actually used
  EquilibriumMeasure eq;
  LoopOperator op;
  std::vector<AlgebraicFn> levels;   // P_0 .. P_g
  std::vector<AlgebraicFn> sources;  // U_g (index 0 unused)
  std::vector<double> regularity_residuals;
  std::vector<double> contour_residuals;
  int g_max = 0;
  int laurent_depth = 12;
  int taylor_order = 1;
  double probe_ratio = 0.0;  // max(|alpha|, |beta|) / min |z_i|
};

// Probe count for which the truncated vertex operator converges to probe_tol
// at the roots of h and reproduces Laurent data down to laurent_depth.
int choose_probe_count(const EquilibriumMeasure& eq0, int upsilon, const LoopOptions& opt, double* ratio = nullptr);

// Equilibrium, P_0 and the setup shared by all levels.
LoopHierarchy start_hierarchy(const ExternalField& physical, const LoopOptions& opt);
// U_g = d/dV P_{g-1} + sum_{g'=1}^{g-1} P_{g'} P_{g-g'} and the solution of M P_g = Q + U_g.
const AlgebraicFn& solve_loop_level(LoopHierarchy& h);
LoopHierarchy solve_hierarchy(const ExternalField& physical, const LoopOptions& opt);

// Solution of M P = Q + U with Q polynomial, P = O(z^-2) and analytic off the cut.
AlgebraicFn solve_with_source(const AlgebraicFn& U, const LoopOperator& op, double* regularity_residual = nullptr);

using MultiIndex = std::vector<std::uint8_t>;

struct EgDerivativeTable {
  int upsilon = 0;
  // entries[g][j-1] = d e_g / d t_j at the base point
  std::vector<std::vector<double>> entries;
  // taylor[g][a] = coefficient of dt^a in e_g(t + dt) - e_g(t), 1 <= |a| <= order
  std::vector<std::map<MultiIndex, double>> taylor;
  std::vector<double> mixed_partial_asymmetry;
  int taylor_order = 1;
};

EgDerivativeTable extract_eg_derivatives(const LoopHierarchy& h);
double taylor_increment(const std::map<MultiIndex, double>& taylor, const std::vector<double>& dt);

// e_0 .. e_gmax at the physical field, chaining Taylor panels along s*t, s in [0, 1].
std::vector<double> eg_by_panels(const ExternalField& physical, int g_max, int taylor_order, int panels,
                                 const LoopOptions& base = {});

// Order-0 Laurent coefficients of P_g at powers -1 .. -depth.
std::vector<cplx> laurent_table(const AlgebraicFn& f, int depth);

}  // namespace loopeq
