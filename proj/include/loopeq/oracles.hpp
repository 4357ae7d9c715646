#pragma once

#include <vector>

#include "loopeq/kernels.hpp"
#include "loopeq/loop.hpp"

namespace loopeq {

struct GenusMomentTable {
  int j_max = 0;
  std::vector<std::vector<long long>> entries;  // entries[j][g], j = 0..j_max
  long long count(int j, int g) const;
};

GenusMomentTable pairing_genus_counts(int j_max, Exec exec = Exec::parallel);

// Recurrence of the orthonormal polynomials for exp(-N V): the exact Hermite
// one in the Gaussian case, else a discretized Stieltjes (Lanczos with full
// reorthogonalization) on Gauss-Legendre nodes over [alpha - r, beta + r],
// r = max(4, 9 / sqrt(N)).
Recurrence orthogonal_recurrence(const ExternalField& field, int N, int length, bool force_stieltjes = false);

struct FiniteNDensity {
  int N = 0;
  std::vector<double> grid, values;
  Recurrence recurrence;
};

FiniteNDensity finite_n_one_point(const ExternalField& field, int N, const std::vector<double>& grid,
                                  Exec exec = Exec::parallel);

// E (1/N) Tr M^j from the Jacobi matrix.
double finite_n_moment(const ExternalField& field, int N, int j);

// Least-squares a0 + a1/N + a2/N^2 + a3/N^3 through the moments at Ns.
std::vector<double> moment_extrapolation(const ExternalField& field, int j, const std::vector<int>& Ns);

// log(Z_N(t) / Z_N(0)).
double finite_n_partition(const ExternalField& field, int N);

// rho_N - psi - (1/4 pi N)(1/(x - beta) - 1/(x - alpha)) cos(2 pi N int_x^beta psi) at each x.
std::vector<double> bulk_remainder(const ExternalField& field, int N, const std::vector<double>& grid);

// Mass of rho_N outside [alpha - delta, beta + delta].
double tail_mass(const ExternalField& field, int N, double delta);

struct WardCheckReport {
  int N = 0;
  std::vector<cplx> z, lhs, rhs;
  std::vector<double> residuals;
  double max_residual() const;
};

// E (Tr G)^2 against N E Tr(G V'(M)), G = (z - M)^-1. N = 1 integrates along
// the real axis, dipping below real z; N = 2 uses tensor Gauss-Hermite over
// the four real entries of a 2x2 Hermitian matrix.
WardCheckReport ward_identity_check(const ExternalField& field, int N, const std::vector<cplx>& z, int nodes = 0,
                                    Exec exec = Exec::parallel);

// x(theta) = center + semi_x cos(theta) + i semi_y sin(theta).
struct ContourSpec {
  double center = 0.0;
  double semi_x = 0.0, semi_y = 0.0;
  double delta = 0.5;
  int nodes = 256;
  // The circle of radius half-width + delta about the cut's midpoint.
  static ContourSpec around(const Cut& cut, double delta = 0.5, int nodes = 256);
  bool encloses(cplx z) const;
  // 1 on the contour; trapezoid convergence degrades as samples approach it.
  double scaled_radius(cplx z) const;
};

// (1/2 pi i) contour integral of M P_g / (z - x) against U_g(z), relative, maximized over z.
double contour_residual(const LoopHierarchy& h, int g, const ContourSpec& contour, const std::vector<cplx>& z,
                        Exec exec = Exec::parallel);
// U_g(z) from the jet of P_{g-1} at z and the lower levels' values.
cplx source_value(const LoopHierarchy& h, int g, cplx z);
// Fills h.contour_residuals for every level (0 for P_0). The wider standoff keeps
// the nodes away from the branch points, where P_g for g >= 2 is large and its
// evaluation noise would dominate the small values of U_g far out.
void attach_contour_residuals(LoopHierarchy& h, const std::vector<cplx>& z, double delta = 2.0, int nodes = 256);
// Five samples between 1.25 and 1.42 contour radii out, at spread angles.
std::vector<cplx> residual_samples(const Cut& cut, double delta = 2.0);

}  // namespace loopeq
