#pragma once

#include <functional>
#include <vector>

#include "loopeq/jet.hpp"
#include "loopeq/model.hpp"

namespace loopeq {

enum class Exec { serial, parallel };

// Thread cap for the parallel kernels: LOOPEQ_THREADS when set, else the OpenMP default.
int kernel_threads();

// Number of matchings of the 2j sides of a polygon by genus of the glued surface.
std::vector<long long> genus_histogram(int j, Exec exec);

// Orthonormal three-term recurrence x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}
// for the weight exp(-N (V - vmin)); h0 is that weight's total mass.
struct Recurrence {
  std::vector<double> a, b;  // b[0] unused
  double log_h0 = 0.0;
  double vmin = 0.0;
  int size() const { return int(a.size()); }
};

// (1/N) exp(log_weight(x)) sum_{l<N} p_l(x)^2 at each x, with the recurrence run
// in rescaled form so far tails neither overflow nor underflow prematurely.
std::vector<double> kernel_diagonal(const Recurrence& rec, int N, const std::function<double(double)>& log_weight,
                                    const std::vector<double>& xs, Exec exec);

// Tensor Gauss-Hermite sums over 2x2 Hermitian matrices with weight exp(-2 Tr V(M)):
// mass, E (Tr G)^2 and E Tr(G V'(M)) unnormalized, G = (z - M)^-1.
struct Ward2Sums {
  double mass = 0.0;
  cplx trace_sq = 0.0;
  cplx trace_gv = 0.0;
};
Ward2Sums ward2_sums(const ExternalField& field, cplx z, int nodes, Exec exec);

// f at every point, in order.
std::vector<cplx> map_points(const std::function<cplx(cplx)>& f, const std::vector<cplx>& pts, Exec exec);

}  // namespace loopeq
