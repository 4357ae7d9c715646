#include "loopeq/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "loopeq/error.hpp"
#include "loopeq/quadrature.hpp"

namespace loopeq {

int kernel_threads() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("LOOPEQ_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

namespace {

int threads_for(Exec exec) { return exec == Exec::parallel ? kernel_threads() : 1; }

// Faces of the gluing: cycles of side -> successor of its partner.
int count_faces(const std::vector<int>& partner) {
  int n = int(partner.size());
  std::vector<char> seen(n, 0);
  int faces = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++faces;
    for (int i = s; !seen[i]; i = (partner[i] + 1) % n) seen[i] = 1;
  }
  return faces;
}

void complete_matchings(std::vector<int>& partner, std::vector<long long>& hist, int j) {
  int n = int(partner.size());
  int first = -1;
  for (int i = 0; i < n; ++i)
    if (partner[i] < 0) {
      first = i;
      break;
    }
  if (first < 0) {
    int genus = (1 + j - count_faces(partner)) / 2;
    ++hist[genus];
    return;
  }
  for (int k = first + 1; k < n; ++k) {
    if (partner[k] >= 0) continue;
    partner[first] = k;
    partner[k] = first;
    complete_matchings(partner, hist, j);
    partner[first] = partner[k] = -1;
  }
}

}  // namespace

std::vector<long long> genus_histogram(int j, Exec exec) {
  if (j < 1) usage_error("polygon half-size must be positive");
  int n = 2 * j;
  // Tasks fix the partners of side 0 and of the next free side.
  std::vector<std::vector<int>> prefixes;
  for (int k = 1; k < n; ++k) {
    std::vector<int> p(n, -1);
    p[0] = k;
    p[k] = 0;
    int next = -1;
    for (int i = 1; i < n; ++i)
      if (p[i] < 0) {
        next = i;
        break;
      }
    if (next < 0) {
      prefixes.push_back(p);
      continue;
    }
    for (int l = next + 1; l < n; ++l) {
      if (p[l] >= 0) continue;
      std::vector<int> q = p;
      q[next] = l;
      q[l] = next;
      prefixes.push_back(q);
    }
  }
  int tasks = int(prefixes.size());
  std::vector<std::vector<long long>> partial(tasks, std::vector<long long>(j / 2 + 1, 0));
#pragma omp parallel for schedule(dynamic) num_threads(threads_for(exec))
  for (int t = 0; t < tasks; ++t) {
    std::vector<int> p = prefixes[t];
    complete_matchings(p, partial[t], j);
  }
  std::vector<long long> hist(j / 2 + 1, 0);
  for (const auto& h : partial)
    for (std::size_t g = 0; g < h.size(); ++g) hist[g] += h[g];
  return hist;
}

std::vector<double> kernel_diagonal(const Recurrence& rec, int N, const std::function<double(double)>& log_weight,
                                    const std::vector<double>& xs, Exec exec) {
  if (rec.size() < N) usage_error("recurrence shorter than N");
  std::vector<double> out(xs.size());
  int n = int(xs.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(exec))
  for (int i = 0; i < n; ++i) {
    double x = xs[i];
    // u_k = p_k(x) exp(-E); the sum carries exp(-2E)
    double E = 0.5 * log_weight(x) - 0.5 * rec.log_h0;
    double prev = 0.0, cur = 1.0, sum = 1.0;
    for (int k = 0; k + 1 < N; ++k) {
      double next = ((x - rec.a[k]) * cur - (k > 0 ? rec.b[k] * prev : 0.0)) / rec.b[k + 1];
      prev = cur;
      cur = next;
      sum += cur * cur;
      double big = std::abs(cur);
      if (big > 1e100) {
        prev /= big;
        cur /= big;
        sum /= big * big;
        E += std::log(big);
      }
    }
    out[i] = std::exp(2.0 * E + std::log(sum)) / N;
  }
  return out;
}

Ward2Sums ward2_sums(const ExternalField& field, cplx z, int nodes, Exec exec) {
  Rule gh = gauss_hermite(nodes);
  const double r2 = std::sqrt(0.5);
  int n = nodes;
  std::vector<Ward2Sums> rows(n);
#pragma omp parallel for schedule(static) num_threads(threads_for(exec))
  for (int i = 0; i < n; ++i) {
    Ward2Sums acc;
    double a = gh.x[i];
    for (int k = 0; k < n; ++k) {
      double d = gh.x[k];
      for (int l = 0; l < n; ++l) {
        double x = gh.x[l] * r2;
        for (int q = 0; q < n; ++q) {
          double y = gh.x[q] * r2;
          double w = gh.w[i] * gh.w[k] * gh.w[l] * gh.w[q];
          double mid = 0.5 * (a + d), rad = std::sqrt(0.25 * (a - d) * (a - d) + x * x + y * y);
          double lam[2] = {mid + rad, mid - rad};
          // exp(-2 Tr V) against the Gaussian part already in the rule
          double extra = 0.0;
          for (double l2 : lam) extra += field.potential(l2) - 0.5 * l2 * l2;
          w *= std::exp(-2.0 * extra);
          cplx tg = 0.0, tgv = 0.0;
          for (double l2 : lam) {
            cplx g = 1.0 / (z - l2);
            tg += g;
            tgv += g * field.potential_derivative(l2);
          }
          acc.mass += w;
          acc.trace_sq += w * tg * tg;
          acc.trace_gv += w * tgv;
        }
      }
    }
    rows[i] = acc;
  }
  Ward2Sums total;
  for (const auto& r : rows) {
    total.mass += r.mass;
    total.trace_sq += r.trace_sq;
    total.trace_gv += r.trace_gv;
  }
  return total;
}

std::vector<cplx> map_points(const std::function<cplx(cplx)>& f, const std::vector<cplx>& pts, Exec exec) {
  std::vector<cplx> out(pts.size());
  int n = int(pts.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads_for(exec))
  for (int i = 0; i < n; ++i) out[i] = f(pts[i]);
  return out;
}

}  // namespace loopeq
