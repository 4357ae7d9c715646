#include "loopeq/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "loopeq/equilibrium.hpp"
#include "loopeq/error.hpp"
#include "loopeq/quadrature.hpp"

namespace loopeq {

namespace {

constexpr double pi = std::numbers::pi;

Cut physical_cut(const ExternalField& field) {
  return solve_equilibrium(field.with_layout(field.upsilon, 0)).cut();
}

cplx potential_at(const ExternalField& field, cplx x) {
  cplx v = 0.5 * x * x, p = 1.0;
  for (int j = 1; j <= field.upsilon; ++j) {
    p *= x;
    v += field.t(j) * p;
  }
  return v;
}

cplx potential_derivative_at(const ExternalField& field, cplx x) {
  cplx v = x, p = 1.0;
  for (int j = 1; j <= field.upsilon; ++j) {
    v += double(j) * field.t(j) * p;
    p *= x;
  }
  return v;
}

}  // namespace

long long GenusMomentTable::count(int j, int g) const {
  if (j < 0 || j > j_max) usage_error("polygon size outside the table");
  const auto& row = entries[j];
  return g >= 0 && g < int(row.size()) ? row[g] : 0;
}

GenusMomentTable pairing_genus_counts(int j_max, Exec exec) {
  if (j_max < 0) usage_error("j_max must be non-negative");
  if (j_max > 8) usage_error("j_max too large for exhaustive enumeration (max 8)");
  GenusMomentTable t;
  t.j_max = j_max;
  t.entries.push_back({1});
  for (int j = 1; j <= j_max; ++j) t.entries.push_back(genus_histogram(j, exec));
  return t;
}

Recurrence orthogonal_recurrence(const ExternalField& field, int N, int length, bool force_stieltjes) {
  if (N < 1) usage_error("N must be positive");
  if (length < 1) usage_error("recurrence length must be positive");
  Recurrence rec;
  rec.a.assign(length, 0.0);
  rec.b.assign(length, 0.0);
  if (field.gaussian() && !force_stieltjes) {
    for (int k = 1; k < length; ++k) rec.b[k] = std::sqrt(double(k) / N);
    rec.log_h0 = 0.5 * std::log(2.0 * pi / N);
    return rec;
  }
  Cut cut = physical_cut(field);
  const int nodes = 4000;
  // small N needs a wider window: for N = 1 the Gaussian mass beyond 6 is 2e-9
  double reach = std::max(4.0, 9.0 / std::sqrt(double(N)));
  Rule gl = gauss_legendre(nodes, cut.alpha - reach, cut.beta + reach);
  std::vector<double> v(nodes);
  for (int i = 0; i < nodes; ++i) v[i] = field.potential(gl.x[i]);
  rec.vmin = *std::min_element(v.begin(), v.end());
  Eigen::VectorXd x(nodes), q(nodes);
  double mass = 0.0;
  for (int i = 0; i < nodes; ++i) {
    x[i] = gl.x[i];
    q[i] = gl.w[i] * std::exp(-N * (v[i] - rec.vmin));
    mass += q[i];
  }
  rec.log_h0 = std::log(mass);
  q = (q / mass).cwiseSqrt();
  Eigen::MatrixXd Q(nodes, length);
  Q.col(0) = q;
  for (int k = 0; k < length; ++k) {
    Eigen::VectorXd xq = x.cwiseProduct(Q.col(k));
    rec.a[k] = Q.col(k).dot(xq);
    if (k + 1 == length) break;
    Eigen::VectorXd r = xq - rec.a[k] * Q.col(k);
    if (k > 0) r -= rec.b[k] * Q.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) r -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * r);
    double nb = r.norm();
    if (!(nb > 1e-150) || !std::isfinite(nb))
      numerical_error("Stieltjes breakdown at degree " + std::to_string(k + 1) + " (loss of positivity)");
    rec.b[k + 1] = nb;
    Q.col(k + 1) = r / nb;
  }
  return rec;
}

FiniteNDensity finite_n_one_point(const ExternalField& field, int N, const std::vector<double>& grid, Exec exec) {
  if (N < 1 || N > 200) usage_error("N must lie in 1..200");
  Cut cut = physical_cut(field);
  for (double x : grid)
    if (x < cut.alpha - 2.0 - 1e-12 || x > cut.beta + 2.0 + 1e-12) usage_error("grid point outside [alpha - 2, beta + 2]");
  FiniteNDensity d;
  d.N = N;
  d.grid = grid;
  d.recurrence = orthogonal_recurrence(field, N, N);
  double vmin = d.recurrence.vmin;
  d.values = kernel_diagonal(d.recurrence, N, [&](double x) { return -N * (field.potential(x) - vmin); }, grid, exec);
  return d;
}

double finite_n_moment(const ExternalField& field, int N, int j) {
  if (j < 0) usage_error("moment order must be non-negative");
  int half = (j + 1) / 2;
  int n = N + half + 1;
  Recurrence rec = orthogonal_recurrence(field, N, n);
  auto apply = [&](const std::vector<double>& u) {
    std::vector<double> w(n, 0.0);
    for (int k = 0; k < n; ++k) {
      w[k] += rec.a[k] * u[k];
      if (k + 1 < n) {
        w[k] += rec.b[k + 1] * u[k + 1];
        w[k + 1] += rec.b[k + 1] * u[k];
      }
    }
    return w;
  };
  double total = 0.0;
  for (int l = 0; l < N; ++l) {
    std::vector<double> lo(n, 0.0);
    lo[l] = 1.0;
    for (int k = 0; k < j / 2; ++k) lo = apply(lo);
    std::vector<double> hi = j % 2 ? apply(lo) : lo;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += lo[k] * hi[k];
    total += s;
  }
  return total / N;
}

std::vector<double> moment_extrapolation(const ExternalField& field, int j, const std::vector<int>& Ns) {
  if (Ns.size() < 4) usage_error("moment extrapolation needs at least four sizes");
  int rows = int(Ns.size());
  Eigen::MatrixXd A(rows, 4);
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) {
    double inv = 1.0 / Ns[i];
    A(i, 0) = 1.0;
    A(i, 1) = inv;
    A(i, 2) = inv * inv;
    A(i, 3) = inv * inv * inv;
    y[i] = finite_n_moment(field, Ns[i], j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv[3] <= 0.0 || sv[0] / sv[3] > 1e12) numerical_error("ill-conditioned moment fit");
  Eigen::VectorXd c = svd.solve(y);
  return {c[0], c[1], c[2], c[3]};
}

double finite_n_partition(const ExternalField& field, int N) {
  if (N < 1 || N > 12) usage_error("N must lie in 1..12");
  Recurrence rt = orthogonal_recurrence(field, N, N);
  ExternalField gauss = build_field(field.upsilon, std::vector<double>(field.upsilon, 0.0), field.upsilon, 0);
  Recurrence r0 = orthogonal_recurrence(gauss, N, N);
  auto log_norms = [N](const Recurrence& r) {
    double acc = 0.0, lh = r.log_h0 - N * r.vmin;
    for (int l = 0; l < N; ++l) {
      if (l > 0) lh += 2.0 * std::log(r.b[l]);
      acc += lh;
    }
    return acc;
  };
  return log_norms(rt) - log_norms(r0);
}

std::vector<double> bulk_remainder(const ExternalField& field, int N, const std::vector<double>& grid) {
  EquilibriumMeasure eq = solve_equilibrium(field.with_layout(field.upsilon, 0));
  Cut cut = eq.cut();
  FiniteNDensity rho = finite_n_one_point(field, N, grid);
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double x = grid[i];
    double upper = tanh_sinh([&](double y) { return density_psi(eq, y); }, x, cut.beta);
    double osc = (1.0 / (x - cut.beta) - 1.0 / (x - cut.alpha)) / (4.0 * pi * N) * std::cos(2.0 * pi * N * upper);
    out.push_back(rho.values[i] - density_psi(eq, x) - osc);
  }
  return out;
}

double tail_mass(const ExternalField& field, int N, double delta) {
  if (N < 1 || N > 200) usage_error("N must lie in 1..200");
  if (delta <= 0.0) usage_error("delta must be positive");
  Cut cut = physical_cut(field);
  Recurrence rec = orthogonal_recurrence(field, N, N);
  const double reach = 8.0;
  double total = 0.0;
  for (auto [a, b] : {std::pair{cut.beta + delta, cut.beta + delta + reach},
                      std::pair{cut.alpha - delta - reach, cut.alpha - delta}}) {
    Rule gl = gauss_legendre(400, a, b);
    auto vals = kernel_diagonal(rec, N, [&](double x) { return -N * (field.potential(x) - rec.vmin); }, gl.x,
                                Exec::parallel);
    for (std::size_t i = 0; i < vals.size(); ++i) total += gl.w[i] * vals[i];
  }
  return total;
}

double WardCheckReport::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

WardCheckReport ward_identity_check(const ExternalField& field, int N, const std::vector<cplx>& zs, int nodes,
                                    Exec exec) {
  if (N != 1 && N != 2) usage_error("Ward identity check supports N = 1 and N = 2");
  WardCheckReport rep;
  rep.N = N;
  for (cplx z : zs) {
    cplx lhs, rhs;
    if (N == 1) {
      int n = nodes > 0 ? nodes : 800;
      // integrate out to where exp(-V) is below e^-60 of its peak
      double vmin = field.potential(0.0);
      for (double s = -10.0; s <= 10.0; s += 0.01) vmin = std::min(vmin, field.potential(s));
      double lo = 0.0, hi = 0.0;
      while (field.potential(hi) - vmin < 60.0 && hi < 50.0) hi += 0.1;
      while (field.potential(lo) - vmin < 60.0 && lo > -50.0) lo -= 0.1;
      // below a real or nearly real z the path dips away from the pole
      double dip = std::abs(z.imag()) < 1.0 ? (z.imag() >= 0.0 ? -1.0 : 1.0) : 0.0;
      Rule gl = gauss_legendre(n, lo, hi);
      cplx mass = 0.0;
      for (int i = 0; i < n; ++i) {
        double s = gl.x[i], u = s - z.real();
        double bump = std::exp(-0.5 * u * u);
        cplx lam(s, dip * bump);
        cplx dlam(1.0, -dip * u * bump);
        cplx w = gl.w[i] * std::exp(-(potential_at(field, lam) - vmin)) * dlam;
        cplx g = 1.0 / (z - lam);
        mass += w;
        lhs += w * g * g;
        rhs += w * g * potential_derivative_at(field, lam);
      }
      lhs /= mass;
      rhs /= mass;
    } else {
      if (std::abs(z.imag()) < 0.5 && std::abs(z) < 8.0) usage_error("N = 2 samples must lie off the real axis");
      Ward2Sums s = ward2_sums(field, z, nodes > 0 ? nodes : 40, exec);
      lhs = s.trace_sq / s.mass;
      rhs = double(N) * s.trace_gv / s.mass;
    }
    rep.z.push_back(z);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.residuals.push_back(std::abs(lhs - rhs) / std::abs(lhs));
  }
  return rep;
}

ContourSpec ContourSpec::around(const Cut& cut, double delta, int nodes) {
  ContourSpec c;
  c.center = 0.5 * (cut.alpha + cut.beta);
  c.semi_x = c.semi_y = 0.5 * (cut.beta - cut.alpha) + delta;
  c.delta = delta;
  c.nodes = nodes;
  return c;
}

bool ContourSpec::encloses(cplx z) const { return scaled_radius(z) < 1.0; }

double ContourSpec::scaled_radius(cplx z) const {
  double u = (z.real() - center) / semi_x, v = z.imag() / semi_y;
  return std::sqrt(u * u + v * v);
}

cplx source_value(const LoopHierarchy& h, int g, cplx z) {
  if (g < 1 || g >= int(h.levels.size())) usage_error("level not solved");
  Jet v = alg_eval(h.levels[g - 1], z);
  const SpacePtr& s = v.space();
  cplx u = 0.0;
  std::vector<std::uint8_t> e(s->num_vars(), 0);
  for (int j = 1; j <= s->num_vars(); ++j) {
    e[j - 1] = 1;
    u -= std::pow(z, -j - 1) * v.coeff(e);
    e[j - 1] = 0;
  }
  for (int gp = 1; gp <= g - 1; ++gp) u += alg_eval(h.levels[gp], z).value() * alg_eval(h.levels[g - gp], z).value();
  return u;
}

double contour_residual(const LoopHierarchy& h, int g, const ContourSpec& c, const std::vector<cplx>& zs, Exec exec) {
  if (g < 1 || g >= int(h.levels.size())) usage_error("level not solved");
  if (c.semi_x <= 0.0 || c.semi_y <= 0.0 || c.nodes < 4) usage_error("degenerate contour");
  Cut cut = h.eq.cut();
  if (!c.encloses(cut.alpha) || !c.encloses(cut.beta)) numerical_error("contour intersects the cut");
  for (cplx z : zs) {
    if (c.encloses(z)) usage_error("contour encloses a sample point");
    if (c.scaled_radius(z) < 1.1) usage_error("sample point within 10% of the contour");
  }
  SpacePtr scalar = JetSpace::get(h.field.space->num_vars(), 0);
  AlgebraicFn M = h.op.parts.at(0).in_space(scalar);
  AlgebraicFn P = h.levels[g].in_space(scalar);
  std::vector<cplx> nodes(c.nodes), dx(c.nodes);
  for (int k = 0; k < c.nodes; ++k) {
    double th = 2.0 * pi * k / c.nodes;
    nodes[k] = cplx(c.center + c.semi_x * std::cos(th), c.semi_y * std::sin(th));
    dx[k] = cplx(-c.semi_x * std::sin(th), c.semi_y * std::cos(th)) * (2.0 * pi / c.nodes);
  }
  std::vector<cplx> mp = map_points([&](cplx x) { return alg_eval(M, x).value() * alg_eval(P, x).value(); }, nodes, exec);
  double worst = 0.0;
  for (cplx z : zs) {
    cplx integral = 0.0;
    for (int k = 0; k < c.nodes; ++k) integral += mp[k] / (z - nodes[k]) * dx[k];
    integral /= cplx(0.0, 2.0 * pi);
    cplx u = source_value(h, g, z);
    double scale = std::abs(u);
    double r = std::abs(integral - u);
    worst = std::max(worst, scale > 0.0 ? r / scale : r);
  }
  return worst;
}

void attach_contour_residuals(LoopHierarchy& h, const std::vector<cplx>& z, double delta, int nodes) {
  ContourSpec c = ContourSpec::around(h.eq.cut(), delta, nodes);
  h.contour_residuals.assign(h.levels.size(), 0.0);
  for (int g = 1; g < int(h.levels.size()); ++g) h.contour_residuals[g] = contour_residual(h, g, c, z);
}

std::vector<cplx> residual_samples(const Cut& cut, double delta) {
  ContourSpec c = ContourSpec::around(cut, delta);
  const double rho[5] = {1.25, 1.25, 1.375, 1.41421356237, 1.35};
  const double theta[5] = {0.0, 0.5 * pi, pi, 0.25 * pi, -1.95};
  std::vector<cplx> z;
  for (int k = 0; k < 5; ++k) z.push_back(c.center + std::polar(rho[k] * c.semi_x, theta[k]));
  return z;
}

}  // namespace loopeq
