#include "loopeq/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

namespace loopeq {

Rule gauss_legendre(int n, double a, double b) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = std::numbers::pi;
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    r.x[i] = xm - xl * z;
    r.x[n - 1 - i] = xm + xl * z;
    r.w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return r;
}

Rule gauss_chebyshev2(int n) {
  Rule r;
  const double pi = std::numbers::pi;
  for (int i = 1; i <= n; ++i) {
    double th = i * pi / (n + 1);
    r.x.push_back(std::cos(th));
    double s = std::sin(th);
    r.w.push_back(pi / (n + 1) * s * s);
  }
  return r;
}

Rule gauss_hermite(int n) {
  // Golub-Welsch on the Jacobi matrix of the Hermite weight.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  Rule r;
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()[i]);
    double v = es.eigenvectors()(0, i);
    r.w.push_back(mu0 * v * v);
  }
  return r;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, tol);
}

}  // namespace loopeq
