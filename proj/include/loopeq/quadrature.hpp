#pragma once

#include <functional>
#include <vector>

namespace loopeq {

struct Rule {
  std::vector<double> x, w;
};

// Gauss-Legendre on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);
// Nodes/weights for int_{-1}^{1} sqrt(1-x^2) f(x) dx.
Rule gauss_chebyshev2(int n);
// Nodes/weights for int f(x) exp(-x^2) dx.
Rule gauss_hermite(int n);

// Double-exponential quadrature on [a, b]; integrable endpoint singularities allowed.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

}  // namespace loopeq
