#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace kdof {

struct Quadrature {
  Eigen::VectorXd nodes;    // in [a, b], ascending
  Eigen::VectorXd weights;  // positive, summing to b - a
  double a = 0.0, b = 1.0;
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence
inline void legendre_pair(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace detail

// Gauss-Legendre rule on [a, b]; Newton from the Chebyshev-angle initial guess
inline Quadrature gauss_legendre(int n, double a = 0.0, double b = 1.0) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: empty interval");
  Quadrature q;
  q.a = a;
  q.b = b;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      detail::legendre_pair(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    detail::legendre_pair(n, x, p, dp);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // cosine ordering is descending; store ascending
    q.nodes(n - 1 - i) = a + 0.5 * (b - a) * (x + 1.0);
    q.weights(n - 1 - i) = 0.5 * (b - a) * w;
  }
  return q;
}

inline Quadrature midpoint_rule(int n, double a = 0.0, double b = 1.0) {
  if (n < 1) throw std::invalid_argument("midpoint_rule: n must be >= 1");
  if (!(b > a)) throw std::invalid_argument("midpoint_rule: empty interval");
  Quadrature q;
  q.a = a;
  q.b = b;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    q.nodes(i) = a + (i + 0.5) * h;
    q.weights(i) = h;
  }
  return q;
}

}  // namespace kdof
