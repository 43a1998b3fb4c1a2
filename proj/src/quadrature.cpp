#include "swe/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace swe {

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights) {
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess, on [-1, 1]
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    points[i] = 0.5 * (1.0 + x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule quadrature_rule(int exactness) {
  if (exactness < 0) throw std::invalid_argument("quadrature exactness must be >= 0");
  if (exactness > 40) throw std::invalid_argument("quadrature exactness capped at 40");

  QuadratureRule rule;
  rule.exactness = std::max(exactness, 1);
  if (exactness <= 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    return rule;
  }

  // Duffy map x = a, y = b(1-a): jacobian (1-a) raises the a-degree by one.
  const int n = (exactness + 3) / 2;
  std::vector<double> gp, gw;
  gauss_legendre(n, gp, gw);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = gp[i], b = gp[j];
      rule.points.push_back({a, b * (1.0 - a)});
      rule.weights.push_back(gw[i] * gw[j] * (1.0 - a));
    }
  return rule;
}

}  // namespace swe
