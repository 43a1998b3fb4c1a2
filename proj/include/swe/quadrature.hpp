#pragma once

#include <vector>

#include "swe/vec2.hpp"

namespace swe {

// Rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1/2
  int exactness = 0;
};

// Returns a rule integrating polynomials up to the given total degree.
// Degree <= 1 uses the centroid rule; higher degrees use a collapsed
// (Duffy) Gauss-Legendre product rule. Supported up to degree 40.
QuadratureRule quadrature_rule(int exactness);

// Gauss-Legendre points/weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

}  // namespace swe
