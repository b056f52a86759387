#pragma once

#include <string>
#include <vector>

#include "hgbc/geometry.hpp"

namespace hgbc {

// Symmetric triangle rule; weights sum to 1 and are scaled by the triangle
// area at use.
struct QuadratureRule {
  std::string name;
  int degree = 0;
  std::vector<Bary> points;
  std::vector<double> weights;
};

// Smallest built-in rule exact for polynomials of the given total degree
// (available up to 6; higher requests throw std::invalid_argument).
const QuadratureRule& quadrature_rule(int degree);

}  // namespace hgbc
