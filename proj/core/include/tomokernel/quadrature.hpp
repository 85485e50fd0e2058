#pragma once

#include <memory>
#include <vector>

namespace tomokernel {

// Gauss-Legendre rule mapped onto [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Nodes and weights on [-1, 1], computed once per order and cached.
// Thread-safe.
std::shared_ptr<const QuadratureRule> gauss_legendre_reference(int order);

QuadratureRule gauss_legendre(int order, double a, double b);

// Composite rule: `panels` equal sub-intervals, `order` nodes each.
QuadratureRule composite_gauss_legendre(int order, int panels, double a, double b);

}  // namespace tomokernel
