#include "tomokernel/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace tomokernel {

namespace {

QuadratureRule compute_reference(int order) {
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (order == 1) p0 = 1.0;
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_legendre_reference(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  auto rule = std::make_shared<const QuadratureRule>(compute_reference(order));
  cache.emplace(order, rule);
  return rule;
}

QuadratureRule gauss_legendre(int order, double a, double b) {
  return composite_gauss_legendre(order, 1, a, b);
}

QuadratureRule composite_gauss_legendre(int order, int panels, double a, double b) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
  const auto ref = gauss_legendre_reference(order);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(order) * panels);
  rule.weights.reserve(static_cast<std::size_t>(order) * panels);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * width * ref->nodes[i]);
      rule.weights.push_back(0.5 * width * ref->weights[i]);
    }
  }
  return rule;
}

}  // namespace tomokernel
