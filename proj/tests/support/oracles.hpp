#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

inline double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order = 20) {
  static const Rule rule = gauss_legendre(20);
  const Rule local = order == 20 ? rule : gauss_legendre(order);
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    for (std::size_t i = 0; i < local.x.size(); ++i) s += local.w[i] * f(mid + 0.5 * h * local.x[i]);
  }
  return 0.5 * h * s;
}

// daw(r) = \int_0^r e^{-u (2r - u)} du with u = r - t.
inline double dawson(double r) {
  if (r == 0.0) return 0.0;
  const double a = std::abs(r);
  const double u_max = std::min(a, std::max(40.0 / a, 1e-300));
  const double width = std::min(0.25, 0.5 / a);
  const int panels = std::max(1, static_cast<int>(std::ceil(u_max / width)));
  const double v = integrate([a](double u) { return std::exp(-u * (2.0 * a - u)); }, 0.0, u_max, panels);
  return r < 0 ? -v : v;
}

inline double y_function(double r) { return 2.0 * (1.0 - 2.0 * r * dawson(r)); }

// H_n(x) = n! sum_k (-1)^k (2x)^{n-2k} / (k! (n-2k)!)
inline double hermite_explicit(int n, double x) {
  double s = 0.0;
  for (int k = 0; 2 * k <= n; ++k) {
    const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - 2.0 * k + 1.0);
    const double term = std::exp(lg) * std::pow(2.0 * x, n - 2 * k);
    s += (k % 2 ? -term : term);
  }
  return s;
}

// Richardson-extrapolated central difference of order p.
inline double derivative(const std::function<double(double)>& f, int p, double x, double h) {
  auto central = [&](double step) {
    double s = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= p; ++k) {
      s += ((k % 2) ? -binom : binom) * f(x + (0.5 * p - k) * step);
      binom = binom * (p - k) / (k + 1);
    }
    return s / std::pow(step, p);
  };
  const double d1 = central(h), d2 = central(h / 2), d4 = central(h / 4);
  const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
  return (16 * r2 - r1) / 15;
}

}  // namespace oracle
