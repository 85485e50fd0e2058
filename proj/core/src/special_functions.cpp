#include "tomokernel/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "special_detail.hpp"
#include "tomokernel/errors.hpp"
#include "tomokernel/quadrature.hpp"

namespace tomokernel {

namespace {

constexpr double kPanelWidth = 0.4;
constexpr int kPanelOrder = 20;
constexpr double kDawsonSeriesLimit = 6.0;
constexpr double kAsymptoticRadius = 40.0;

double dawson_series(double r) {
  // e^{-r^2} sum r^{2k+1} / (k! (2k+1)); all terms positive.
  const double r2 = r * r;
  double term = r;  // r^{2k+1}/k!
  double sum = r;
  for (int k = 1; k < 400; ++k) {
    term *= r2 / k;
    const double add = term / (2 * k + 1);
    sum += add;
    if (add < 1e-17 * sum) break;
  }
  return std::exp(-r2) * sum;
}

double dawson_asymptotic(double r) {
  // sum (2k-1)!! / (2^{k+1} r^{2k+1})
  const double inv2 = 1.0 / (r * r);
  double term = 0.5 / r;
  double sum = term;
  for (int k = 0; k < 200; ++k) {
    const double next = term * (2 * k + 1) * 0.5 * inv2;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double y_series(int p, double r, const SeriesControl& ctrl) {
  const int half = p / 2;
  const bool odd = p % 2 == 1;
  const int j_max = 2 * ctrl.k_max + 1;
  std::vector<long double> q(static_cast<std::size_t>(j_max) + 1);
  detail::scaled_hermite(j_max, r, q.data());

  long double prefactor = std::ldexp(1.0L, half) * ((half % 2 == 0) ? 1.0L : -1.0L);
  if (odd) prefactor *= -std::sqrt(2.0L);
  long double e = std::tgamma(static_cast<long double>(half + (odd ? 2 : 1)));

  long double sum = 0.0L;
  int small_run = 0;
  for (int k = 0; k < ctrl.k_max; ++k) {
    const long double term = e * q[2 * k + (odd ? 1 : 0)];
    sum += term;
    const double scale = std::max(1.0, std::abs(static_cast<double>(prefactor * sum)));
    if (std::abs(static_cast<double>(prefactor * term)) < ctrl.abs_tol * scale) {
      if (++small_run >= ctrl.consecutive_small) break;
    } else {
      small_run = 0;
    }
    if (odd) {
      e *= -static_cast<long double>(k + half + 2) / std::sqrt((2.0L * k + 2) * (2.0L * k + 3));
    } else {
      e *= -static_cast<long double>(k + half + 1) / std::sqrt((2.0L * k + 1) * (2.0L * k + 2));
    }
  }
  detail::require_convergence(small_run, ctrl, "y_derivative");
  return static_cast<double>(prefactor * sum);
}

}  // namespace

namespace detail {

void scaled_hermite(int j_max, long double u, long double* q) {
  q[0] = 1.0L;
  if (j_max == 0) return;
  q[1] = u * std::sqrt(2.0L);
  for (int j = 1; j < j_max; ++j) {
    q[j + 1] = u * std::sqrt(2.0L / (j + 1)) * q[j] - std::sqrt(static_cast<long double>(j) / (j + 1)) * q[j - 1];
  }
}

const SpectralNodes& spectral_nodes(double xi_max) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<SpectralNodes>> cache;
  const int panels = static_cast<int>(std::ceil(xi_max / kPanelWidth));
  std::lock_guard lock(mutex);
  auto& slot = cache[panels];
  if (!slot) {
    auto rule = composite_gauss_legendre(kPanelOrder, panels, 0.0, panels * kPanelWidth);
    slot = std::make_unique<SpectralNodes>(SpectralNodes{std::move(rule.nodes), std::move(rule.weights)});
  }
  return *slot;
}

double y_derivative_spectral(int p, double u) {
  const double xi_max = std::sqrt(2.0 * (p + 1)) + 14.0;
  const auto& nodes = spectral_nodes(xi_max);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.xi.size(); ++i) {
    const double xi = nodes.xi[i];
    const double amp = std::exp((p + 1) * std::log(xi) - 0.25 * xi * xi);
    double osc = 0.0;
    switch (p % 4) {
      case 0: osc = std::cos(xi * u); break;
      case 1: osc = -std::sin(xi * u); break;
      case 2: osc = -std::cos(xi * u); break;
      default: osc = std::sin(xi * u); break;
    }
    sum += nodes.w[i] * amp * osc;
  }
  return sum;
}

bool dawson_derivative_asymptotic(int j, double r, double tol, double* out) {
  const double a = std::abs(r);
  if (a == 0.0) return false;
  // daw^{(j)}(r) ~ sum_k (2k-1)!!/2^{k+1} (-1)^j (2k+j)!/(2k)! r^{-(2k+1+j)}
  double term = 0.5 * std::exp(std::lgamma(j + 1.0) - (j + 1.0) * std::log(a));
  double sum = term;
  double smallest = term;
  const double inv2 = 1.0 / (a * a);
  for (int k = 0; k < 500; ++k) {
    const double next = term * (2.0 * k + j + 1) * (2.0 * k + j + 2) / (2.0 * (2 * k + 2)) * inv2;
    if (next >= term) break;
    term = next;
    sum += term;
    smallest = term;
    if (term <= 1e-17 * std::abs(sum)) break;
  }
  if (smallest > tol && smallest > 1e-16 * std::abs(sum)) return false;
  double value = (j % 2 == 0) ? sum : -sum;
  // daw^{(j)} has parity (-1)^{j+1}.
  if (r < 0 && (j + 1) % 2 == 1) value = -value;
  *out = value;
  return true;
}

void require_convergence(int small_run, const SeriesControl& ctrl, const char* what) {
  if (small_run < ctrl.consecutive_small) {
    throw NonConvergence(std::string(what) + ": series not converged within k_max=" + std::to_string(ctrl.k_max) +
                         " terms");
  }
}

}  // namespace detail

void SeriesControl::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("SeriesControl: abs_tol must be positive");
  if (k_max < 1) throw std::invalid_argument("SeriesControl: k_max must be >= 1");
  if (consecutive_small < 1) throw std::invalid_argument("SeriesControl: consecutive_small must be >= 1");
  if (!(series_radius >= 0.0)) throw std::invalid_argument("SeriesControl: series_radius must be >= 0");
}

double hermite_polynomial(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_polynomial: negative degree");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
    if (!std::isfinite(h1)) {
      throw OverflowError("hermite_polynomial: H_" + std::to_string(n) + "(" + std::to_string(x) +
                          ") exceeds double range");
    }
  }
  return h1;
}

void hermite_functions(int n_max, double x, double* out) {
  if (n_max < 0) throw std::invalid_argument("hermite_functions: negative degree");
  // Run the normalized recurrence without the Gaussian factor and carry it as
  // a log offset, so large |x| with large n does not underflow early.
  constexpr double kRescale = 1e150;
  const double log_kRescale = std::log(kRescale);
  double log_offset = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    out[n] = (cur == 0.0) ? 0.0 : cur * std::exp(log_offset);
    if (n == n_max) break;
    const double next = x * std::sqrt(2.0 / (n + 1)) * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_offset += log_kRescale;
    }
  }
}

std::vector<double> hermite_functions(int n_max, double x) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  hermite_functions(n_max, x, out.data());
  return out;
}

double hermite_function(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_function: negative degree");
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  hermite_functions(n, x, buf.data());
  return buf[n];
}

double dawson(double r) {
  const double a = std::abs(r);
  const double v = (a <= kDawsonSeriesLimit) ? dawson_series(a) : dawson_asymptotic(a);
  return r < 0 ? -v : v;
}

double y_function(double r) {
  const double a = std::abs(r);
  if (a <= kDawsonSeriesLimit) return 2.0 * (1.0 - 2.0 * a * dawson_series(a));
  double v = 0.0;
  if (detail::dawson_derivative_asymptotic(1, a, 1e-16, &v)) return 2.0 * v;
  return detail::y_derivative_spectral(0, a);
}

double y_derivative(int p, double r, const SeriesControl& ctrl) {
  if (p < 0 || p > kYDerivativeMaxOrder) {
    throw std::invalid_argument("y_derivative: order must lie in [0, " + std::to_string(kYDerivativeMaxOrder) + "]");
  }
  ctrl.validate();
  const double a = std::abs(r);
  if (a <= ctrl.series_radius) return y_series(p, r, ctrl);
  if (a > kAsymptoticRadius) {
    double v = 0.0;
    if (detail::dawson_derivative_asymptotic(p + 1, r, ctrl.abs_tol, &v)) return 2.0 * v;
  }
  return detail::y_derivative_spectral(p, r);
}

double y_derivative_maclaurin(int p, double r, const SeriesControl& ctrl) {
  if (p < 0 || p > kYDerivativeMaxOrder) {
    throw std::invalid_argument("y_derivative_maclaurin: order must lie in [0, " +
                                std::to_string(kYDerivativeMaxOrder) + "]");
  }
  ctrl.validate();
  // Y^{(p)}(r) = 2 sum_{u >= p/2} (-1)^u u!/(2u-p)! 4^u r^{2u-p}
  using wide = __float128;
  const int u0 = (p + 1) / 2;
  const wide rr = r;
  wide term = (u0 % 2 == 0) ? 1 : -1;
  for (int i = 1; i <= u0; ++i) term *= 4 * i;  // u0! 4^{u0}
  for (int i = 1; i <= 2 * u0 - p; ++i) term /= i;
  for (int i = 0; i < 2 * u0 - p; ++i) term *= rr;
  wide sum = term;
  int small_run = 0;
  for (int k = 0; k < ctrl.k_max; ++k) {
    const int u = u0 + k;
    term *= -4 * (u + 1) * rr * rr / ((2 * u - p + 1) * static_cast<wide>(2 * u - p + 2));
    sum += term;
    const double mag = std::abs(static_cast<double>(term));
    const double scale = std::max(1.0, std::abs(static_cast<double>(sum)));
    if (2.0 * mag < ctrl.abs_tol * 1e-4 * scale) {
      if (++small_run >= ctrl.consecutive_small) break;
    } else {
      small_run = 0;
    }
  }
  detail::require_convergence(small_run, ctrl, "y_derivative_maclaurin");
  return static_cast<double>(2 * sum);
}

}  // namespace tomokernel
