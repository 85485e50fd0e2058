#pragma once

#include <vector>

namespace tomokernel {

// Truncation rule for the infinite Hermite series: stop once
// `consecutive_small` successive terms fall below `abs_tol`, give up after
// `k_max` terms. Beyond |r| > series_radius the series loses too many digits
// to cancellation and evaluation switches to a Fourier-side quadrature.
struct SeriesControl {
  double abs_tol = 1e-12;
  int consecutive_small = 5;
  int k_max = 300;
  double series_radius = 6.0;

  void validate() const;
};

inline constexpr int kYDerivativeMaxOrder = 64;

// Physicists' Hermite polynomial H_n(x). Throws OverflowError when the value
// leaves the double range.
double hermite_polynomial(int n, double x);

// Normalized Hermite function h_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)).
double hermite_function(int n, double x);

// h_0(x) .. h_{n_max}(x) written to out[0..n_max].
void hermite_functions(int n_max, double x, double* out);
std::vector<double> hermite_functions(int n_max, double x);

// daw(r) = e^{-r^2} \int_0^r e^{t^2} dt.
double dawson(double r);

// Y(r) = 2 daw'(r) = 2 (1 - 2 r daw(r)).
double y_function(double r);

// p-th derivative of Y.
double y_derivative(int p, double r, const SeriesControl& ctrl = {});

// Same quantity from the power series about r = 0, accumulated in extended
// precision. Intended for |r| <= 6.
double y_derivative_maclaurin(int p, double r, const SeriesControl& ctrl = {});

}  // namespace tomokernel
