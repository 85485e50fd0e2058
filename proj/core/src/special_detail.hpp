#pragma once

#include <vector>

#include "tomokernel/special_functions.hpp"

namespace tomokernel::detail {

// q_j(u) = H_j(u) / sqrt(2^j j!) for j = 0..j_max. These stay O(e^{u^2/2})
// and feed the term-ratio series.
void scaled_hermite(int j_max, long double u, long double* q);

// Y^{(p)}(u) = \int_0^inf xi^{p+1} e^{-xi^2/4} cos(xi u + p pi/2) dxi.
double y_derivative_spectral(int p, double u);

// Large-|r| expansion of daw^{(j)}. Returns false when the expansion does not
// reach `tol` before its terms start growing.
bool dawson_derivative_asymptotic(int j, double r, double tol, double* out);

// Panels used for the Fourier-side integrals on [0, xi_max].
struct SpectralNodes {
  std::vector<double> xi;
  std::vector<double> w;
};
const SpectralNodes& spectral_nodes(double xi_max);

void require_convergence(int small_run, const SeriesControl& ctrl, const char* what);

}  // namespace tomokernel::detail
