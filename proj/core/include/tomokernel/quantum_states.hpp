#pragma once

#include <Eigen/Dense>

#include "tomokernel/transforms.hpp"

namespace tomokernel {

// Truncated number-basis matrix T_{mn} = <m|T|n>.
class FockOperator {
 public:
  FockOperator() = default;
  explicit FockOperator(Eigen::MatrixXcd matrix);

  static FockOperator zero(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  cplx operator()(int m, int n) const { return matrix_(m, n); }

  cplx trace() const { return matrix_.trace(); }
  bool is_hermitian(double tol = 1e-12) const;

  // sum of |T_{mn}|^2 over entries with m or n >= dim - width.
  double tail_weight(int width = 2) const;

  // Throws InvalidState naming the failed check: Hermitian to herm_tol,
  // trace within trace_tol of 1, eigenvalues >= -eig_tol.
  void validate_state(double herm_tol = 1e-12, double trace_tol = 1e-10, double eig_tol = 1e-10) const;

  // Throws InvalidState when tail_weight() exceeds tail_tol.
  void validate_tail(double tail_tol) const;

  // Zero-padded (or truncated) copy.
  FockOperator resized(int dim) const;

 private:
  Eigen::MatrixXcd matrix_;
};

// lambda = (s + 1) / (s - 1), lambda in (-1, 1), s in (-inf, 0).
struct CahillGlauberParam {
  double lambda = 0.0;

  double s() const { return (lambda + 1.0) / (lambda - 1.0); }
  static CahillGlauberParam from_s(double s);
  void validate() const;
};

struct QuadratureConfig {
  int nodes = 2048;
  double x_max = 12.0;
};

FockOperator fock_projector(int m, int n, int dim);

// |psi><psi| with psi = (|0> + |1>)/sqrt 2.
FockOperator cat_state(int dim = 2);

// diag (1 - lambda) lambda^n. TruncationLoss when |lambda|^dim / (1 - |lambda|)
// exceeds tail_tol.
FockOperator cahill_glauber_kernel(const CahillGlauberParam& param, int dim, double tail_tol = 1e-10);

// Smallest dimension for which cahill_glauber_kernel accepts tail_tol.
int cahill_glauber_dim(const CahillGlauberParam& param, double tail_tol = 1e-10);

// sum T_{mn} h_m(x) h_n(y)
cplx integral_kernel(const FockOperator& T, double x, double y);

// W(q, p) = pi^{-1} \int T~(q - x, q + x) e^{2ipx} dx.
PhaseField wigner(const FockOperator& T, const GridSpec& grid, const QuadratureConfig& quad = {});
cplx wigner_point(const FockOperator& T, double q, double p, const QuadratureConfig& quad = {});

// p_ht(theta, r) = sum T_{mn} e^{i(n-m) theta} h_n(r) h_m(r).
cplx tomographic_density(const FockOperator& T, double theta, double r);
Sinogram tomographic_sinogram(const FockOperator& T, const SinogramSpec& spec);

// <m|D(q1,p1)|n> = \int h_m(x) e^{-i q1 p1/2} e^{i p1 x} h_n(x - q1) dx.
cplx displaced_matrix_element(int m, int n, double q1, double p1, const QuadratureConfig& quad = {});

// Block <m|D(q1,p1)|n>, m < rows, n < cols.
Eigen::MatrixXcd displacement_block(int rows, int cols, double q1, double p1, const QuadratureConfig& quad = {});

// p^T_K(q1, p1) = tr[T D(z1) K D(z1)^*].
cplx direct_phase_density(const FockOperator& T, const FockOperator& K, double q1, double p1,
                          const QuadratureConfig& quad = {});
PhaseField direct_phase_density_grid(const FockOperator& T, const FockOperator& K, const GridSpec& grid,
                                     const QuadratureConfig& quad = {});

}  // namespace tomokernel
