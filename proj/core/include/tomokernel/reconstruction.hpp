#pragma once

#include <utility>
#include <vector>

#include "tomokernel/markov_kernels.hpp"
#include "tomokernel/quantum_states.hpp"
#include "tomokernel/transforms.hpp"

namespace tomokernel {

// Axis-aligned outcome set Z. Zero-width rectangles are allowed and carry no
// weight.
struct PhaseRect {
  double q_lo = 0.0;
  double q_hi = 1.0;
  double p_lo = 0.0;
  double p_hi = 1.0;

  double area() const { return (q_hi - q_lo) * (p_hi - p_lo); }
  void validate() const;
};

struct ReconstructionConfig {
  int n_theta = 256;
  int nr = 1024;
  double r_max = 8.0;
  int gauss_order_z = 32;

  SinogramSpec sinogram() const { return {n_theta, nr, r_max}; }
  void validate() const;
};

// p_K^T(q1, p1) = (2 pi)^{-1} \iint p_ht^T(theta, r) M^K_{q1,p1}(theta, r) dtheta dr
// from sampled tomographic data. Throws InvalidState if a value is not real
// to 1e-8.
std::vector<double> reconstruct_density(const Sinogram& p_ht_T, const FockOperator& K,
                                        const std::vector<std::pair<double, double>>& points,
                                        const SeriesControl& ctrl = {});
std::vector<cplx> reconstruct_density_complex(const Sinogram& p_ht_T, const FockOperator& K,
                                              const std::vector<std::pair<double, double>>& points,
                                              const SeriesControl& ctrl = {});

// Generalized Markov kernel (2 pi)^{-1} \int_Z M^K_{q1,p1}(theta, r) dq1 dp1.
cplx markov_weight(const KernelDensity& kernel, const PhaseRect& Z, double theta, double r, int gauss_order = 32);
cplx markov_weight(const FockOperator& K, const PhaseRect& Z, double theta, double r, int gauss_order = 32,
                   const SeriesControl& ctrl = {});

// Markov weight sampled on a sinogram lattice.
Sinogram markov_weight_table(const KernelDensity& kernel, const PhaseRect& Z, const SinogramSpec& spec,
                             int gauss_order = 32);

// <k|E_K(Z)|l> = (2 pi)^{-1} \int_Z <k|D(q,p) K D(q,p)^*|l> dq dp.
cplx effect_matrix_element_direct(const FockOperator& K, const PhaseRect& Z, int k, int l,
                                  const ReconstructionConfig& cfg = {}, const QuadratureConfig& quad = {});
// Block k, l <= max_index.
Eigen::MatrixXcd effect_block_direct(const FockOperator& K, const PhaseRect& Z, int max_index,
                                     const ReconstructionConfig& cfg = {}, const QuadratureConfig& quad = {});

// <k|E_K(Z)|l> = (2 pi)^{-1} \iint M_K(Z; theta, r) e^{i(k-l) theta} h_k(r) h_l(r) dtheta dr.
cplx effect_matrix_element_via_markov(const FockOperator& K, const PhaseRect& Z, int k, int l,
                                      const ReconstructionConfig& cfg = {}, const SeriesControl& ctrl = {});
Eigen::MatrixXcd effect_block_via_markov(const FockOperator& K, const PhaseRect& Z, int max_index,
                                         const ReconstructionConfig& cfg = {}, const SeriesControl& ctrl = {});

// T_{nm} = (2 pi)^{-1} \iint M^{|m><n|}_{0,0}(theta, r) p_ht^T(theta, r) dtheta dr.
cplx recover_matrix_element(const Sinogram& p_ht_T, int n, int m, const SeriesControl& ctrl = {});

struct RouteCheckReport {
  // max |R p_K^T - 2 pi \int p_ht^T(theta, s) p_ht^K(theta, s - r) ds|
  double radon_deviation = 0.0;
  // max |(2 pi)^{-1} R* Lambda [tomographic sinogram] - p_K^T| on the grid
  double inversion_deviation = 0.0;
  double field_max = 0.0;
};

struct RouteCheckConfig {
  GridSpec grid{};
  SinogramSpec sinogram{};
  QuadratureConfig quad{};
  int convolution_nodes = 512;
  double convolution_window = 12.0;
};

RouteCheckReport radon_route_check(const FockOperator& T, const FockOperator& K, const RouteCheckConfig& cfg = {});

}  // namespace tomokernel
