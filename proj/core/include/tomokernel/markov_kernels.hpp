#pragma once

#include <memory>
#include <vector>

#include "tomokernel/quantum_states.hpp"
#include "tomokernel/special_functions.hpp"

namespace tomokernel {

// M^{|m><n|}_{0,0}(0, r). Real valued; returned as complex for uniformity
// with the shifted and weighted densities.
cplx m_base(int m, int n, double r, const SeriesControl& ctrl = {});

// Same density from its power series about r = 0 (n + m even only).
cplx m_base_maclaurin(int m, int n, double r, const SeriesControl& ctrl = {});

// e^{i(n-m) theta} M^{|m><n|}_{0,0}(0, r - q1 cos theta - p1 sin theta)
cplx m_shifted(int m, int n, double q1, double p1, double theta, double r, const SeriesControl& ctrl = {});

// Evaluator for M^K_{q1,p1}(theta, r) = sum_d e^{i d theta} F_d(r - a),
// a = q1 cos theta + p1 sin theta, with the pairs (m, n) grouped by d = n - m
// into one Hermite-coefficient table per frequency.
class KernelDensity {
 public:
  enum class Evaluation {
    exact,      // series / Fourier quadrature at every call
    tabulated,  // piecewise Chebyshev tables built once from the exact route
  };

  explicit KernelDensity(const FockOperator& K, const SeriesControl& ctrl = {},
                         Evaluation mode = Evaluation::exact, double weight_cutoff = 1e-14);
  ~KernelDensity();
  KernelDensity(KernelDensity&&) noexcept;
  KernelDensity& operator=(KernelDensity&&) noexcept;

  cplx operator()(double q1, double p1, double theta, double r) const;

  // F_d(u) = sum_{n - m = d} K_{mn} M^{|m><n|}_{0,0}(0, u).
  cplx profile(int d, double u) const;

  const std::vector<int>& frequencies() const;
  const FockOperator& weights() const;
  const SeriesControl& control() const;
  Evaluation mode() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

cplx m_kernel(const FockOperator& K, double q1, double p1, double theta, double r, const SeriesControl& ctrl = {});

// 2 (r + sqrt2 cos theta) [r + (1 - 2 r^2) daw(r)]
double cat_closed_form(double theta, double r);

// -(1/s) Y(r / sqrt(-s))
double cahill_glauber_closed_form(const CahillGlauberParam& param, double theta, double r);

// 1/r - 1/(r - 1); Singularity within 1e-9 of r = 0 or r = 1.
double indicator_kernel_density(double r);

// (2 pi)^{-1} \iint M^{|m><n|}_{0,0}(theta, r) e^{i(l-k) theta} h_l(r) h_k(r),
// theta integral taken by the selection rule l - k = m - n.
class OrthogonalityTable {
 public:
  OrthogonalityTable(int max_index, std::vector<cplx> values);

  int max_index() const { return max_index_; }
  cplx operator()(int m, int n, int l, int k) const;
  double max_deviation() const;  // from delta_{ml} delta_{nk}

 private:
  int max_index_;
  std::vector<cplx> values_;
};

struct OrthogonalityConfig {
  int nodes = 1024;
  double r_max = 12.0;
};

OrthogonalityTable orthogonality_matrix(int max_index, const SeriesControl& ctrl = {},
                                        const OrthogonalityConfig& quad = {});

}  // namespace tomokernel
