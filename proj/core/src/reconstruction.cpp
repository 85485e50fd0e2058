#include "tomokernel/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tomokernel/errors.hpp"
#include "tomokernel/parallel.hpp"
#include "tomokernel/quadrature.hpp"
#include "tomokernel/special_functions.hpp"

namespace tomokernel {

namespace {

constexpr double kPi = std::numbers::pi;

struct RectRule {
  std::vector<double> q, p, wq, wp;
};

RectRule rect_rule(const PhaseRect& Z, int order) {
  const QuadratureRule a = gauss_legendre(order, Z.q_lo, Z.q_hi);
  const QuadratureRule b = gauss_legendre(order, Z.p_lo, Z.p_hi);
  return {a.nodes, b.nodes, a.weights, b.weights};
}

// A_d(s) = sum_{n - m = d} T_{mn} h_n(s) h_m(s), so p_ht^T(theta, s) = sum_d e^{i d theta} A_d(s).
std::map<int, std::vector<cplx>> frequency_profiles(const FockOperator& T, const std::vector<double>& s) {
  std::map<int, std::vector<cplx>> out;
  const int d = T.dim();
  std::vector<double> h(d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (T(m, n) != cplx{}) out[n - m].assign(s.size(), cplx{});
    }
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    hermite_functions(d - 1, s[k], h.data());
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) {
        const cplx t = T(m, n);
        if (t != cplx{}) out[n - m][k] += t * h[n] * h[m];
      }
    }
  }
  return out;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

}  // namespace

void PhaseRect::validate() const {
  if (!(q_lo <= q_hi) || !(p_lo <= p_hi)) throw std::invalid_argument("PhaseRect: bounds out of order");
}

void ReconstructionConfig::validate() const {
  if (n_theta < 1 || nr < 2 || !(r_max > 0.0) || gauss_order_z < 1) {
    throw std::invalid_argument("ReconstructionConfig: all parameters must be positive");
  }
}

std::vector<cplx> reconstruct_density_complex(const Sinogram& p_ht_T, const FockOperator& K,
                                              const std::vector<std::pair<double, double>>& points,
                                              const SeriesControl& ctrl) {
  p_ht_T.validate();
  const auto& s = p_ht_T.spec;
  const KernelDensity kernel(K, ctrl, KernelDensity::Evaluation::tabulated);
  std::vector<cplx> out(points.size());
  const double measure = s.dtheta() * s.dr() / (2.0 * kPi);
  parallel_for(points.size(), [&](std::size_t idx) {
    const auto [q1, p1] = points[idx];
    cplx acc{0.0, 0.0};
    for (int i = 0; i < s.n_theta; ++i) {
      const double th = s.theta(i);
      cplx row{0.0, 0.0};
      for (int j = 0; j < s.nr; ++j) {
        const cplx v = p_ht_T.at(i, j);
        if (v == cplx{}) continue;
        row += v * kernel(q1, p1, th, s.r(j));
      }
      acc += row;
    }
    out[idx] = acc * measure;
  });
  return out;
}

std::vector<double> reconstruct_density(const Sinogram& p_ht_T, const FockOperator& K,
                                        const std::vector<std::pair<double, double>>& points,
                                        const SeriesControl& ctrl) {
  const auto values = reconstruct_density_complex(p_ht_T, K, points, ctrl);
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k].imag()) > 1e-8 * std::max(1.0, std::abs(values[k].real()))) {
      throw InvalidState("reconstruct_density: imaginary part " + std::to_string(values[k].imag()) +
                         " at point " + std::to_string(k) + "; data or kernel is not Hermitian");
    }
    out[k] = values[k].real();
  }
  return out;
}

cplx markov_weight(const KernelDensity& kernel, const PhaseRect& Z, double theta, double r, int gauss_order) {
  Z.validate();
  if (Z.area() == 0.0) return {0.0, 0.0};
  const RectRule rule = rect_rule(Z, gauss_order);
  cplx acc{0.0, 0.0};
  for (std::size_t a = 0; a < rule.q.size(); ++a) {
    cplx row{0.0, 0.0};
    for (std::size_t b = 0; b < rule.p.size(); ++b) row += rule.wp[b] * kernel(rule.q[a], rule.p[b], theta, r);
    acc += rule.wq[a] * row;
  }
  return acc / (2.0 * kPi);
}

cplx markov_weight(const FockOperator& K, const PhaseRect& Z, double theta, double r, int gauss_order,
                   const SeriesControl& ctrl) {
  return markov_weight(KernelDensity(K, ctrl), Z, theta, r, gauss_order);
}

Sinogram markov_weight_table(const KernelDensity& kernel, const PhaseRect& Z, const SinogramSpec& spec,
                             int gauss_order) {
  Z.validate();
  Sinogram out = Sinogram::zeros(spec);
  if (Z.area() == 0.0) return out;
  const RectRule rule = rect_rule(Z, gauss_order);
  parallel_for(spec.n_theta, [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double th = spec.theta(i);
    for (int j = 0; j < spec.nr; ++j) {
      const double r = spec.r(j);
      cplx acc{0.0, 0.0};
      for (std::size_t a = 0; a < rule.q.size(); ++a) {
        cplx row{0.0, 0.0};
        for (std::size_t b = 0; b < rule.p.size(); ++b) row += rule.wp[b] * kernel(rule.q[a], rule.p[b], th, r);
        acc += rule.wq[a] * row;
      }
      out.at(i, j) = acc / (2.0 * kPi);
    }
  });
  return out;
}

Eigen::MatrixXcd effect_block_direct(const FockOperator& K, const PhaseRect& Z, int max_index,
                                     const ReconstructionConfig& cfg, const QuadratureConfig& quad) {
  Z.validate();
  cfg.validate();
  if (max_index < 0) throw IndexOutOfRange("effect_block_direct: negative index");
  const int rows = max_index + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, rows);
  if (Z.area() == 0.0) return out;
  const RectRule rule = rect_rule(Z, cfg.gauss_order_z);
  std::vector<Eigen::MatrixXcd> partial(rule.q.size(), Eigen::MatrixXcd::Zero(rows, rows));
  parallel_for(rule.q.size(), [&](std::size_t a) {
    for (std::size_t b = 0; b < rule.p.size(); ++b) {
      const Eigen::MatrixXcd d = displacement_block(rows, K.dim(), rule.q[a], rule.p[b], quad);
      partial[a] += rule.wq[a] * rule.wp[b] * (d * K.matrix() * d.adjoint());
    }
  });
  for (const auto& p : partial) out += p;
  return out / (2.0 * kPi);
}

cplx effect_matrix_element_direct(const FockOperator& K, const PhaseRect& Z, int k, int l,
                                  const ReconstructionConfig& cfg, const QuadratureConfig& quad) {
  if (k < 0 || l < 0) throw IndexOutOfRange("effect_matrix_element_direct: negative index");
  return effect_block_direct(K, Z, std::max(k, l), cfg, quad)(k, l);
}

Eigen::MatrixXcd effect_block_via_markov(const FockOperator& K, const PhaseRect& Z, int max_index,
                                         const ReconstructionConfig& cfg, const SeriesControl& ctrl) {
  Z.validate();
  cfg.validate();
  if (max_index < 0) throw IndexOutOfRange("effect_block_via_markov: negative index");
  const int rows = max_index + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, rows);
  if (Z.area() == 0.0) return out;
  const SinogramSpec spec = cfg.sinogram();
  const KernelDensity kernel(K, ctrl, KernelDensity::Evaluation::tabulated);
  const Sinogram weight = markov_weight_table(kernel, Z, spec, cfg.gauss_order_z);

  std::vector<double> h(static_cast<std::size_t>(spec.nr) * rows);
  for (int j = 0; j < spec.nr; ++j) hermite_functions(max_index, spec.r(j), h.data() + static_cast<std::size_t>(j) * rows);
  // Angular moments W_f(r) = sum_i M(theta_i, r) e^{i f theta_i}, f = k - l.
  const double measure = spec.dtheta() * spec.dr() / (2.0 * kPi);
  for (int k = 0; k < rows; ++k) {
    for (int l = 0; l < rows; ++l) {
      cplx acc{0.0, 0.0};
      for (int i = 0; i < spec.n_theta; ++i) {
        const cplx phase = std::polar(1.0, (k - l) * spec.theta(i));
        cplx row{0.0, 0.0};
        for (int j = 0; j < spec.nr; ++j) {
          const std::size_t o = static_cast<std::size_t>(j) * rows;
          row += weight.at(i, j) * h[o + k] * h[o + l];
        }
        acc += phase * row;
      }
      out(k, l) = acc * measure;
    }
  }
  return out;
}

cplx effect_matrix_element_via_markov(const FockOperator& K, const PhaseRect& Z, int k, int l,
                                      const ReconstructionConfig& cfg, const SeriesControl& ctrl) {
  if (k < 0 || l < 0) throw IndexOutOfRange("effect_matrix_element_via_markov: negative index");
  return effect_block_via_markov(K, Z, std::max(k, l), cfg, ctrl)(k, l);
}

cplx recover_matrix_element(const Sinogram& p_ht_T, int n, int m, const SeriesControl& ctrl) {
  p_ht_T.validate();
  if (n < 0 || m < 0) throw IndexOutOfRange("recover_matrix_element: negative index");
  const auto& s = p_ht_T.spec;
  std::vector<double> base(s.nr);
  for (int j = 0; j < s.nr; ++j) base[j] = m_base(m, n, s.r(j), ctrl).real();
  cplx acc{0.0, 0.0};
  for (int i = 0; i < s.n_theta; ++i) {
    cplx row{0.0, 0.0};
    for (int j = 0; j < s.nr; ++j) row += base[j] * p_ht_T.at(i, j);
    acc += std::polar(1.0, (n - m) * s.theta(i)) * row;
  }
  return acc * s.dtheta() * s.dr() / (2.0 * kPi);
}

RouteCheckReport radon_route_check(const FockOperator& T, const FockOperator& K, const RouteCheckConfig& cfg) {
  RouteCheckReport report;
  const PhaseField field = direct_phase_density_grid(T, K, cfg.grid, cfg.quad);
  for (const auto& v : field.values) report.field_max = std::max(report.field_max, std::abs(v));
  const Sinogram radon_field = radon(field, cfg.sinogram);

  // 2 pi \int p_ht^T(theta, s) p_ht^K(theta, s - r) ds
  //   = sum_{d, d'} e^{i (d + d') theta} 2 pi \int A^T_d(s) A^K_{d'}(s - r) ds
  const auto& spec = cfg.sinogram;
  const QuadratureRule rule = gauss_legendre(cfg.convolution_nodes, -cfg.convolution_window, cfg.convolution_window);
  const auto AT = frequency_profiles(T, rule.nodes);
  std::vector<std::map<int, std::vector<cplx>>> AK(spec.nr);
  parallel_for(spec.nr, [&](std::size_t j) {
    std::vector<double> shifted(rule.nodes);
    for (auto& x : shifted) x -= spec.r(static_cast<int>(j));
    AK[j] = frequency_profiles(K, shifted);
  });
  Sinogram tomo = Sinogram::zeros(spec);
  for (int j = 0; j < spec.nr; ++j) {
    std::map<int, cplx> C;
    for (const auto& [d, a] : AT) {
      for (const auto& [e, b] : AK[j]) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < rule.size(); ++k) acc += rule.weights[k] * a[k] * b[k];
        C[d + e] += 2.0 * kPi * acc;
      }
    }
    for (int i = 0; i < spec.n_theta; ++i) {
      cplx v{0.0, 0.0};
      for (const auto& [f, c] : C) v += std::polar(1.0, f * spec.theta(i)) * c;
      tomo.at(i, j) = v;
    }
  }
  report.radon_deviation = max_abs_diff(radon_field.values, tomo.values);

  const PhaseField inverted = radon_inverse(tomo, cfg.grid);
  report.inversion_deviation = max_abs_diff(inverted.values, field.values);
  return report;
}

}  // namespace tomokernel
