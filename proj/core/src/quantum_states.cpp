#include "tomokernel/quantum_states.hpp"

#include <cmath>
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

// Rows: quadrature nodes; columns: h_0 .. h_{count-1} at node - shift.
Eigen::MatrixXd hermite_table(const std::vector<double>& nodes, int count, double shift) {
  Eigen::MatrixXd table(static_cast<Eigen::Index>(nodes.size()), count);
  std::vector<double> buf(count);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    hermite_functions(count - 1, nodes[k] - shift, buf.data());
    for (int n = 0; n < count; ++n) table(static_cast<Eigen::Index>(k), n) = buf[n];
  }
  return table;
}

void check_quad(const QuadratureConfig& quad) {
  if (quad.nodes < 1 || !(quad.x_max > 0.0)) throw std::invalid_argument("QuadratureConfig: invalid node count or window");
}

// Shared pieces for displacement blocks along one q row.
struct DisplacementRow {
  QuadratureRule rule;
  Eigen::MatrixXd left;   // h_m(x)
  Eigen::MatrixXd right;  // h_n(x - q1)
  double q1;

  DisplacementRow(int rows, int cols, double q, const QuadratureConfig& quad)
      : rule(gauss_legendre(quad.nodes, -quad.x_max, quad.x_max)), q1(q) {
    left = hermite_table(rule.nodes, rows, 0.0);
    right = hermite_table(rule.nodes, cols, q);
  }

  // phase[k] = e^{i p1 x_k}
  Eigen::MatrixXcd block(double p1, const Eigen::VectorXcd& phase) const {
    Eigen::VectorXcd wphase(phase.size());
    for (Eigen::Index k = 0; k < phase.size(); ++k) wphase[k] = rule.weights[k] * phase[k];
    Eigen::MatrixXcd weighted = wphase.asDiagonal() * right.cast<cplx>();
    Eigen::MatrixXcd d = left.transpose().cast<cplx>() * weighted;
    return d * std::polar(1.0, -0.5 * q1 * p1);
  }
};

Eigen::VectorXcd phases(const std::vector<double>& nodes, double p) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) out[static_cast<Eigen::Index>(k)] = std::polar(1.0, p * nodes[k]);
  return out;
}

cplx phase_density_from_block(const FockOperator& T, const FockOperator& K, const Eigen::MatrixXcd& d) {
  const Eigen::MatrixXcd dkd = d * K.matrix() * d.adjoint();
  return (T.matrix().cwiseProduct(dkd.transpose())).sum();
}

}  // namespace

FockOperator::FockOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw std::invalid_argument("FockOperator: matrix must be square and non-empty");
  }
}

FockOperator FockOperator::zero(int dim) {
  if (dim < 1) throw std::invalid_argument("FockOperator: dim must be positive");
  return FockOperator(Eigen::MatrixXcd::Zero(dim, dim));
}

bool FockOperator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double FockOperator::tail_weight(int width) const {
  const int d = dim();
  const int start = std::max(0, d - width);
  double sum = 0.0;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (m >= start || n >= start) sum += std::norm(matrix_(m, n));
    }
  }
  return sum;
}

void FockOperator::validate_state(double herm_tol, double trace_tol, double eig_tol) const {
  const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > herm_tol) {
    throw InvalidState("state check 'hermitian' failed: max |T_mn - conj(T_nm)| = " + std::to_string(asym));
  }
  const cplx tr = matrix_.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw InvalidState("state check 'trace' failed: tr T = " + std::to_string(tr.real()) + " + " +
                       std::to_string(tr.imag()) + "i");
  }
  const Eigen::MatrixXcd sym = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -eig_tol) {
    throw InvalidState("state check 'positivity' failed: smallest eigenvalue " + std::to_string(smallest));
  }
}

void FockOperator::validate_tail(double tail_tol) const {
  const double tail = tail_weight();
  if (tail > tail_tol) {
    throw InvalidState("state check 'tail' failed: weight " + std::to_string(tail) + " in the last two rows/columns");
  }
}

FockOperator FockOperator::resized(int new_dim) const {
  if (new_dim < 1) throw std::invalid_argument("FockOperator::resized: dim must be positive");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(new_dim, new_dim);
  const int k = std::min(new_dim, dim());
  out.topLeftCorner(k, k) = matrix_.topLeftCorner(k, k);
  return FockOperator(std::move(out));
}

CahillGlauberParam CahillGlauberParam::from_s(double s) {
  if (!(s < 0.0)) throw std::invalid_argument("CahillGlauberParam: s must be negative");
  return CahillGlauberParam{(s + 1.0) / (s - 1.0)};
}

void CahillGlauberParam::validate() const {
  if (!(lambda > -1.0 && lambda < 1.0)) throw std::invalid_argument("CahillGlauberParam: lambda must lie in (-1, 1)");
}

FockOperator fock_projector(int m, int n, int dim) {
  if (dim < 1) throw std::invalid_argument("fock_projector: dim must be positive");
  if (m < 0 || n < 0 || m >= dim || n >= dim) {
    throw IndexOutOfRange("fock_projector: index (" + std::to_string(m) + "," + std::to_string(n) +
                          ") outside dim " + std::to_string(dim));
  }
  FockOperator out = FockOperator::zero(dim);
  Eigen::MatrixXcd mat = out.matrix();
  mat(m, n) = 1.0;
  return FockOperator(std::move(mat));
}

FockOperator cat_state(int dim) {
  if (dim < 2) throw std::invalid_argument("cat_state: dim must be >= 2");
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
  mat.topLeftCorner(2, 2).setConstant(0.5);
  return FockOperator(std::move(mat));
}

int cahill_glauber_dim(const CahillGlauberParam& param, double tail_tol) {
  param.validate();
  const double a = std::abs(param.lambda);
  if (a == 0.0) return 1;
  // |lambda|^d / (1 - |lambda|) <= tail_tol
  const double d = std::log(tail_tol * (1.0 - a)) / std::log(a);
  return std::max(1, static_cast<int>(std::ceil(d - 1e-12)));
}

FockOperator cahill_glauber_kernel(const CahillGlauberParam& param, int dim, double tail_tol) {
  param.validate();
  if (dim < 1) throw std::invalid_argument("cahill_glauber_kernel: dim must be positive");
  const double a = std::abs(param.lambda);
  const double tail = std::pow(a, dim) / (1.0 - a);
  if (tail > tail_tol) {
    throw TruncationLoss("cahill_glauber_kernel: geometric tail " + std::to_string(tail) + " at dim " +
                         std::to_string(dim) + " exceeds " + std::to_string(tail_tol) + "; need dim >= " +
                         std::to_string(cahill_glauber_dim(param, tail_tol)));
  }
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
  double w = 1.0 - param.lambda;
  for (int n = 0; n < dim; ++n) {
    mat(n, n) = w;
    w *= param.lambda;
  }
  return FockOperator(std::move(mat));
}

cplx integral_kernel(const FockOperator& T, double x, double y) {
  const int d = T.dim();
  const auto hx = hermite_functions(d - 1, x);
  const auto hy = hermite_functions(d - 1, y);
  cplx sum{0.0, 0.0};
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) sum += T(m, n) * hx[m] * hy[n];
  }
  return sum;
}

namespace {

// T~(q - x_k, q + x_k) for all nodes x_k.
Eigen::VectorXcd kernel_along_antidiagonal(const FockOperator& T, const QuadratureRule& rule, double q) {
  const int d = T.dim();
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXd a(d, n), b(d, n);
  std::vector<double> buf(d);
  for (Eigen::Index k = 0; k < n; ++k) {
    hermite_functions(d - 1, q - rule.nodes[k], buf.data());
    for (int m = 0; m < d; ++m) a(m, k) = buf[m];
    hermite_functions(d - 1, q + rule.nodes[k], buf.data());
    for (int m = 0; m < d; ++m) b(m, k) = buf[m];
  }
  const Eigen::MatrixXcd tb = T.matrix() * b.cast<cplx>();
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = a.col(k).cast<cplx>().dot(tb.col(k));
  return out;
}

}  // namespace

PhaseField wigner(const FockOperator& T, const GridSpec& grid, const QuadratureConfig& quad) {
  check_quad(quad);
  const QuadratureRule rule = gauss_legendre(quad.nodes, -quad.x_max, quad.x_max);
  PhaseField out = PhaseField::zeros(grid);
  const auto n = static_cast<Eigen::Index>(rule.size());
  parallel_for(grid.nq, [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    Eigen::VectorXcd f = kernel_along_antidiagonal(T, rule, grid.q(i));
    for (Eigen::Index k = 0; k < n; ++k) f[k] *= rule.weights[k] / kPi;
    Eigen::VectorXcd ph = phases(rule.nodes, 2.0 * grid.p_min);
    const Eigen::VectorXcd step = phases(rule.nodes, 2.0 * grid.dp());
    for (int j = 0; j < grid.np; ++j) {
      // e^{2ipx} carried by recurrence; refreshed periodically against drift.
      if (j > 0 && j % 64 == 0) ph = phases(rule.nodes, 2.0 * grid.p(j));
      out.at(i, j) = (f.array() * ph.array()).sum();
      ph = ph.cwiseProduct(step);
    }
  });
  return out;
}

cplx wigner_point(const FockOperator& T, double q, double p, const QuadratureConfig& quad) {
  check_quad(quad);
  const QuadratureRule rule = gauss_legendre(quad.nodes, -quad.x_max, quad.x_max);
  const Eigen::VectorXcd f = kernel_along_antidiagonal(T, rule, q);
  cplx sum{0.0, 0.0};
  for (Eigen::Index k = 0; k < f.size(); ++k) sum += rule.weights[k] * f[k] * std::polar(1.0, 2.0 * p * rule.nodes[k]);
  return sum / kPi;
}

cplx tomographic_density(const FockOperator& T, double theta, double r) {
  const int d = T.dim();
  const auto h = hermite_functions(d - 1, r);
  cplx sum{0.0, 0.0};
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const cplx t = T(m, n);
      if (t == cplx{}) continue;
      sum += t * std::polar(1.0, (n - m) * theta) * h[n] * h[m];
    }
  }
  return sum;
}

Sinogram tomographic_sinogram(const FockOperator& T, const SinogramSpec& spec) {
  return Sinogram::sample(spec, [&](double th, double r) { return tomographic_density(T, th, r); });
}

Eigen::MatrixXcd displacement_block(int rows, int cols, double q1, double p1, const QuadratureConfig& quad) {
  check_quad(quad);
  if (rows < 1 || cols < 1) throw std::invalid_argument("displacement_block: empty block");
  const DisplacementRow row(rows, cols, q1, quad);
  return row.block(p1, phases(row.rule.nodes, p1));
}

cplx displaced_matrix_element(int m, int n, double q1, double p1, const QuadratureConfig& quad) {
  if (m < 0 || n < 0) throw IndexOutOfRange("displaced_matrix_element: negative index");
  return displacement_block(m + 1, n + 1, q1, p1, quad)(m, n);
}

cplx direct_phase_density(const FockOperator& T, const FockOperator& K, double q1, double p1,
                          const QuadratureConfig& quad) {
  return phase_density_from_block(T, K, displacement_block(T.dim(), K.dim(), q1, p1, quad));
}

PhaseField direct_phase_density_grid(const FockOperator& T, const FockOperator& K, const GridSpec& grid,
                                     const QuadratureConfig& quad) {
  check_quad(quad);
  PhaseField out = PhaseField::zeros(grid);
  parallel_for(grid.nq, [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const DisplacementRow row(T.dim(), K.dim(), grid.q(i), quad);
    Eigen::VectorXcd ph = phases(row.rule.nodes, grid.p_min);
    const Eigen::VectorXcd step = phases(row.rule.nodes, grid.dp());
    for (int j = 0; j < grid.np; ++j) {
      if (j > 0 && j % 64 == 0) ph = phases(row.rule.nodes, grid.p(j));
      out.at(i, j) = phase_density_from_block(T, K, row.block(grid.p(j), ph));
      ph = ph.cwiseProduct(step);
    }
  });
  return out;
}

}  // namespace tomokernel
