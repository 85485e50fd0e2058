#include "tomokernel/markov_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "special_detail.hpp"
#include "tomokernel/errors.hpp"
#include "tomokernel/parallel.hpp"
#include "tomokernel/quadrature.hpp"

namespace tomokernel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAsymptoticRadius = 40.0;
constexpr double kTablePanel = 0.5;
constexpr int kTableDegree = 24;

using ld = long double;

void check_indices(int m, int n, const SeriesControl& ctrl, const char* what) {
  if (m < 0 || n < 0) throw IndexOutOfRange(std::string(what) + ": negative Fock index");
  if (m + n > 2 * ctrl.k_max) {
    throw IndexOutOfRange(std::string(what) + ": m + n exceeds 2 k_max = " + std::to_string(2 * ctrl.k_max));
  }
}

// Coefficients C_j of M^{|m><n|}_{0,0}(0, u) = sum_j C_j q_j(u), q_j = H_j / sqrt(2^j j!).
// With n >= m, s = n + m, par = s mod 2:
//   tail j = s + 2i:  C = c_i, c_0 = binom(s, n)^{-1/2},
//                     c_{i+1}/c_i = -(n+i+1)(m+i+1) / ((i+1) sqrt((s+2i+1)(s+2i+2)))
//   head j = 2k + par, k < A = (n - m - par)/2: finitely many terms carrying the
//                     generalized binomial C(k - A, m) = (-1)^m C(m + A - k - 1, m).
struct PairSeries {
  int tail_start = 0;
  std::vector<ld> coeff;
};

PairSeries pair_series(int m, int n, int k_max) {
  if (n < m) std::swap(n, m);
  const int s = n + m;
  const int par = s % 2;
  const int l = (s - par) / 2;
  const int A = (n - m - par) / 2;
  PairSeries out;
  out.tail_start = s;
  out.coeff.assign(static_cast<std::size_t>(s + 2 * k_max + 1), 0.0L);

  ld c = std::exp(-0.5L * (std::lgamma(static_cast<ld>(s + 1)) - std::lgamma(static_cast<ld>(n + 1)) -
                           std::lgamma(static_cast<ld>(m + 1))));
  for (int i = 0; i < k_max; ++i) {
    out.coeff[s + 2 * i] = c;
    c *= -static_cast<ld>(n + i + 1) * (m + i + 1) / ((i + 1) * std::sqrt(static_cast<ld>(s + 2 * i + 1) * (s + 2 * i + 2)));
  }

  const ld half_log_nm = 0.5L * (std::lgamma(static_cast<ld>(n + 1)) + std::lgamma(static_cast<ld>(m + 1)));
  for (int k = 0; k < A; ++k) {
    const int j = 2 * k + par;
    const ld log_mag = half_log_nm - std::lgamma(static_cast<ld>(n + 1)) - 0.5L * std::lgamma(static_cast<ld>(j + 1)) +
                       std::lgamma(static_cast<ld>(k + A + par + 1)) + std::lgamma(static_cast<ld>(m + A - k)) -
                       std::lgamma(static_cast<ld>(m + 1)) - std::lgamma(static_cast<ld>(A - k));
    const int sign_exp = l + k + m;
    out.coeff[j] += ((sign_exp % 2 == 0) ? 1.0L : -1.0L) * std::exp(log_mag);
  }
  return out;
}

// sum_j (re_j + i im_j) q_j, stopping after consecutive small terms once every
// tail has started.
cplx sum_series(const std::vector<ld>& re, const std::vector<ld>* im, int parity, int last_tail_start,
                const ld* q, const SeriesControl& ctrl, const char* what) {
  ld sr = 0.0L, si = 0.0L;
  int small_run = 0;
  const int j_end = static_cast<int>(re.size());
  for (int j = parity; j < j_end; j += 2) {
    const ld tr = re[j] * q[j];
    const ld ti = im ? (*im)[j] * q[j] : 0.0L;
    sr += tr;
    si += ti;
    if (j < last_tail_start) continue;
    const double mag = std::hypot(static_cast<double>(tr), static_cast<double>(ti));
    const double scale = std::max(1.0, std::hypot(static_cast<double>(sr), static_cast<double>(si)));
    if (mag < ctrl.abs_tol * scale) {
      if (++small_run >= ctrl.consecutive_small) break;
    } else {
      small_run = 0;
    }
  }
  detail::require_convergence(small_run, ctrl, what);
  return {static_cast<double>(sr), static_cast<double>(si)};
}

double spectral_sign(int alpha) {
  const int e = (alpha % 2 == 0) ? alpha / 2 : (alpha - 1) / 2;
  return (e % 2 == 0) ? 1.0 : -1.0;
}

double spectral_xi_max(int n_max, int m_max) { return std::sqrt(2.0 * n_max + 1) + std::sqrt(2.0 * m_max + 1) + 14.0; }

// Normalized Laguerre functions l_k^{(alpha)}(x), k = 0..k_max.
void laguerre_functions(int k_max, int alpha, double x, double* out) {
  double l0 = 0.0;
  if (x > 0.0) {
    l0 = std::exp(0.5 * alpha * std::log(x) - 0.5 * x - 0.5 * std::lgamma(alpha + 1.0));
  } else if (alpha == 0) {
    l0 = 1.0;
  }
  double prev = 0.0, cur = l0;
  for (int k = 0; k <= k_max; ++k) {
    out[k] = cur;
    const double next = ((2.0 * k + 1 + alpha - x) * cur - std::sqrt(static_cast<double>(k) * (k + alpha)) * prev) /
                        std::sqrt((k + 1.0) * (k + 1.0 + alpha));
    prev = cur;
    cur = next;
  }
}

// M^{|m><n|}(u) = sign \int_0^inf xi l_min^{(alpha)}(xi^2/2) {cos|sin}(xi u) dxi
double m_base_spectral(int m, int n, double u) {
  const int alpha = std::abs(n - m);
  const int lo = std::min(m, n);
  const auto& nodes = detail::spectral_nodes(spectral_xi_max(std::max(m, n), lo));
  std::vector<double> lag(lo + 1);
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.xi.size(); ++k) {
    const double xi = nodes.xi[k];
    laguerre_functions(lo, alpha, 0.5 * xi * xi, lag.data());
    const double osc = (alpha % 2 == 0) ? std::cos(xi * u) : std::sin(xi * u);
    sum += nodes.w[k] * xi * lag[lo] * osc;
  }
  return spectral_sign(alpha) * sum;
}

// Large-|u| form: (-1)^s sqrt(n! m! / 2^s) sum_v 2^v / (v! (n-v)! (m-v)!) Y^{(s-2v)}(u),
// with Y^{(p)} = 2 daw^{(p+1)} from its asymptotic expansion.
bool m_base_asymptotic(int m, int n, double u, double tol, double* out) {
  const int s = n + m;
  const double base = 0.5 * (std::lgamma(n + 1.0) + std::lgamma(m + 1.0)) - 0.5 * s * std::log(2.0);
  double sum = 0.0;
  for (int v = 0; v <= std::min(m, n); ++v) {
    double d = 0.0;
    if (!detail::dawson_derivative_asymptotic(s - 2 * v + 1, u, tol, &d)) return false;
    const double coef =
        std::exp(base + v * std::log(2.0) - std::lgamma(v + 1.0) - std::lgamma(n - v + 1.0) - std::lgamma(m - v + 1.0));
    sum += coef * 2.0 * d;
  }
  *out = (s % 2 == 0) ? sum : -sum;
  return true;
}

double m_base_far(int m, int n, double u, const SeriesControl& ctrl) {
  double v = 0.0;
  if (std::abs(u) > kAsymptoticRadius && m_base_asymptotic(m, n, u, ctrl.abs_tol, &v)) return v;
  return m_base_spectral(m, n, u);
}

void chebyshev_coefficients(const double* f, int N, double* c) {
  for (int j = 0; j <= N; ++j) {
    double acc = 0.0;
    for (int k = 0; k <= N; ++k) {
      const double w = (k == 0 || k == N) ? 0.5 : 1.0;
      acc += w * f[k] * std::cos(kPi * j * k / N);
    }
    c[j] = 2.0 * acc / N;
  }
  c[0] *= 0.5;
  c[N] *= 0.5;
}

double clenshaw(const double* c, int N, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int j = N; j >= 1; --j) {
    const double b0 = 2.0 * t * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

}  // namespace

cplx m_base(int m, int n, double r, const SeriesControl& ctrl) {
  ctrl.validate();
  check_indices(m, n, ctrl, "m_base");
  if (std::abs(r) > ctrl.series_radius) return {m_base_far(m, n, r, ctrl), 0.0};
  const PairSeries ps = pair_series(m, n, ctrl.k_max);
  std::vector<ld> q(ps.coeff.size());
  detail::scaled_hermite(static_cast<int>(q.size()) - 1, r, q.data());
  return sum_series(ps.coeff, nullptr, (m + n) % 2, ps.tail_start, q.data(), ctrl, "m_base");
}

cplx m_base_maclaurin(int m, int n, double r, const SeriesControl& ctrl) {
  ctrl.validate();
  check_indices(m, n, ctrl, "m_base_maclaurin");
  if ((m + n) % 2 != 0) throw UnsupportedParity("m_base_maclaurin: only n + m even has a power series form");
  if (std::abs(r) > 6.0) throw std::invalid_argument("m_base_maclaurin: requires |r| <= 6");
  // 2 sqrt(n! m!) sum_t (-1)^t (2r)^{2t}/(2t)! sum_v (-2)^{l-v} (l-v+t)! / (v! (n-v)! (m-v)!)
  using wide = __float128;
  const int l = (m + n) / 2;
  const int vmax = std::min(m, n);
  std::vector<wide> inner(vmax + 1);  // (-2)^{l-v} (l-v+t)! / (v! (n-v)! (m-v)!) at current t
  for (int v = 0; v <= vmax; ++v) {
    wide x = ((l - v) % 2 == 0) ? 1 : -1;
    for (int i = 0; i < l - v; ++i) x *= 2;
    for (int i = 2; i <= l - v; ++i) x *= i;
    for (int i = 2; i <= v; ++i) x /= i;
    for (int i = 2; i <= n - v; ++i) x /= i;
    for (int i = 2; i <= m - v; ++i) x /= i;
    inner[v] = x;
  }
  wide prefactor = 2;
  {
    wide nm = 1;
    for (int i = 2; i <= n; ++i) nm *= i;
    for (int i = 2; i <= m; ++i) nm *= i;
    prefactor *= static_cast<wide>(std::sqrt(static_cast<long double>(nm)));
  }
  const wide x2 = static_cast<wide>(2.0 * r) * static_cast<wide>(2.0 * r);
  wide outer = 1;  // (-1)^t (2r)^{2t} / (2t)!
  wide sum = 0;
  int small_run = 0;
  for (int t = 0; t < ctrl.k_max; ++t) {
    wide s_t = 0;
    for (int v = 0; v <= vmax; ++v) s_t += inner[v];
    const wide term = prefactor * outer * s_t;
    sum += term;
    const double mag = std::abs(static_cast<double>(term));
    const double scale = std::max(1.0, std::abs(static_cast<double>(sum)));
    if (mag < ctrl.abs_tol * 1e-4 * scale) {
      if (++small_run >= ctrl.consecutive_small) break;
    } else {
      small_run = 0;
    }
    outer *= -x2 / ((2 * t + 1) * static_cast<wide>(2 * t + 2));
    for (int v = 0; v <= vmax; ++v) inner[v] *= (l - v + t + 1);
  }
  detail::require_convergence(small_run, ctrl, "m_base_maclaurin");
  return {static_cast<double>(sum), 0.0};
}

cplx m_shifted(int m, int n, double q1, double p1, double theta, double r, const SeriesControl& ctrl) {
  const double a = q1 * std::cos(theta) + p1 * std::sin(theta);
  return std::polar(1.0, (n - m) * theta) * m_base(m, n, r - a, ctrl);
}

struct KernelDensity::Impl {
  struct Group {
    int d = 0;
    int alpha = 0;
    std::vector<std::pair<int, int>> pairs;
    std::vector<cplx> weights;
    std::vector<ld> re, im;
    int last_tail_start = 0;
    // Fourier side: F_d(u) = sum_k g_k {cos|sin}(xi_k u)
    const detail::SpectralNodes* nodes = nullptr;
    std::vector<cplx> g;
    // Chebyshev panels on [0, kAsymptoticRadius]
    std::vector<double> cheb_re, cheb_im;
  };

  FockOperator K;
  SeriesControl ctrl;
  Evaluation mode;
  std::vector<int> freqs;
  std::vector<Group> groups;
  std::map<int, std::size_t> index;
  int q_len = 1;
  int panels = 0;

  cplx exact(const Group& g, double u, const ld* q) const {
    const double a = std::abs(u);
    if (a <= ctrl.series_radius) {
      return sum_series(g.re, &g.im, g.alpha % 2, g.last_tail_start, q, ctrl, "KernelDensity");
    }
    if (a <= kAsymptoticRadius) {
      cplx sum{0.0, 0.0};
      for (std::size_t k = 0; k < g.nodes->xi.size(); ++k) {
        const double x = g.nodes->xi[k] * u;
        sum += g.g[k] * ((g.alpha % 2 == 0) ? std::cos(x) : std::sin(x));
      }
      return sum;
    }
    cplx sum{0.0, 0.0};
    for (std::size_t p = 0; p < g.pairs.size(); ++p) {
      sum += g.weights[p] * m_base_far(g.pairs[p].first, g.pairs[p].second, u, ctrl);
    }
    return sum;
  }

  cplx exact_single(const Group& g, double u) const {
    if (std::abs(u) <= ctrl.series_radius) {
      std::vector<ld> q(q_len);
      detail::scaled_hermite(q_len - 1, u, q.data());
      return exact(g, u, q.data());
    }
    return exact(g, u, nullptr);
  }

  cplx tabulated(const Group& g, double u) const {
    const double a = std::abs(u);
    if (a > kAsymptoticRadius) return exact(g, u, nullptr);
    int p = static_cast<int>(a / kTablePanel);
    if (p >= panels) p = panels - 1;
    const double mid = (p + 0.5) * kTablePanel;
    const double t = (a - mid) / (0.5 * kTablePanel);
    const std::size_t off = static_cast<std::size_t>(p) * (kTableDegree + 1);
    cplx v{clenshaw(g.cheb_re.data() + off, kTableDegree, t), clenshaw(g.cheb_im.data() + off, kTableDegree, t)};
    if (u < 0 && g.alpha % 2 == 1) v = -v;
    return v;
  }

  void build_table(Group& g) {
    panels = static_cast<int>(std::ceil(kAsymptoticRadius / kTablePanel));
    const int N = kTableDegree;
    g.cheb_re.assign(static_cast<std::size_t>(panels) * (N + 1), 0.0);
    g.cheb_im.assign(g.cheb_re.size(), 0.0);
    parallel_for(panels, [&](std::size_t pi) {
      std::vector<double> fr(N + 1), fi(N + 1);
      const double mid = (pi + 0.5) * kTablePanel;
      for (int k = 0; k <= N; ++k) {
        const double u = mid + 0.5 * kTablePanel * std::cos(kPi * k / N);
        const cplx v = exact_single(g, u);
        fr[k] = v.real();
        fi[k] = v.imag();
      }
      const std::size_t off = pi * (N + 1);
      chebyshev_coefficients(fr.data(), N, g.cheb_re.data() + off);
      chebyshev_coefficients(fi.data(), N, g.cheb_im.data() + off);
    });
  }
};

KernelDensity::KernelDensity(const FockOperator& K, const SeriesControl& ctrl, Evaluation mode, double weight_cutoff)
    : impl_(std::make_unique<Impl>()) {
  ctrl.validate();
  auto& I = *impl_;
  I.K = K;
  I.ctrl = ctrl;
  I.mode = mode;
  const int dim = K.dim();
  check_indices(dim - 1, dim - 1, ctrl, "KernelDensity");
  std::map<int, Impl::Group> by_d;
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      const cplx w = K(m, n);
      if (std::abs(w) < weight_cutoff) continue;
      auto& g = by_d[n - m];
      g.d = n - m;
      g.alpha = std::abs(n - m);
      g.pairs.emplace_back(m, n);
      g.weights.push_back(w);
    }
  }
  for (auto& [d, g] : by_d) {
    int n_max = 0, m_max = 0;
    for (std::size_t p = 0; p < g.pairs.size(); ++p) {
      const auto [m, n] = g.pairs[p];
      const PairSeries ps = pair_series(m, n, ctrl.k_max);
      if (g.re.size() < ps.coeff.size()) {
        g.re.resize(ps.coeff.size(), 0.0L);
        g.im.resize(ps.coeff.size(), 0.0L);
      }
      for (std::size_t j = 0; j < ps.coeff.size(); ++j) {
        g.re[j] += static_cast<ld>(g.weights[p].real()) * ps.coeff[j];
        g.im[j] += static_cast<ld>(g.weights[p].imag()) * ps.coeff[j];
      }
      g.last_tail_start = std::max(g.last_tail_start, ps.tail_start);
      n_max = std::max(n_max, std::max(m, n));
      m_max = std::max(m_max, std::min(m, n));
    }
    I.q_len = std::max(I.q_len, static_cast<int>(g.re.size()));

    g.nodes = &detail::spectral_nodes(spectral_xi_max(n_max, m_max));
    g.g.assign(g.nodes->xi.size(), cplx{0.0, 0.0});
    const double sign = spectral_sign(g.alpha);
    std::vector<double> lag(m_max + 1);
    for (std::size_t k = 0; k < g.nodes->xi.size(); ++k) {
      const double xi = g.nodes->xi[k];
      laguerre_functions(m_max, g.alpha, 0.5 * xi * xi, lag.data());
      cplx acc{0.0, 0.0};
      for (std::size_t p = 0; p < g.pairs.size(); ++p) {
        acc += g.weights[p] * lag[std::min(g.pairs[p].first, g.pairs[p].second)];
      }
      g.g[k] = sign * g.nodes->w[k] * xi * acc;
    }
    I.freqs.push_back(d);
    I.index[d] = I.groups.size();
    I.groups.push_back(std::move(g));
  }
  if (mode == Evaluation::tabulated) {
    for (auto& g : I.groups) I.build_table(g);
  }
}

KernelDensity::~KernelDensity() = default;
KernelDensity::KernelDensity(KernelDensity&&) noexcept = default;
KernelDensity& KernelDensity::operator=(KernelDensity&&) noexcept = default;

cplx KernelDensity::operator()(double q1, double p1, double theta, double r) const {
  const auto& I = *impl_;
  const double u = r - q1 * std::cos(theta) - p1 * std::sin(theta);
  cplx sum{0.0, 0.0};
  if (I.mode == Evaluation::tabulated) {
    for (const auto& g : I.groups) sum += std::polar(1.0, g.d * theta) * I.tabulated(g, u);
    return sum;
  }
  std::vector<ld> q;
  if (std::abs(u) <= I.ctrl.series_radius) {
    q.resize(I.q_len);
    detail::scaled_hermite(I.q_len - 1, u, q.data());
  }
  for (const auto& g : I.groups) sum += std::polar(1.0, g.d * theta) * I.exact(g, u, q.data());
  return sum;
}

cplx KernelDensity::profile(int d, double u) const {
  const auto& I = *impl_;
  auto it = I.index.find(d);
  if (it == I.index.end()) return {0.0, 0.0};
  const auto& g = I.groups[it->second];
  return I.mode == Evaluation::tabulated ? I.tabulated(g, u) : I.exact_single(g, u);
}

const std::vector<int>& KernelDensity::frequencies() const { return impl_->freqs; }
const FockOperator& KernelDensity::weights() const { return impl_->K; }
const SeriesControl& KernelDensity::control() const { return impl_->ctrl; }
KernelDensity::Evaluation KernelDensity::mode() const { return impl_->mode; }

cplx m_kernel(const FockOperator& K, double q1, double p1, double theta, double r, const SeriesControl& ctrl) {
  return KernelDensity(K, ctrl)(q1, p1, theta, r);
}

double cat_closed_form(double theta, double r) {
  return 2.0 * (r + std::sqrt(2.0) * std::cos(theta)) * (r + (1.0 - 2.0 * r * r) * dawson(r));
}

double cahill_glauber_closed_form(const CahillGlauberParam& param, double /*theta*/, double r) {
  param.validate();
  const double s = param.s();
  return -y_function(r / std::sqrt(-s)) / s;
}

double indicator_kernel_density(double r) {
  constexpr double guard = 1e-9;
  if (std::abs(r) < guard || std::abs(r - 1.0) < guard) {
    throw Singularity("indicator_kernel_density: r = " + std::to_string(r) + " lies on a pole (r = 0 or r = 1)");
  }
  return 1.0 / r - 1.0 / (r - 1.0);
}

OrthogonalityTable::OrthogonalityTable(int max_index, std::vector<cplx> values)
    : max_index_(max_index), values_(std::move(values)) {
  const std::size_t n = static_cast<std::size_t>(max_index + 1);
  if (values_.size() != n * n * n * n) throw std::invalid_argument("OrthogonalityTable: size mismatch");
}

cplx OrthogonalityTable::operator()(int m, int n, int l, int k) const {
  const int N = max_index_ + 1;
  if (m < 0 || n < 0 || l < 0 || k < 0 || m >= N || n >= N || l >= N || k >= N) {
    throw IndexOutOfRange("OrthogonalityTable: index outside table");
  }
  return values_[((static_cast<std::size_t>(m) * N + n) * N + l) * N + k];
}

double OrthogonalityTable::max_deviation() const {
  const int N = max_index_ + 1;
  double worst = 0.0;
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      for (int l = 0; l < N; ++l)
        for (int k = 0; k < N; ++k) {
          const double expect = (m == l && n == k) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs((*this)(m, n, l, k) - expect));
        }
  return worst;
}

OrthogonalityTable orthogonality_matrix(int max_index, const SeriesControl& ctrl, const OrthogonalityConfig& quad) {
  if (max_index < 0 || max_index > 8) throw std::invalid_argument("orthogonality_matrix: max_index must lie in [0, 8]");
  ctrl.validate();
  const int N = max_index + 1;
  const QuadratureRule rule = gauss_legendre(quad.nodes, -quad.r_max, quad.r_max);
  const std::size_t nodes = rule.size();

  std::vector<double> h(nodes * N);
  for (std::size_t k = 0; k < nodes; ++k) hermite_functions(max_index, rule.nodes[k], h.data() + k * N);

  // M^{|m><n|} is symmetric in (m, n); fill m <= n.
  std::vector<double> M(static_cast<std::size_t>(N) * N * nodes);
  parallel_for(static_cast<std::size_t>(N) * N, [&](std::size_t idx) {
    const int m = static_cast<int>(idx / N), n = static_cast<int>(idx % N);
    if (m > n) return;
    for (std::size_t k = 0; k < nodes; ++k) M[idx * nodes + k] = m_base(m, n, rule.nodes[k], ctrl).real();
  });

  std::vector<cplx> values(static_cast<std::size_t>(N) * N * N * N, cplx{0.0, 0.0});
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      const std::size_t src = static_cast<std::size_t>(std::min(m, n)) * N + std::max(m, n);
      for (int l = 0; l < N; ++l) {
        const int k = l - m + n;  // selection rule from the angular integral
        if (k < 0 || k >= N) continue;
        double acc = 0.0;
        for (std::size_t x = 0; x < nodes; ++x) acc += rule.weights[x] * M[src * nodes + x] * h[x * N + l] * h[x * N + k];
        values[((static_cast<std::size_t>(m) * N + n) * N + l) * N + k] = acc;
      }
    }
  }
  return OrthogonalityTable(max_index, std::move(values));
}

}  // namespace tomokernel
