#include "tomokernel/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "tomokernel/errors.hpp"
#include "tomokernel/parallel.hpp"

namespace tomokernel {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_field_boundary(const PhaseField& f, double tol, const char* what) {
  const double peak = max_abs(f.values);
  if (peak == 0.0) return;
  double ring = 0.0;
  const int nq = f.grid.nq, np = f.grid.np;
  for (int j = 0; j < np; ++j) ring = std::max({ring, std::abs(f.at(0, j)), std::abs(f.at(nq - 1, j))});
  for (int i = 0; i < nq; ++i) ring = std::max({ring, std::abs(f.at(i, 0)), std::abs(f.at(i, np - 1))});
  if (ring > tol * peak) {
    throw BoundaryLeak(std::string(what) + ": boundary magnitude " + std::to_string(ring / peak) +
                       " (relative) exceeds " + std::to_string(tol));
  }
}

void check_slices_boundary(const cplx* data, int rows, int nr, double tol, const char* what) {
  double peak = 0.0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(rows) * nr; ++k) peak = std::max(peak, std::abs(data[k]));
  if (peak == 0.0) return;
  double ends = 0.0;
  for (int i = 0; i < rows; ++i) {
    ends = std::max({ends, std::abs(data[static_cast<std::size_t>(i) * nr]),
                     std::abs(data[static_cast<std::size_t>(i) * nr + nr - 1])});
  }
  if (ends > tol * peak) {
    throw BoundaryLeak(std::string(what) + ": slice end magnitude " + std::to_string(ends / peak) +
                       " (relative) exceeds " + std::to_string(tol));
  }
}

// Band-limited discrete kernels: sinc interpolation of the samples followed by
// the exact continuous operator, evaluated back on the lattice.
double hilbert_weight(long k) {
  if (k % 2 == 0) return 0.0;
  return 2.0 / (kPi * static_cast<double>(k));
}

std::function<double(long)> lambda_weight(double h) {
  return [h](long k) -> double {
    if (k == 0) return kPi * kPi / (2.0 * h);
    if (k % 2 == 0) return 0.0;
    const double kk = static_cast<double>(k);
    return -2.0 / (h * kk * kk);
  };
}

void cubic_weights(double u, double* w) {
  w[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
  w[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  w[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
  w[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

// x, y are fractional lattice indices.
cplx interpolate_index(const PhaseField& f, double x, double y, Interpolation method) {
  const int nq = f.grid.nq, np = f.grid.np;
  if (x < 0.0 || y < 0.0 || x > nq - 1 || y > np - 1) return {0.0, 0.0};
  const int i0 = std::min(static_cast<int>(x), nq - 2 >= 0 ? nq - 2 : 0);
  const int j0 = std::min(static_cast<int>(y), np - 2 >= 0 ? np - 2 : 0);
  const double u = x - i0, v = y - j0;
  if (method == Interpolation::bilinear || nq < 4 || np < 4) {
    const int i1 = std::min(i0 + 1, nq - 1), j1 = std::min(j0 + 1, np - 1);
    return (1 - u) * ((1 - v) * f.at(i0, j0) + v * f.at(i0, j1)) + u * ((1 - v) * f.at(i1, j0) + v * f.at(i1, j1));
  }
  double wu[4], wv[4];
  cubic_weights(u, wu);
  cubic_weights(v, wv);
  cplx acc{0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    const int i = i0 - 1 + a;
    if (i < 0 || i >= nq) continue;
    cplx row{0.0, 0.0};
    for (int b = 0; b < 4; ++b) {
      const int j = j0 - 1 + b;
      if (j < 0 || j >= np) continue;
      row += wv[b] * f.at(i, j);
    }
    acc += wu[a] * row;
  }
  return acc;
}

// Clip the line {(x0 + t dx, y0 + t dy)} to [lo, hi] in one coordinate.
bool clip(double x0, double dx, double lo, double hi, double& t_lo, double& t_hi) {
  if (std::abs(dx) < 1e-15) return x0 >= lo && x0 <= hi;
  double a = (lo - x0) / dx, b = (hi - x0) / dx;
  if (a > b) std::swap(a, b);
  t_lo = std::max(t_lo, a);
  t_hi = std::min(t_hi, b);
  return t_lo <= t_hi;
}

Sinogram lambda_filter_impl(const Sinogram& phi, int extra, double boundary_tol) {
  phi.validate();
  if (extra < 0) throw std::invalid_argument("lambda_filter: extra must be >= 0");
  const auto& s = phi.spec;
  check_slices_boundary(phi.values.data(), s.n_theta, s.nr, boundary_tol, "lambda_filter");
  SinogramSpec out_spec{s.n_theta, s.nr + 2 * extra, s.r_max + extra * s.dr()};
  Sinogram out = Sinogram::zeros(out_spec);
  const detail::LinearConvolver conv(s.nr, out_spec.nr, -extra, lambda_weight(s.dr()));
  parallel_for(s.n_theta, [&](std::size_t i) {
    conv.apply(phi.values.data() + i * s.nr, out.values.data() + i * out_spec.nr);
  });
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (!(q_min < q_max) || !(p_min < p_max)) throw std::invalid_argument("GridSpec: empty rectangle");
  if (nq < 2 || np < 2) throw std::invalid_argument("GridSpec: need at least 2 points per axis");
}

PhaseField PhaseField::zeros(const GridSpec& grid) {
  grid.validate();
  return PhaseField{grid, std::vector<cplx>(static_cast<std::size_t>(grid.nq) * grid.np)};
}

PhaseField PhaseField::sample(const GridSpec& grid, const std::function<cplx(double, double)>& f) {
  PhaseField out = zeros(grid);
  parallel_for(grid.nq, [&](std::size_t i) {
    const double q = grid.q(static_cast<int>(i));
    for (int j = 0; j < grid.np; ++j) out.at(static_cast<int>(i), j) = f(q, grid.p(j));
  });
  return out;
}

void PhaseField::validate() const {
  grid.validate();
  if (values.size() != static_cast<std::size_t>(grid.nq) * grid.np) {
    throw std::invalid_argument("PhaseField: values size does not match nq*np");
  }
}

double SinogramSpec::dtheta() const { return 2.0 * kPi / n_theta; }
double SinogramSpec::theta(int i) const { return 2.0 * kPi * i / n_theta; }

void SinogramSpec::validate() const {
  if (n_theta < 1) throw std::invalid_argument("SinogramSpec: n_theta must be positive");
  if (nr < 2) throw std::invalid_argument("SinogramSpec: nr must be >= 2");
  if (!(r_max > 0.0)) throw std::invalid_argument("SinogramSpec: r_max must be positive");
}

Sinogram Sinogram::zeros(const SinogramSpec& spec) {
  spec.validate();
  return Sinogram{spec, std::vector<cplx>(static_cast<std::size_t>(spec.n_theta) * spec.nr)};
}

Sinogram Sinogram::sample(const SinogramSpec& spec, const std::function<cplx(double, double)>& f) {
  Sinogram out = zeros(spec);
  parallel_for(spec.n_theta, [&](std::size_t i) {
    const double th = spec.theta(static_cast<int>(i));
    for (int j = 0; j < spec.nr; ++j) out.at(static_cast<int>(i), j) = f(th, spec.r(j));
  });
  return out;
}

void Sinogram::validate() const {
  spec.validate();
  if (values.size() != static_cast<std::size_t>(spec.n_theta) * spec.nr) {
    throw std::invalid_argument("Sinogram: values size does not match n_theta*nr");
  }
}

Profile Profile::sample(double r_max, int nr, const std::function<cplx(double)>& f) {
  Profile out{r_max, nr, std::vector<cplx>(nr)};
  out.validate();
  for (int j = 0; j < nr; ++j) out.values[j] = f(out.r(j));
  return out;
}

void Profile::validate() const {
  if (nr < 2 || !(r_max > 0.0)) throw std::invalid_argument("Profile: need nr >= 2 and r_max > 0");
  if (values.size() != static_cast<std::size_t>(nr)) throw std::invalid_argument("Profile: values size != nr");
}

cplx interpolate(const PhaseField& f, double q, double p, Interpolation method) {
  return interpolate_index(f, (q - f.grid.q_min) / f.grid.dq(), (p - f.grid.p_min) / f.grid.dp(), method);
}

Sinogram radon(const PhaseField& f, const SinogramSpec& out_spec, const RadonOptions& opts) {
  f.validate();
  check_field_boundary(f, opts.boundary_tol, "radon");
  Sinogram out = Sinogram::zeros(out_spec);
  const auto& g = f.grid;
  const double dq = g.dq(), dp = g.dp();
  const double h = std::min(dq, dp);
  const int n_theta = out_spec.n_theta;
  // R f(theta + pi, r) = R f(theta, -r) on the symmetric r lattice.
  const bool mirror = n_theta % 2 == 0;
  const int rows = mirror ? n_theta / 2 : n_theta;
  parallel_for(rows, [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double th = out_spec.theta(i);
    const double c = std::cos(th), s = std::sin(th);
    for (int j = 0; j < out_spec.nr; ++j) {
      const double r = out_spec.r(j);
      const double x0 = r * c, y0 = r * s;
      double t_lo = -1e300, t_hi = 1e300;
      if (!clip(x0, -s, g.q_min, g.q_max, t_lo, t_hi) || !clip(y0, c, g.p_min, g.p_max, t_lo, t_hi)) continue;
      const long k_lo = static_cast<long>(std::ceil(t_lo / h));
      const long k_hi = static_cast<long>(std::floor(t_hi / h));
      cplx acc{0.0, 0.0};
      for (long k = k_lo; k <= k_hi; ++k) {
        const double t = k * h;
        acc += interpolate_index(f, (x0 - t * s - g.q_min) / dq, (y0 + t * c - g.p_min) / dp, opts.interpolation);
      }
      out.at(i, j) = acc * h;
    }
  });
  if (mirror) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < out_spec.nr; ++j) out.at(i + rows, j) = out.at(i, out_spec.nr - 1 - j);
    }
  }
  return out;
}

PhaseField backprojection(const Sinogram& phi, const GridSpec& out_grid, Interpolation method) {
  phi.validate();
  PhaseField out = PhaseField::zeros(out_grid);
  const auto& s = phi.spec;
  std::vector<double> cs(s.n_theta), sn(s.n_theta);
  for (int i = 0; i < s.n_theta; ++i) {
    cs[i] = std::cos(s.theta(i));
    sn[i] = std::sin(s.theta(i));
  }
  const double dr = s.dr();
  const bool cubic = method == Interpolation::bicubic && s.nr >= 4;
  parallel_for(out_grid.nq, [&](std::size_t ii) {
    const int iq = static_cast<int>(ii);
    const double x = out_grid.q(iq);
    for (int jp = 0; jp < out_grid.np; ++jp) {
      const double y = out_grid.p(jp);
      cplx acc{0.0, 0.0};
      for (int i = 0; i < s.n_theta; ++i) {
        const double pos = (x * cs[i] + y * sn[i] + s.r_max) / dr;
        if (pos < 0.0 || pos > s.nr - 1) continue;
        const int j0 = std::min(static_cast<int>(pos), s.nr - 2);
        const double u = pos - j0;
        if (!cubic) {
          acc += (1.0 - u) * phi.at(i, j0) + u * phi.at(i, j0 + 1);
          continue;
        }
        double w[4];
        cubic_weights(u, w);
        for (int b = 0; b < 4; ++b) {
          const int j = j0 - 1 + b;
          if (j >= 0 && j < s.nr) acc += w[b] * phi.at(i, j);
        }
      }
      out.at(iq, jp) = acc / static_cast<double>(s.n_theta);
    }
  });
  return out;
}

Profile hilbert(const Profile& psi, double boundary_tol) {
  psi.validate();
  check_slices_boundary(psi.values.data(), 1, psi.nr, boundary_tol, "hilbert");
  Profile out{psi.r_max, psi.nr, std::vector<cplx>(psi.nr)};
  const detail::LinearConvolver conv(psi.nr, psi.nr, 0, hilbert_weight);
  conv.apply(psi.values.data(), out.values.data());
  return out;
}

Sinogram lambda_filter(const Sinogram& phi, double boundary_tol) { return lambda_filter_impl(phi, 0, boundary_tol); }

Sinogram lambda_filter_extended(const Sinogram& phi, int extra, double boundary_tol) {
  return lambda_filter_impl(phi, extra, boundary_tol);
}

PhaseField radon_inverse(const Sinogram& phi, const GridSpec& out_grid, double boundary_tol,
                         Interpolation method) {
  phi.validate();
  out_grid.validate();
  double rho = 0.0;
  for (double q : {out_grid.q_min, out_grid.q_max}) {
    for (double p : {out_grid.p_min, out_grid.p_max}) rho = std::max(rho, std::hypot(q, p));
  }
  const double dr = phi.spec.dr();
  const int extra = std::max(0, static_cast<int>(std::ceil((rho - phi.spec.r_max) / dr))) + 2;
  const Sinogram filtered = lambda_filter_impl(phi, extra, boundary_tol);
  PhaseField out = backprojection(filtered, out_grid, method);
  for (auto& v : out.values) v /= 2.0 * kPi;
  return out;
}

PhaseField convolve2d(const PhaseField& f, const PhaseField& g, double boundary_tol) {
  f.validate();
  g.validate();
  const auto& a = f.grid;
  const auto& b = g.grid;
  if (a.nq != b.nq || a.np != b.np || a.q_min != b.q_min || a.q_max != b.q_max || a.p_min != b.p_min ||
      a.p_max != b.p_max) {
    throw std::invalid_argument("convolve2d: grids differ");
  }
  const double oq_real = -a.q_min / a.dq(), op_real = -a.p_min / a.dp();
  const long oq = std::lround(oq_real), op = std::lround(op_real);
  if (std::abs(oq_real - oq) > 1e-6 || std::abs(op_real - op) > 1e-6) {
    throw std::invalid_argument("convolve2d: the grid lattice must contain the origin");
  }
  check_field_boundary(f, boundary_tol, "convolve2d");
  check_field_boundary(g, boundary_tol, "convolve2d");

  const int nq = a.nq, np = a.np;
  const int P0 = detail::good_fft_size(2 * nq - 1), P1 = detail::good_fft_size(2 * np - 1);
  std::vector<cplx> F(static_cast<std::size_t>(P0) * P1), G(F.size());
  for (int i = 0; i < nq; ++i) {
    for (int j = 0; j < np; ++j) {
      F[static_cast<std::size_t>(i) * P1 + j] = f.at(i, j);
      G[static_cast<std::size_t>(i) * P1 + j] = g.at(i, j);
    }
  }
  detail::fft_2d(F.data(), P0, P1, false);
  detail::fft_2d(G.data(), P0, P1, false);
  for (std::size_t k = 0; k < F.size(); ++k) F[k] *= G[k];
  detail::fft_2d(F.data(), P0, P1, true);

  const double scale = a.dq() * a.dp() / (static_cast<double>(P0) * P1);
  PhaseField out = PhaseField::zeros(a);
  for (int i = 0; i < nq; ++i) {
    const long k = i + oq;
    if (k < 0 || k > 2L * nq - 2) continue;
    for (int j = 0; j < np; ++j) {
      const long l = j + op;
      if (l < 0 || l > 2L * np - 2) continue;
      out.at(i, j) = F[static_cast<std::size_t>(k) * P1 + l] * scale;
    }
  }
  return out;
}

PlancherelPair plancherel_pair(const PhaseField& f, const PhaseField& g, const SinogramSpec& sino,
                               const RadonOptions& opts) {
  f.validate();
  g.validate();
  if (f.values.size() != g.values.size()) throw std::invalid_argument("plancherel_pair: grids differ");
  const Sinogram rf = radon(f, sino, opts);
  const Sinogram lrg = lambda_filter(radon(g, sino, opts));
  cplx via{0.0, 0.0};
  for (std::size_t k = 0; k < rf.values.size(); ++k) via += std::conj(rf.values[k]) * lrg.values[k];
  via *= sino.dtheta() * sino.dr() / (4.0 * kPi * kPi);
  cplx direct{0.0, 0.0};
  for (std::size_t k = 0; k < f.values.size(); ++k) direct += std::conj(f.values[k]) * g.values[k];
  direct *= f.grid.dq() * f.grid.dp();
  return {via, direct};
}

}  // namespace tomokernel
