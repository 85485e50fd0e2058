#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace tomokernel {

using cplx = std::complex<double>;

// Uniform (q, p) lattice, endpoints included.
struct GridSpec {
  double q_min = -8.0;
  double q_max = 8.0;
  int nq = 256;
  double p_min = -8.0;
  double p_max = 8.0;
  int np = 256;

  double dq() const { return (q_max - q_min) / (nq - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  double q(int i) const { return q_min + i * dq(); }
  double p(int j) const { return p_min + j * dp(); }
  void validate() const;
};

// Samples of a function on the phase plane, row-major in q: values[i*np + j].
struct PhaseField {
  GridSpec grid;
  std::vector<cplx> values;

  static PhaseField zeros(const GridSpec& grid);
  static PhaseField sample(const GridSpec& grid, const std::function<cplx(double, double)>& f);

  cplx& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.np + j]; }
  const cplx& at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.np + j]; }
  void validate() const;
};

// theta_i = 2 pi i / n_theta, r_j = -r_max + j * 2 r_max / (nr - 1).
struct SinogramSpec {
  int n_theta = 256;
  int nr = 1024;
  double r_max = 8.0;

  double dtheta() const;
  double dr() const { return 2.0 * r_max / (nr - 1); }
  double theta(int i) const;
  double r(int j) const { return -r_max + j * dr(); }
  void validate() const;
};

struct Sinogram {
  SinogramSpec spec;
  std::vector<cplx> values;

  static Sinogram zeros(const SinogramSpec& spec);
  static Sinogram sample(const SinogramSpec& spec, const std::function<cplx(double, double)>& f);

  cplx& at(int i, int j) { return values[static_cast<std::size_t>(i) * spec.nr + j]; }
  const cplx& at(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.nr + j]; }
  void validate() const;
};

// One slice on the symmetric lattice r_j = -r_max + j * 2 r_max / (nr - 1).
struct Profile {
  double r_max = 8.0;
  int nr = 1024;
  std::vector<cplx> values;

  double dr() const { return 2.0 * r_max / (nr - 1); }
  double r(int j) const { return -r_max + j * dr(); }
  static Profile sample(double r_max, int nr, const std::function<cplx(double)>& f);
  void validate() const;
};

enum class Interpolation { bilinear, bicubic };

struct RadonOptions {
  Interpolation interpolation = Interpolation::bicubic;
  // Largest boundary-ring magnitude allowed, relative to max |f|.
  double boundary_tol = 1e-10;
};

// Line integrals (Rf)(theta, r) = \int f(r cos - t sin, r sin + t cos) dt.
Sinogram radon(const PhaseField& f, const SinogramSpec& out, const RadonOptions& opts = {});

// (R* phi)(x, y) = (2 pi)^{-1} \int phi(theta, x cos + y sin) dtheta.
// bicubic selects 4-point Lagrange interpolation in r, bilinear linear.
PhaseField backprojection(const Sinogram& phi, const GridSpec& out,
                          Interpolation method = Interpolation::bicubic);

// Principal-value Hilbert transform (1/pi) PV \int psi(y) / (r - y) dy.
// Slices must fall below boundary_tol (relative) at both ends.
Profile hilbert(const Profile& psi, double boundary_tol = 1e-8);

// Lambda = pi d/dr H applied per theta slice.
Sinogram lambda_filter(const Sinogram& phi, double boundary_tol = 1e-8);

// Lambda evaluated on the input lattice extended by `extra` points on each
// side; the filtered slices have a slowly decaying 1/r^2 tail.
Sinogram lambda_filter_extended(const Sinogram& phi, int extra, double boundary_tol = 1e-8);

// Filtered backprojection f = (2 pi)^{-1} R* Lambda phi.
PhaseField radon_inverse(const Sinogram& phi, const GridSpec& out, double boundary_tol = 1e-8,
                         Interpolation method = Interpolation::bicubic);

// (f * g)(x, y) = \iint f(x - t, y - u) g(t, u) dt du on a shared grid whose
// lattice contains the origin.
PhaseField convolve2d(const PhaseField& f, const PhaseField& g, double boundary_tol = 1e-10);

struct PlancherelPair {
  cplx via_radon;  // (4 pi^2)^{-1} \iint conj(Rf) Lambda R g dtheta dr
  cplx direct;     // \iint conj(f) g dq dp
};

PlancherelPair plancherel_pair(const PhaseField& f, const PhaseField& g, const SinogramSpec& sino = {},
                               const RadonOptions& opts = {});

// Phase-field value at an arbitrary point, zero outside the grid.
cplx interpolate(const PhaseField& f, double q, double p, Interpolation method = Interpolation::bicubic);

}  // namespace tomokernel
