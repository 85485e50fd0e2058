#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tomokernel/errors.hpp"
#include "tomokernel/quantum_states.hpp"

using namespace tomokernel;
using oracle::kPi;

TEST_CASE("state construction and validation") {
  const FockOperator cat = cat_state();
  CHECK(cat.dim() == 2);
  CHECK(std::abs(cat(0, 1) - 0.5) <= 1e-15);
  CHECK_NOTHROW(cat.validate_state());
  CHECK(cat_state(5).dim() == 5);
  CHECK_THROWS_AS(fock_projector(3, 0, 3), IndexOutOfRange);
  CHECK_THROWS_AS(fock_projector(-1, 0, 3), IndexOutOfRange);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 0.3;
  CHECK_THROWS_AS(FockOperator(m).validate_state(), InvalidState);
  m(0, 1) = 0.0;
  m(1, 1) = 0.5;
  CHECK_THROWS_AS(FockOperator(m).validate_state(), InvalidState);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(FockOperator(m).validate_state(), InvalidState);
  try {
    FockOperator(m).validate_state();
  } catch (const InvalidState& e) {
    CHECK(std::string(e.what()).find("eigen") != std::string::npos);
  }
}

TEST_CASE("tail weight") {
  const FockOperator T = fock_projector(9, 9, 10);
  CHECK(T.tail_weight() == doctest::Approx(1.0));
  CHECK_THROWS_AS(T.validate_tail(1e-10), InvalidState);
  CHECK(fock_projector(0, 0, 10).tail_weight() == 0.0);
  CHECK(T.resized(12)(9, 9) == cplx(1.0, 0.0));
}

TEST_CASE("cahill-glauber kernels") {
  const auto p = CahillGlauberParam::from_s(-0.5);
  CHECK(p.lambda == doctest::Approx(-1.0 / 3.0));
  CHECK(p.s() == doctest::Approx(-0.5));
  const int d = cahill_glauber_dim(CahillGlauberParam{1.0 / 3.0}, 1e-12);
  const FockOperator K = cahill_glauber_kernel(CahillGlauberParam{1.0 / 3.0}, d, 1e-12);
  CHECK(K(1, 1).real() == doctest::Approx(2.0 / 9.0));
  CHECK(std::abs(K.trace() - 1.0) <= 1e-12);
  CHECK_THROWS_AS(cahill_glauber_kernel(CahillGlauberParam{1.0 / 3.0}, d - 1, 1e-12), TruncationLoss);
  CHECK_THROWS_AS(CahillGlauberParam{1.0}.validate(), std::invalid_argument);
  CHECK(cahill_glauber_kernel(CahillGlauberParam{0.0}, 1)(0, 0) == cplx(1.0, 0.0));
}

TEST_CASE("displacement matrix elements") {
  for (auto [q, p] : {std::pair{1.0, 0.0}, std::pair{-0.6, 1.3}, std::pair{2.0, 2.0}}) {
    const double a = q * q + p * p;
    CHECK(std::abs(displaced_matrix_element(0, 0, q, p)) == doctest::Approx(std::exp(-a / 4)).epsilon(1e-12));
    // |<1|D|0>|^2 = (a / 2) e^{-a / 2}
    CHECK(std::norm(displaced_matrix_element(1, 0, q, p)) == doctest::Approx(a / 2 * std::exp(-a / 2)).epsilon(1e-12));
  }
  const Eigen::MatrixXcd D = displacement_block(12, 12, 0.4, -0.3);
  const Eigen::MatrixXcd DD = D.block(0, 0, 5, 12) * D.block(0, 0, 5, 12).adjoint();
  CHECK((DD - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("wigner functions") {
  const GridSpec g{-6, 6, 49, -6, 6, 49};
  const PhaseField w0 = wigner(fock_projector(0, 0, 1), g);
  const PhaseField w1 = wigner(fock_projector(1, 1, 2), g);
  double e0 = 0.0, e1 = 0.0, im = 0.0;
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j) {
      const double a = g.q(i) * g.q(i) + g.p(j) * g.p(j);
      e0 = std::max(e0, std::abs(w0.at(i, j).real() - std::exp(-a) / kPi));
      e1 = std::max(e1, std::abs(w1.at(i, j).real() - (2 * a - 1) * std::exp(-a) / kPi));
      im = std::max({im, std::abs(w0.at(i, j).imag()), std::abs(w1.at(i, j).imag())});
    }
  CHECK(e0 <= 1e-12);
  CHECK(e1 <= 1e-12);
  CHECK(im <= 1e-10);
  CHECK(w0.at(24, 24).real() == doctest::Approx(1.0 / kPi));
  const cplx c = wigner_point(cat_state(), 0.3, -0.2);
  CHECK(std::abs(c.imag()) <= 1e-10);
  // cat: (|0>+|1>)/sqrt2 gives W = W_00/2 + W_11/2 + Re W_01
  const double a = 0.09 + 0.04;
  const double expect = (std::exp(-a) + (2 * a - 1) * std::exp(-a)) / (2 * kPi) + std::sqrt(2.0) * 0.3 * std::exp(-a) / kPi;
  CHECK(c.real() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("tomographic densities") {
  const FockOperator cat = cat_state();
  for (double th : {0.0, 0.7, 2.9})
    for (double r : {-1.0, 0.2, 1.5}) {
      const cplx ph = std::polar(1.0, (1 - 0) * th);
      const cplx base = tomographic_density(fock_projector(0, 1, 2), 0.0, r);
      CHECK(std::abs(tomographic_density(fock_projector(0, 1, 2), th, r) - ph * base) <= 1e-15);
      CHECK(std::abs(tomographic_density(cat, th, r).imag()) <= 1e-15);
    }
  const SinogramSpec s{16, 513, 8.0};
  const Sinogram p = tomographic_sinogram(cat, s);
  for (int i = 0; i < s.n_theta; ++i) {
    cplx sum = 0.0;
    for (int j = 0; j < s.nr; ++j) sum += p.at(i, j);
    CHECK(std::abs(sum * s.dr() - 1.0) <= 1e-8);
  }
}

TEST_CASE("covariant phase space densities") {
  const FockOperator vac = fock_projector(0, 0, 1);
  const FockOperator cat = cat_state();
  const FockOperator one = fock_projector(1, 1, 2);
  CHECK(direct_phase_density(vac, vac, 1.0, -0.5).real() == doctest::Approx(std::exp(-1.25 / 2)).epsilon(1e-12));
  CHECK(direct_phase_density(cat, vac, 0.0, 0.0).real() == doctest::Approx(0.5).epsilon(1e-12));
  const cplx x = direct_phase_density(cat, one, 0.7, -0.3);
  CHECK(x.real() >= -1e-10);
  CHECK(std::abs(x - direct_phase_density(one, cat, -0.7, 0.3)) <= 1e-12);

  SUBCASE("grid form matches pointwise evaluation") {
    const GridSpec g{-3, 3, 7, -3, 3, 5};
    const PhaseField F = direct_phase_density_grid(cat, one, g);
    for (int i = 0; i < g.nq; ++i)
      for (int j = 0; j < g.np; ++j) CHECK(std::abs(F.at(i, j) - direct_phase_density(cat, one, g.q(i), g.p(j))) <= 1e-12);
  }

  SUBCASE("convolution identity with the reflected kernel wigner function") {
    const GridSpec g{-8, 8, 257, -8, 8, 257};
    const PhaseField wt = wigner(cat, g);
    PhaseField wk = wigner(one, g);
    PhaseField reflected = wk;
    for (int i = 0; i < g.nq; ++i)
      for (int j = 0; j < g.np; ++j) reflected.at(i, j) = wk.at(g.nq - 1 - i, g.np - 1 - j);
    const PhaseField conv = convolve2d(wt, reflected);
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) {
        const int i = 128 + 8 * a, j = 128 + 8 * b;
        const cplx direct = direct_phase_density(cat, one, g.q(i), g.p(j));
        CHECK(std::abs(2 * kPi * conv.at(i, j) - direct) <= 1e-4 * std::max(std::abs(direct), 1e-3));
      }
  }
}
