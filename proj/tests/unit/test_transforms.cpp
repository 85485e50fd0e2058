#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "tomokernel/errors.hpp"
#include "tomokernel/transforms.hpp"

using namespace tomokernel;
using oracle::kPi;

namespace {

PhaseField gaussian(const GridSpec& g, double cq, double cp, double alpha) {
  return PhaseField::sample(g, [=](double q, double p) {
    return cplx(std::exp(-((q - cq) * (q - cq) + (p - cp) * (p - cp)) / alpha), 0.0);
  });
}

double gaussian_line(double cq, double cp, double alpha, double theta, double r) {
  const double s = r - cq * std::cos(theta) - cp * std::sin(theta);
  return std::sqrt(kPi * alpha) * std::exp(-s * s / alpha);
}

double h0_squared(double r) { return std::exp(-r * r) / std::sqrt(kPi); }

}  // namespace

TEST_CASE("lattice conventions") {
  const SinogramSpec s;
  CHECK(s.theta(0) == 0.0);
  CHECK(s.theta(64) == doctest::Approx(kPi / 2));
  CHECK(s.r(0) == -8.0);
  CHECK(s.r(s.nr - 1) == doctest::Approx(8.0));
  GridSpec g;
  g.nq = 1;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("radon of an off-centre gaussian") {
  const GridSpec g{-8, 8, 161, -8, 8, 161};
  const SinogramSpec s{32, 257, 8.0};
  const PhaseField f = gaussian(g, 0.7, -0.4, 1.3);
  double e_cubic = 0.0, e_linear = 0.0;
  const Sinogram cubic = radon(f, s);
  const Sinogram linear = radon(f, s, {Interpolation::bilinear});
  for (int i = 0; i < s.n_theta; ++i)
    for (int j = 0; j < s.nr; ++j) {
      const double expect = gaussian_line(0.7, -0.4, 1.3, s.theta(i), s.r(j));
      e_cubic = std::max(e_cubic, std::abs(cubic.at(i, j) - expect));
      e_linear = std::max(e_linear, std::abs(linear.at(i, j) - expect));
    }
  CHECK(e_cubic <= 5e-5);
  CHECK(e_linear <= 1e-2);
  CHECK(50.0 * e_cubic < e_linear);
}

TEST_CASE("radon refuses fields that do not decay at the boundary") {
  const GridSpec g{-2, 2, 65, -2, 2, 65};
  CHECK_THROWS_AS(radon(gaussian(g, 0, 0, 1.0), SinogramSpec{8, 65, 2.0}), BoundaryLeak);
}

TEST_CASE("hilbert of h_0^2 is (2/pi) daw") {
  const Profile psi = Profile::sample(40.0, 1 << 14, [](double r) { return cplx(h0_squared(r), 0.0); });
  const Profile h = hilbert(psi);
  double e = 0.0;
  for (int j = 0; j < psi.nr; ++j)
    if (std::abs(psi.r(j)) <= 5.0) e = std::max(e, std::abs(h.values[j].real() - 2.0 / kPi * oracle::dawson(psi.r(j))));
  CHECK(e <= 1e-6);
}

TEST_CASE("hilbert is shift invariant") {
  const int nr = 2049;
  const Profile base = Profile::sample(16.0, nr, [](double r) { return cplx(h0_squared(r), 0.0); });
  const Profile hb = hilbert(base);
  for (int a = -2; a <= 2; ++a) {
    const Profile hs = hilbert(Profile::sample(16.0, nr, [a](double r) { return cplx(h0_squared(r - a), 0.0); }));
    const int off = static_cast<int>(std::lround(a / base.dr()));
    double e = 0.0;
    for (int j = 0; j < nr; ++j)
      if (std::abs(base.r(j)) <= 10.0) e = std::max(e, std::abs(hs.values[j] - hb.values[j - off]));
    CHECK(e <= 1e-6);
  }
}

TEST_CASE("hilbert commutes with derivation") {
  const int nr = 4096;
  const double R = 20.0;
  const Profile psi = Profile::sample(R, nr, [](double r) { return cplx(h0_squared(r), 0.0); });
  const Profile dpsi = Profile::sample(R, nr, [](double r) { return cplx(-2.0 * r * h0_squared(r), 0.0); });
  const Profile h = hilbert(psi);
  const Profile hd = hilbert(dpsi);
  const double step = psi.dr();
  double e = 0.0;
  for (int j = 4; j < nr - 4; ++j) {
    if (std::abs(psi.r(j)) > 6.0) continue;
    // eighth-order central difference of H psi
    const auto v = [&](int k) { return h.values[j + k].real(); };
    const double d = (4.0 / 5 * (v(1) - v(-1)) - 1.0 / 5 * (v(2) - v(-2)) + 4.0 / 105 * (v(3) - v(-3)) -
                      1.0 / 280 * (v(4) - v(-4))) /
                     step;
    e = std::max(e, std::abs(hd.values[j].real() - d));
  }
  CHECK(e <= 1e-5);
}

TEST_CASE("hilbert of an indicator") {
  const Profile psi = Profile::sample(8.0, 16385, [](double r) {
    if (std::abs(r) < 1e-12 || std::abs(r - 1.0) < 1e-12) return cplx(0.5, 0.0);
    return cplx(r > 0.0 && r < 1.0 ? 1.0 : 0.0, 0.0);
  });
  const Profile h = hilbert(psi);
  double e = 0.0;
  for (int j = 0; j < psi.nr; ++j) {
    const double r = psi.r(j);
    if (std::abs(r) > 5.0 || std::abs(r) < 0.1 || std::abs(r - 1.0) < 0.1) continue;
    e = std::max(e, std::abs(h.values[j].real() - std::log(std::abs(r / (r - 1.0))) / kPi));
  }
  CHECK(e <= 1e-3);
}

TEST_CASE("lambda equals pi d/dr of the hilbert transform") {
  const SinogramSpec s{4, 2049, 16.0};
  const Sinogram phi = Sinogram::sample(s, [](double th, double r) { return cplx(h0_squared(r - 0.5 * std::cos(th)), 0.0); });
  const Sinogram lam = lambda_filter(phi);
  double e = 0.0;
  for (int i = 0; i < s.n_theta; ++i)
    for (int j = 0; j < s.nr; ++j) {
      const double u = s.r(j) - 0.5 * std::cos(s.theta(i));
      if (std::abs(s.r(j)) > 6.0) continue;
      e = std::max(e, std::abs(lam.at(i, j).real() - oracle::y_function(u)));
    }
  CHECK(e <= 1e-8);
}

TEST_CASE("lambda filtered slices integrate to zero") {
  const SinogramSpec s{6, 1025, 8.0};
  const Sinogram phi = Sinogram::sample(s, [](double th, double r) {
    const double w = 1.2 + 0.2 * std::sin(th);
    return cplx(std::exp(-w * w * r * r), 0.0);
  });
  const int extra = 4096;
  const Sinogram lam = lambda_filter_extended(phi, extra);
  REQUIRE(lam.spec.nr == s.nr + 2 * extra);
  const double h = s.dr();
  const double R = lam.spec.r_max;
  const int quarter = (lam.spec.nr - 1) / 4;
  const double R2 = R - quarter * h;
  // tail of c / r^2 + d / r^4 through the values at R and R2
  const auto tail = [&](double f1, double f2) {
    const double a1 = R * R * f1, a2 = R2 * R2 * f2;
    const double d = (a1 - a2) / (1 / (R * R) - 1 / (R2 * R2));
    return (a1 - d / (R * R)) / R + d / (3 * R * R * R);
  };
  for (int i = 0; i < s.n_theta; ++i) {
    double sum = 0.0;
    for (int j = 0; j < lam.spec.nr; ++j) sum += lam.at(i, j).real();
    sum -= 0.5 * (lam.at(i, 0).real() + lam.at(i, lam.spec.nr - 1).real());
    sum *= h;
    sum += tail(lam.at(i, 0).real(), lam.at(i, quarter).real());
    sum += tail(lam.at(i, lam.spec.nr - 1).real(), lam.at(i, lam.spec.nr - 1 - quarter).real());
    CHECK(std::abs(sum) <= 1e-6);
  }
}

TEST_CASE("filtered backprojection inverts the radon transform") {
  const GridSpec g{-8, 8, 129, -8, 8, 129};
  const PhaseField f = gaussian(g, 0.5, 0.25, 1.0);
  const Sinogram sino = Sinogram::sample(SinogramSpec{128, 513, 8.0}, [](double th, double r) {
    return cplx(gaussian_line(0.5, 0.25, 1.0, th, r), 0.0);
  });
  const PhaseField back = radon_inverse(sino, g);
  double e = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) e = std::max(e, std::abs(back.values[k] - f.values[k]));
  CHECK(e <= 1e-4);
}

TEST_CASE("backprojection is the adjoint of radon") {
  const GridSpec g{-8, 8, 129, -8, 8, 129};
  const SinogramSpec s{96, 257, 8.0};
  const PhaseField f = gaussian(g, -0.3, 0.6, 1.1);
  const Sinogram phi = Sinogram::sample(s, [](double th, double r) {
    const double d = r + 0.4 * std::sin(th);
    return cplx(std::exp(-d * d) * (1.0 + 0.3 * std::cos(th)), 0.0);
  });
  const Sinogram rf = radon(f, s);
  cplx lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < phi.values.size(); ++k) lhs += std::conj(rf.values[k]) * phi.values[k];
  lhs *= s.dtheta() * s.dr() / (2 * kPi);
  const PhaseField b = backprojection(phi, g);
  for (std::size_t k = 0; k < f.values.size(); ++k) rhs += std::conj(f.values[k]) * b.values[k];
  rhs *= g.dq() * g.dp();
  CHECK(std::abs(lhs - rhs) <= 1e-4 * std::abs(rhs));
}

TEST_CASE("convolution") {
  const GridSpec g{-8, 8, 129, -8, 8, 129};
  const PhaseField f = gaussian(g, 0.5, 0.0, 0.8);
  const PhaseField u = gaussian(g, 0.0, -1.0, 1.4);
  const PhaseField fu = convolve2d(f, u);
  const PhaseField uf = convolve2d(u, f);
  double e_comm = 0.0, e_exact = 0.0;
  const double amp = kPi * 0.8 * 1.4 / (0.8 + 1.4);
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j) {
      e_comm = std::max(e_comm, std::abs(fu.at(i, j) - uf.at(i, j)));
      const double dq = g.q(i) - 0.5, dp = g.p(j) + 1.0;
      e_exact = std::max(e_exact, std::abs(fu.at(i, j) - amp * std::exp(-(dq * dq + dp * dp) / 2.2)));
    }
  CHECK(e_comm <= 1e-12);
  CHECK(e_exact <= 1e-10);

  SUBCASE("convolution theorem") {
    const SinogramSpec s{16, 257, 8.0};
    const Sinogram lhs = radon(fu, s, RadonOptions{Interpolation::bicubic, 1e-8});
    double e = 0.0;
    for (int i = 0; i < s.n_theta; ++i)
      for (int j = 0; j < s.nr; ++j) {
        const double th = s.theta(i), r = s.r(j);
        const double conv = oracle::integrate(
            [&](double t) { return gaussian_line(0.5, 0.0, 0.8, th, r - t) * gaussian_line(0.0, -1.0, 1.4, th, t); },
            -12.0, 12.0, 48);
        e = std::max(e, std::abs(lhs.at(i, j).real() - conv));
      }
    CHECK(e <= 1e-4 * amp * std::sqrt(kPi * 2.2));
  }

  SUBCASE("grids without the origin are rejected") {
    const GridSpec off{-8, 8, 128, -8, 8, 128};
    CHECK_THROWS_AS(convolve2d(gaussian(off, 0, 0, 1), gaussian(off, 0, 0, 1)), std::invalid_argument);
  }
}

TEST_CASE("plancherel pairing") {
  const GridSpec g{-8, 8, 129, -8, 8, 129};
  const PhaseField f = gaussian(g, 0.2, 0.1, 1.0);
  const PhaseField u = gaussian(g, -0.5, 0.4, 0.7);
  const PlancherelPair pair = plancherel_pair(f, u, SinogramSpec{128, 513, 8.0});
  const double exact = kPi * 0.7 / 1.7 * std::exp(-(0.49 + 0.09) / 1.7);
  CHECK(pair.direct.real() == doctest::Approx(exact).epsilon(1e-10));
  CHECK(std::abs(pair.via_radon - pair.direct) <= 1e-4 * exact);
}

TEST_CASE("bicubic interpolation is exact on cubics") {
  const GridSpec g{-4, 4, 33, -4, 4, 33};
  const auto poly = [](double q, double p) { return 0.3 * q * q * q - q * p * p + 2.0 * p - 1.0; };
  const PhaseField f = PhaseField::sample(g, [&](double q, double p) { return cplx(poly(q, p), 0.0); });
  for (auto [q, p] : {std::pair{0.13, -0.71}, std::pair{1.9, 2.2}, std::pair{-2.05, 0.5}})
    CHECK(interpolate(f, q, p).real() == doctest::Approx(poly(q, p)).epsilon(1e-12));
  CHECK(interpolate(f, 10.0, 0.0) == cplx(0.0, 0.0));
}
