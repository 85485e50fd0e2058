#include "tomokernel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "tomokernel/errors.hpp"
#include "tomokernel/markov_kernels.hpp"
#include "tomokernel/quadrature.hpp"
#include "tomokernel/quantum_states.hpp"
#include "tomokernel/reconstruction.hpp"
#include "tomokernel/special_functions.hpp"
#include "tomokernel/transforms.hpp"

namespace tomokernel {
namespace {

constexpr double kPi = std::numbers::pi;

class Recorder {
 public:
  Recorder(std::string suite, std::vector<CheckResult>& out) : suite_(std::move(suite)), out_(out) {}

  // Runs `measure` and records its error; an exception counts as a failure.
  void check(const std::string& name, double tol, const std::function<double()>& measure) {
    double err = std::numeric_limits<double>::infinity();
    try {
      err = measure();
    } catch (const std::exception&) {
    }
    out_.push_back({suite_, name, err, tol, err <= tol});
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
};

Profile signed_hilbert(const Profile& psi, const VerifyOptions& opts) {
  Profile h = hilbert(psi);
  for (auto& v : h.values) v *= opts.hilbert_sign;
  return h;
}

double gaussian_h0_squared(double r) { return std::exp(-r * r) / std::sqrt(kPi); }

double hermite_derivative(int n, const double* h) {
  double d = -std::sqrt((n + 1) / 2.0) * h[n + 1];
  if (n > 0) d += std::sqrt(n / 2.0) * h[n - 1];
  return d;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e;
}

// exp(-|z - c|^2 / alpha)
PhaseField gaussian_field(const GridSpec& g, double cq, double cp, double alpha) {
  return PhaseField::sample(g, [=](double q, double p) {
    return cplx(std::exp(-((q - cq) * (q - cq) + (p - cp) * (p - cp)) / alpha), 0.0);
  });
}

// Radon transform of gaussian_field: sqrt(pi alpha) exp(-(r - c.n)^2 / alpha).
double gaussian_radon(double cq, double cp, double alpha, double theta, double r) {
  const double s = r - cq * std::cos(theta) - cp * std::sin(theta);
  return std::sqrt(kPi * alpha) * std::exp(-s * s / alpha);
}

// \int_{R1}^\infty of c / r^2 + d / r^4 fitted through (R1, f1) and (R2, f2).
double tail_beyond(double R1, double f1, double R2, double f2) {
  const double a1 = R1 * R1 * f1;
  const double a2 = R2 * R2 * f2;
  const double d = (a1 - a2) / (1.0 / (R1 * R1) - 1.0 / (R2 * R2));
  const double c = a1 - d / (R1 * R1);
  return c / R1 + d / (3.0 * R1 * R1 * R1);
}

// Trapezoid integral over a symmetric lattice plus the tails beyond both ends.
double integral_with_tails(const std::vector<cplx>& v, double r_end, double h) {
  double s = 0.0;
  for (const auto& x : v) s += x.real();
  s -= 0.5 * (v.front().real() + v.back().real());
  s *= h;
  const std::size_t quarter = (v.size() - 1) / 4;
  const double r_mid = r_end - h * static_cast<double>(quarter);
  s += tail_beyond(r_end, v.front().real(), r_mid, v[quarter].real());
  s += tail_beyond(r_end, v.back().real(), r_mid, v[v.size() - 1 - quarter].real());
  return s;
}

void transforms_suite(std::vector<CheckResult>& out, const VerifyOptions& opts) {
  Recorder rec("transforms", out);

  rec.check("hilbert_gaussian_dawson", 1e-6, [&] {
    const Profile psi = Profile::sample(40.0, 1 << 14, [](double r) { return cplx(gaussian_h0_squared(r), 0.0); });
    const Profile h = signed_hilbert(psi, opts);
    double e = 0.0;
    for (int j = 0; j < psi.nr; ++j) {
      const double r = psi.r(j);
      if (std::abs(r) > 5.0) continue;
      e = std::max(e, std::abs(h.values[j] - cplx(2.0 / kPi * dawson(r), 0.0)));
    }
    return e;
  });

  rec.check("hilbert_indicator_log", 1e-3, [&] {
    // chi_[0,1] with the midpoint value 1/2 at both jumps, which lie on the lattice.
    const Profile psi = Profile::sample(8.0, 16385, [](double r) {
      if (std::abs(r) < 1e-12 || std::abs(r - 1.0) < 1e-12) return cplx(0.5, 0.0);
      return cplx(r > 0.0 && r < 1.0 ? 1.0 : 0.0, 0.0);
    });
    const Profile h = signed_hilbert(psi, opts);
    double e = 0.0;
    for (int j = 0; j < psi.nr; ++j) {
      const double r = psi.r(j);
      if (std::abs(r) > 5.0 || std::abs(r) < 0.1 || std::abs(r - 1.0) < 0.1) continue;
      e = std::max(e, std::abs(h.values[j].real() - std::log(std::abs(r / (r - 1.0))) / kPi));
    }
    return e;
  });

  rec.check("hilbert_shift_invariance", 1e-6, [&] {
    const double r_max = 16.0;
    const int nr = 4097;
    const Profile base = Profile::sample(r_max, nr, [](double r) { return cplx(gaussian_h0_squared(r), 0.0); });
    const Profile hb = signed_hilbert(base, opts);
    const double h = base.dr();
    double e = 0.0;
    for (int a = -2; a <= 2; ++a) {
      const Profile shifted = Profile::sample(r_max, nr, [a](double r) { return cplx(gaussian_h0_squared(r - a), 0.0); });
      const Profile hs = signed_hilbert(shifted, opts);
      const int offset = static_cast<int>(std::lround(a / h));
      for (int j = 0; j < nr; ++j) {
        if (std::abs(base.r(j)) > 10.0) continue;
        e = std::max(e, std::abs(hs.values[j] - hb.values[j - offset]));
      }
    }
    return e;
  });

  rec.check("hilbert_commutes_with_derivative", 1e-5, [&] {
    const Profile dpsi = Profile::sample(40.0, 1 << 14, [](double r) { return cplx(-2.0 * r * gaussian_h0_squared(r), 0.0); });
    const Profile h = signed_hilbert(dpsi, opts);
    double e = 0.0;
    for (int j = 0; j < dpsi.nr; ++j) {
      const double r = dpsi.r(j);
      if (std::abs(r) > 5.0) continue;
      e = std::max(e, std::abs(h.values[j].real() - 2.0 / kPi * (1.0 - 2.0 * r * dawson(r))));
    }
    return e;
  });

  const GridSpec grid{};
  const SinogramSpec sino{};
  const PhaseField gauss = gaussian_field(grid, 0.0, 0.0, 1.0);
  Sinogram gauss_radon;
  rec.check("radon_gaussian", 1e-4, [&] {
    gauss_radon = radon(gauss, sino);
    double e = 0.0;
    for (int i = 0; i < sino.n_theta; ++i)
      for (int j = 0; j < sino.nr; ++j)
        e = std::max(e, std::abs(gauss_radon.at(i, j) - gaussian_radon(0, 0, 1, sino.theta(i), sino.r(j))));
    return e;
  });

  rec.check("radon_inverse_gaussian", 1e-4, [&] {
    if (gauss_radon.values.empty()) throw std::runtime_error("radon unavailable");
    const PhaseField back = radon_inverse(gauss_radon, grid);
    return max_abs_diff(back.values, gauss.values);
  });

  rec.check("lambda_zero_integral", 1e-6, [&] {
    const SinogramSpec s{8, 1025, 8.0};
    const Sinogram phi = Sinogram::sample(s, [](double theta, double r) {
      const double w = 1.25 + 0.25 * std::cos(theta);
      return cplx(std::exp(-w * w * r * r), 0.0);
    });
    const int extra = 3072;
    const Sinogram lam = lambda_filter_extended(phi, extra);
    const double h = s.dr();
    double e = 0.0;
    for (int i = 0; i < s.n_theta; ++i) {
      const auto first = lam.values.begin() + static_cast<std::ptrdiff_t>(i) * lam.spec.nr;
      const std::vector<cplx> slice(first, first + lam.spec.nr);
      e = std::max(e, std::abs(opts.hilbert_sign * integral_with_tails(slice, s.r_max + extra * h, h)));
    }
    return e;
  });

  rec.check("plancherel_relative", 1e-4, [&] {
    const GridSpec g{-8, 8, 129, -8, 8, 129};
    const PhaseField f = gaussian_field(g, 0.5, -0.3, 1.0);
    const PhaseField u = gaussian_field(g, -0.4, 0.2, 1.5);
    const PlancherelPair pair = plancherel_pair(f, u, SinogramSpec{128, 513, 8.0});
    return std::abs(opts.hilbert_sign * pair.via_radon - pair.direct) / std::abs(pair.direct);
  });

  rec.check("convolution_theorem_relative", 1e-4, [&] {
    const GridSpec g{-8, 8, 257, -8, 8, 257};
    const double a = 0.7, b = 1.2;
    const PhaseField f = gaussian_field(g, 0.5, 0.0, a);
    const PhaseField u = gaussian_field(g, -0.25, 0.5, b);
    const SinogramSpec s{16, 257, 8.0};
    const Sinogram rc = radon(convolve2d(f, u), s);
    double e = 0.0, peak = 0.0;
    for (int i = 0; i < s.n_theta; ++i) {
      const double th = s.theta(i);
      const double c = 0.25 * std::cos(th) + 0.5 * std::sin(th);
      for (int j = 0; j < s.nr; ++j) {
        const double d = s.r(j) - c;
        const double expect = kPi * std::sqrt(a * b) * std::sqrt(kPi * a * b / (a + b)) * std::exp(-d * d / (a + b));
        e = std::max(e, std::abs(rc.at(i, j) - expect));
        peak = std::max(peak, expect);
      }
    }
    return e / peak;
  });

  rec.check("adjointness_relative", 1e-4, [&] {
    const GridSpec g{-8, 8, 257, -8, 8, 257};
    const SinogramSpec s{128, 513, 8.0};
    const PhaseField f = gaussian_field(g, 0.3, -0.2, 1.0);
    const Sinogram phi = Sinogram::sample(s, [](double theta, double r) {
      const double d = r - 0.3 * std::cos(theta);
      return cplx(std::exp(-d * d), 0.0);
    });
    const Sinogram rf = radon(f, s);
    cplx lhs = 0.0;
    for (std::size_t k = 0; k < phi.values.size(); ++k) lhs += std::conj(rf.values[k]) * phi.values[k];
    lhs *= s.dtheta() * s.dr() / (2.0 * kPi);
    const PhaseField back = backprojection(phi, g);
    cplx rhs = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) rhs += std::conj(f.values[k]) * back.values[k];
    rhs *= g.dq() * g.dp();
    return std::abs(lhs - rhs) / std::abs(rhs);
  });
}

void kernels_suite(std::vector<CheckResult>& out, const VerifyOptions& opts) {
  Recorder rec("kernels", out);

  rec.check("orthogonality_max_index_5", 1e-6, [] { return orthogonality_matrix(5).max_deviation(); });

  rec.check("m_base_vs_hilbert_derivative", 1e-4, [&] {
    // pi d/dr H(h_n h_m) = pi H((h_n h_m)') on a lattice through the probe points.
    const double r_max = 20.0;
    const int nr = 6401;
    double e = 0.0;
    for (int m = 0; m <= 3; ++m) {
      for (int n = 0; n <= 3; ++n) {
        const Profile dprod = Profile::sample(r_max, nr, [m, n](double r) {
          double h[6];
          hermite_functions(5, r, h);
          return cplx(hermite_derivative(n, h) * h[m] + h[n] * hermite_derivative(m, h), 0.0);
        });
        const Profile hp = signed_hilbert(dprod, opts);
        for (int k = 0; k <= 40; ++k) {
          const double r = -4.0 + 0.2 * k;
          const int j = static_cast<int>(std::lround((r + r_max) / dprod.dr()));
          e = std::max(e, std::abs(m_base(m, n, dprod.r(j)) - kPi * hp.values[j]));
        }
      }
    }
    return e;
  });

  rec.check("maclaurin_cross_route", 1e-8, [] {
    double e = 0.0;
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n) {
        if ((m + n) % 2 != 0) continue;
        for (int k = 0; k <= 32; ++k) {
          const double r = -4.0 + 0.25 * k;
          e = std::max(e, std::abs(m_base(m, n, r) - m_base_maclaurin(m, n, r)));
        }
      }
    return e;
  });

  rec.check("cat_closed_form", 1e-8, [] {
    const FockOperator cat = cat_state();
    const KernelDensity kd(cat);
    double e = 0.0;
    for (double th : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4})
      for (int k = 0; k <= 80; ++k) {
        const double r = -4.0 + 0.1 * k;
        e = std::max(e, std::abs(kd(0, 0, th, r) - cat_closed_form(th, r)));
      }
    return e;
  });

  rec.check("cat_zero_at_origin", 1e-12, [] {
    const KernelDensity kd(cat_state());
    double e = 0.0;
    for (int i = 0; i < 16; ++i) e = std::max(e, std::abs(kd(0, 0, kPi * i / 16, 0.0)));
    return e;
  });

  for (double lambda : {-1.0 / 3.0, 0.0, 1.0 / 3.0}) {
    const CahillGlauberParam param{lambda};
    const std::string tag = lambda < 0 ? "lambda_m1_3" : (lambda > 0 ? "lambda_p1_3" : "lambda_0");
    const auto make = [param] {
      return KernelDensity(cahill_glauber_kernel(param, cahill_glauber_dim(param, 1e-12), 1e-12));
    };
    rec.check("cahill_glauber_closed_form_" + tag, 1e-7, [&] {
      const KernelDensity kd = make();
      double e = 0.0;
      for (double th : {0.0, 0.9, 2.1})
        for (int k = 0; k <= 80; ++k) {
          const double r = -4.0 + 0.1 * k;
          e = std::max(e, std::abs(kd(0, 0, th, r) - cahill_glauber_closed_form(param, th, r)));
        }
      return e;
    });
    rec.check("cahill_glauber_origin_" + tag, 1e-7, [&] {
      const KernelDensity kd = make();
      return std::abs(kd(0, 0, 0, 0) - cplx(-2.0 / param.s(), 0.0));
    });
    rec.check("cahill_glauber_zero_integral_" + tag, 1e-6, [&] {
      // M decays like c / r^2 + d / r^4 beyond the window.
      const KernelDensity kd = make();
      const double R = 200.0;
      const QuadratureRule rule = composite_gauss_legendre(10, 800, -R, R);
      double s = 0.0;
      for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights[k] * kd(0, 0, 0, rule.nodes[k]).real();
      for (double sign : {-1.0, 1.0})
        s += tail_beyond(R, kd(0, 0, 0, sign * R).real(), R / 2, kd(0, 0, 0, sign * R / 2).real());
      return std::abs(s);
    });
  }

  rec.check("indicator_kernel_density_at_2", 0.0, [] { return std::abs(indicator_kernel_density(2.0) + 0.5); });

  rec.check("inverse_square_decay", 1e-2, [] {
    // r^2 M^{|m><n|}(r) -> -delta_{mn}
    double e = 0.0;
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n)
        for (double r : {-1000.0, 1000.0})
          e = std::max(e, std::abs(r * r * m_base(m, n, r) + (m == n ? 1.0 : 0.0)));
    return e;
  });

  rec.check("m_base_real", 1e-12, [] {
    double e = 0.0;
    for (int m = 0; m <= 6; ++m)
      for (int n = 0; n <= 6; ++n)
        for (double r : {-7.5, -2.0, 0.0, 0.3, 5.5, 45.0}) e = std::max(e, std::abs(m_base(m, n, r).imag()));
    return e;
  });
}

void reconstruction_suite(std::vector<CheckResult>& out, const VerifyOptions& opts) {
  Recorder rec("reconstruction", out);

  const FockOperator vac = fock_projector(0, 0, 1);
  const FockOperator one = fock_projector(1, 1, 2);
  const FockOperator cat = cat_state();
  const CahillGlauberParam third{1.0 / 3.0};
  const FockOperator k_third = cahill_glauber_kernel(third, cahill_glauber_dim(third, 1e-12), 1e-12);

  const GridSpec grid{};
  const SinogramSpec sino{};
  const struct {
    const char* name;
    const FockOperator* T;
  } states[] = {{"vacuum", &vac}, {"number_1", &one}, {"cat", &cat}};

  PhaseField w_vac;
  for (const auto& st : states) {
    PhaseField w;
    rec.check(std::string("radon_wigner_vs_tomographic_") + st.name, 1e-4, [&] {
      w = wigner(*st.T, grid);
      return max_abs_diff(radon(w, sino).values, tomographic_sinogram(*st.T, sino).values);
    });
    rec.check(std::string("wigner_normalization_") + st.name, 1e-6, [&] {
      if (w.values.empty()) w = wigner(*st.T, grid);
      cplx s = 0.0;
      for (const auto& v : w.values) s += v;
      return std::abs(s * grid.dq() * grid.dp() - 1.0);
    });
    rec.check(std::string("tomographic_normalization_") + st.name, 1e-8, [&] {
      const Sinogram p = tomographic_sinogram(*st.T, sino);
      double e = 0.0;
      for (int i = 0; i < sino.n_theta; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < sino.nr; ++j) s += p.at(i, j);
        e = std::max(e, std::abs(s * sino.dr() - 1.0));
      }
      return e;
    });
    if (st.T == &vac) w_vac = std::move(w);
  }

  rec.check("wigner_vacuum_overlap", 1e-6, [&] {
    if (w_vac.values.empty()) w_vac = wigner(vac, grid);
    cplx s = 0.0;
    for (const auto& v : w_vac.values) s += v * v;
    return std::abs(2.0 * kPi * s * grid.dq() * grid.dp() - 1.0);
  });

  std::vector<std::pair<double, double>> probes;
  for (double q : {-1.0, 0.0, 1.0})
    for (double p : {-1.0, 0.0, 1.0}) probes.emplace_back(q, p);
  const struct {
    const char* name;
    const FockOperator* T;
    const FockOperator* K;
  } pairs[] = {{"vacuum_vacuum", &vac, &vac}, {"cat_vacuum", &cat, &vac}, {"number_1_cat", &one, &cat}};
  for (const auto& pr : pairs) {
    std::vector<double> rebuilt;
    rec.check(std::string("reconstruct_vs_direct_") + pr.name, 1e-4, [&] {
      rebuilt = reconstruct_density(tomographic_sinogram(*pr.T, sino), *pr.K, probes);
      double e = 0.0;
      for (std::size_t k = 0; k < probes.size(); ++k)
        e = std::max(e, std::abs(rebuilt[k] - direct_phase_density(*pr.T, *pr.K, probes[k].first, probes[k].second).real()));
      return e;
    });
    rec.check(std::string("reconstruct_trace_at_origin_") + pr.name, 1e-6, [&] {
      if (rebuilt.empty()) throw std::runtime_error("reconstruction unavailable");
      const int d = std::max(pr.T->dim(), pr.K->dim());
      const double tr = (pr.T->resized(d).matrix() * pr.K->resized(d).matrix()).trace().real();
      return std::abs(rebuilt[4] - tr);
    });
  }

  rec.check("recover_cat_T01", 1e-6, [&] {
    return std::abs(recover_matrix_element(tomographic_sinogram(cat, sino), 0, 1) - 0.5);
  });
  rec.check("recover_cahill_glauber_T11", 1e-6, [&] {
    return std::abs(recover_matrix_element(tomographic_sinogram(k_third, sino), 1, 1) - 2.0 / 9.0);
  });

  ReconstructionConfig effect_cfg;
  effect_cfg.n_theta = 64;
  effect_cfg.nr = 129;
  const struct {
    const char* name;
    const FockOperator* K;
  } kernels[] = {{"vacuum", &vac}, {"cat", &cat}, {"cahill_glauber_1_3", &k_third}};
  const PhaseRect rects[] = {{0.0, 1.0, 0.0, 1.0}, {-2.0, 0.0, 1.0, 3.0}};
  for (const auto& kr : kernels) {
    for (int z = 0; z < 2; ++z) {
      rec.check(std::string("effect_markov_vs_direct_") + kr.name + "_Z" + std::to_string(z + 1), 1e-3, [&] {
        const Eigen::MatrixXcd direct = effect_block_direct(*kr.K, rects[z], 3, effect_cfg);
        const Eigen::MatrixXcd markov = effect_block_via_markov(*kr.K, rects[z], 3, effect_cfg);
        return (direct - markov).cwiseAbs().maxCoeff();
      });
    }
  }

  for (const auto& st : {states[0], states[1]}) {
    RouteCheckReport report;
    bool done = false;
    const auto run = [&] {
      if (!done) report = radon_route_check(*st.T, vac);
      done = true;
    };
    rec.check(std::string("route_radon_") + st.name + "_vacuum", 1e-3, [&] {
      run();
      return report.radon_deviation;
    });
    rec.check(std::string("route_inversion_") + st.name + "_vacuum", 1e-3, [&] {
      run();
      return report.inversion_deviation;
    });
  }
  (void)opts;
}

}  // namespace

std::vector<CheckResult> run_verification(const std::string& suite, const VerifyOptions& opts) {
  const bool all = suite == "all";
  if (!all && suite != "transforms" && suite != "kernels" && suite != "reconstruction")
    throw std::invalid_argument("unknown verification suite: " + suite);
  std::vector<CheckResult> out;
  if (all || suite == "transforms") transforms_suite(out, opts);
  if (all || suite == "kernels") kernels_suite(out, opts);
  if (all || suite == "reconstruction") reconstruction_suite(out, opts);
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.passed; });
}

std::string verification_report_json(const std::vector<CheckResult>& results) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : results) {
    nlohmann::ordered_json j;
    j["suite"] = c.suite;
    j["name"] = c.name;
    j["error"] = std::isfinite(c.error) ? nlohmann::ordered_json(c.error) : nlohmann::ordered_json(nullptr);
    j["tolerance"] = c.tolerance;
    j["passed"] = c.passed;
    checks.push_back(std::move(j));
  }
  nlohmann::ordered_json report;
  report["passed"] = all_passed(results);
  report["checks"] = std::move(checks);
  return report.dump(1) + "\n";
}

}  // namespace tomokernel
