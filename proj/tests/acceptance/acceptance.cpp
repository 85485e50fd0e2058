#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tomokernel/cli.hpp"
#include "tomokernel/io.hpp"
#include "tomokernel/markov_kernels.hpp"
#include "tomokernel/quantum_states.hpp"
#include "tomokernel/reconstruction.hpp"
#include "tomokernel/special_functions.hpp"
#include "tomokernel/transforms.hpp"

using namespace tomokernel;
using oracle::kPi;

namespace {

struct Measure {
  std::string label;
  double error;
  double tolerance;
};

struct Criterion {
  int id;
  std::string title;
  std::function<std::vector<Measure>()> run;
};

const FockOperator kVac = fock_projector(0, 0, 1);
const FockOperator kOne = fock_projector(1, 1, 2);
const FockOperator kCat = cat_state();

FockOperator cahill_glauber(double lambda) {
  const CahillGlauberParam p{lambda};
  return cahill_glauber_kernel(p, cahill_glauber_dim(p, 1e-12), 1e-12);
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e;
}

Table cli_table(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"tomokernel"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  if (cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0) throw std::runtime_error(err.str());
  return parse_table(out.str());
}

double h_fn(int n, double x) {
  std::vector<double> h(n + 2);
  hermite_functions(n + 1, x, h.data());
  return h[n];
}

double h_fn_derivative(int n, double x) {
  std::vector<double> h(n + 2);
  hermite_functions(n + 1, x, h.data());
  double d = -std::sqrt((n + 1) / 2.0) * h[n + 1];
  if (n > 0) d += std::sqrt(n / 2.0) * h[n - 1];
  return d;
}

std::map<const FockOperator*, PhaseField>& wigner_cache() {
  static std::map<const FockOperator*, PhaseField> cache;
  return cache;
}

const PhaseField& wigner_default(const FockOperator& T) {
  auto& c = wigner_cache();
  auto it = c.find(&T);
  if (it == c.end()) it = c.emplace(&T, wigner(T, GridSpec{})).first;
  return it->second;
}

std::vector<Criterion> criteria() {
  std::vector<Criterion> out;

  out.push_back({1, "hilbert(h_0^2) = (2/pi) daw on |r| <= 5, nr = 2^14 on [-40, 40]", [] {
                   const Profile psi = Profile::sample(40.0, 1 << 14, [](double r) {
                     return cplx(std::exp(-r * r) / std::sqrt(kPi), 0.0);
                   });
                   const Profile h = hilbert(psi);
                   double e = 0.0;
                   for (int j = 0; j < psi.nr; ++j)
                     if (std::abs(psi.r(j)) <= 5.0)
                       e = std::max(e, std::abs(h.values[j] - 2.0 / kPi * oracle::dawson(psi.r(j))));
                   return std::vector<Measure>{{"max", e, 1e-6}};
                 }});

  out.push_back({2, "orthogonality_matrix(5) = delta delta over 1296 tuples", [] {
                   return std::vector<Measure>{{"max", orthogonality_matrix(5).max_deviation(), 1e-6}};
                 }});

  out.push_back({3, "m_base(m, n, r) = pi d/dr H(h_n h_m)(r), m, n <= 3, 41 points in [-4, 4]", [] {
                   const double R = 20.0;
                   const int nr = 6401;  // step 1/160 puts every probe on the lattice
                   double e = 0.0;
                   for (int m = 0; m <= 3; ++m)
                     for (int n = 0; n <= 3; ++n) {
                       const Profile d = Profile::sample(R, nr, [=](double y) {
                         return cplx(h_fn_derivative(n, y) * h_fn(m, y) + h_fn(n, y) * h_fn_derivative(m, y), 0.0);
                       });
                       const Profile h = hilbert(d);
                       for (int k = 0; k <= 40; ++k) {
                         const int j = (nr - 1) / 2 + 32 * (k - 20);
                         e = std::max(e, std::abs(m_base(m, n, d.r(j)) - kPi * h.values[j]));
                       }
                     }
                   return std::vector<Measure>{{"max", e, 1e-4}};
                 }});

  out.push_back({4, "m_base = m_base_maclaurin, n + m even, m, n <= 4, |r| <= 4", [] {
                   double e = 0.0;
                   for (int m = 0; m <= 4; ++m)
                     for (int n = 0; n <= 4; ++n) {
                       if ((m + n) % 2) continue;
                       for (int k = 0; k <= 160; ++k) {
                         const double r = -4.0 + 0.05 * k;
                         e = std::max(e, std::abs(m_base(m, n, r) - m_base_maclaurin(m, n, r)));
                       }
                     }
                   return std::vector<Measure>{{"max", e, 1e-8}};
                 }});

  out.push_back({5, "cat kernel = closed form on four angles, |r| <= 4; figure data zero at r = 0", [] {
                   double e = 0.0;
                   for (double th : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4})
                     for (int k = 0; k <= 160; ++k) {
                       const double r = -4.0 + 0.05 * k;
                       const double expect =
                           2 * (r + std::sqrt(2.0) * std::cos(th)) * (r + (1 - 2 * r * r) * oracle::dawson(r));
                       e = std::max(e, std::abs(m_kernel(kCat, 0, 0, th, r) - expect));
                     }
                   const Table fig = cli_table({"figures", "cat"});
                   double e0 = 0.0;
                   int zero_rows = 0;
                   for (const auto& row : fig.rows)
                     if (row[1] == 0.0) {
                       e0 = std::max(e0, std::hypot(row[2], row[3]));
                       ++zero_rows;
                     }
                   if (zero_rows == 0) e0 = INFINITY;
                   return std::vector<Measure>{{"max", e, 1e-8}, {"figure r=0", e0, 1e-12}};
                 }});

  out.push_back({6, "Cahill-Glauber kernels = -(1/s) Y(r / sqrt(-s)); origin -2/s; zero integral", [] {
                   std::vector<Measure> ms;
                   double e = 0.0, e0 = 0.0, ei = 0.0;
                   for (double lambda : {-1.0 / 3.0, 0.0, 1.0 / 3.0}) {
                     const CahillGlauberParam P{lambda};
                     const KernelDensity kd(cahill_glauber(lambda));
                     const double s = P.s();
                     for (double th : {0.0, 0.8, 2.6})
                       for (int k = 0; k <= 80; ++k) {
                         const double r = -4.0 + 0.1 * k;
                         e = std::max(e, std::abs(kd(0, 0, th, r) + oracle::y_function(r / std::sqrt(-s)) / s));
                       }
                     e0 = std::max(e0, std::abs(kd(0, 0, 0, 0) + 2.0 / s));
                     // tails beyond +-R from c / r^2 + d / r^4 through R and R / 2
                     const double R = 200.0;
                     double sum = oracle::integrate([&](double r) { return kd(0, 0, 0, r).real(); }, -R, R, 800, 10);
                     const double f1 = kd(0, 0, 0, R).real(), f2 = kd(0, 0, 0, R / 2).real();
                     const double a1 = R * R * f1, a2 = R * R / 4 * f2;
                     const double d = (a1 - a2) / (1 / (R * R) - 4 / (R * R));
                     sum += 2 * ((a1 - d / (R * R)) / R + d / (3 * R * R * R));
                     ei = std::max(ei, std::abs(sum));
                   }
                   const Table fig = cli_table({"figures", "cahill_glauber"});
                   double ef = INFINITY;
                   for (const auto& row : fig.rows)
                     if (row[0] == 0.0) ef = std::max(std::abs(row[1] - 4.0), std::abs(row[2] - 2.0));
                   ms.push_back({"max", e, 1e-7});
                   ms.push_back({"origin", e0, 1e-7});
                   ms.push_back({"figure origin 4, 2", ef, 1e-7});
                   ms.push_back({"integral", ei, 1e-6});
                   return ms;
                 }});

  out.push_back({7, "hilbert(chi_[0,1]) = (1/pi) ln|r/(r-1)|; indicator density at 2 is -1/2", [] {
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
                   return std::vector<Measure>{{"max", e, 1e-3},
                                               {"density(2)", std::abs(indicator_kernel_density(2.0) + 0.5), 0.0}};
                 }});

  out.push_back({8, "effects via Markov kernel = direct, K in {vac, cat, K_1/3}, two rectangles, k, l <= 3", [] {
                   ReconstructionConfig cfg;
                   cfg.n_theta = 64;
                   cfg.nr = 129;
                   const FockOperator k3 = cahill_glauber(1.0 / 3.0);
                   double e = 0.0;
                   for (const FockOperator* K : {&kVac, &kCat, &k3})
                     for (const PhaseRect& Z : {PhaseRect{0, 1, 0, 1}, PhaseRect{-2, 0, 1, 3}}) {
                       const Eigen::MatrixXcd a = effect_block_direct(*K, Z, 3, cfg);
                       const Eigen::MatrixXcd b = effect_block_via_markov(*K, Z, 3, cfg);
                       e = std::max(e, (a - b).cwiseAbs().maxCoeff());
                     }
                   return std::vector<Measure>{{"max", e, 1e-3}};
                 }});

  out.push_back({9, "reconstruct_density = direct density at 9 probes; tr[TK] at the origin", [] {
                   std::vector<std::pair<double, double>> pts;
                   for (double q : {-1.0, 0.0, 1.0})
                     for (double p : {-1.0, 0.0, 1.0}) pts.emplace_back(q, p);
                   double e = 0.0, et = 0.0;
                   const std::pair<const FockOperator*, const FockOperator*> pairs[] = {
                       {&kVac, &kVac}, {&kCat, &kVac}, {&kOne, &kCat}};
                   for (auto [T, K] : pairs) {
                     const auto v = reconstruct_density(tomographic_sinogram(*T, SinogramSpec{}), *K, pts);
                     for (std::size_t k = 0; k < pts.size(); ++k)
                       e = std::max(e, std::abs(v[k] - direct_phase_density(*T, *K, pts[k].first, pts[k].second).real()));
                     const double tr = (T->resized(2).matrix() * K->resized(2).matrix()).trace().real();
                     et = std::max(et, std::abs(v[4] - tr));
                   }
                   return std::vector<Measure>{{"max", e, 1e-4}, {"origin", et, 1e-6}};
                 }});

  out.push_back({10, "radon(wigner(T)) = tomographic density for vac, |1><1|, cat", [] {
                   double e = 0.0;
                   for (const FockOperator* T : {&kVac, &kOne, &kCat})
                     e = std::max(e, max_diff(radon(wigner_default(*T), SinogramSpec{}).values,
                                              tomographic_sinogram(*T, SinogramSpec{}).values));
                   return std::vector<Measure>{{"max", e, 1e-4}};
                 }});

  out.push_back({11, "radon_route_check for (vac, vac) and (|1><1|, vac)", [] {
                   const RouteCheckReport a = radon_route_check(kVac, kVac);
                   const RouteCheckReport b = radon_route_check(kOne, kVac);
                   return std::vector<Measure>{
                       {"radon", std::max(a.radon_deviation, b.radon_deviation), 1e-3},
                       {"inversion", std::max(a.inversion_deviation, b.inversion_deviation), 1e-3}};
                 }});

  out.push_back({12, "gaussian radon round trip at default resolution", [] {
                   const GridSpec g;
                   const PhaseField f = PhaseField::sample(g, [](double q, double p) { return cplx(std::exp(-q * q - p * p), 0.0); });
                   const PhaseField back = radon_inverse(radon(f, SinogramSpec{}), g);
                   return std::vector<Measure>{{"max", max_diff(back.values, f.values), 1e-4}};
                 }});

  out.push_back({13, "matrix-element recovery: cat T_01 = 1/2, K_1/3 T_11 = 2/9", [] {
                   const SinogramSpec s;
                   const double a = std::abs(recover_matrix_element(tomographic_sinogram(kCat, s), 0, 1) - 0.5);
                   const double b =
                       std::abs(recover_matrix_element(tomographic_sinogram(cahill_glauber(1.0 / 3.0), s), 1, 1) - 2.0 / 9.0);
                   return std::vector<Measure>{{"cat", a, 1e-6}, {"K_1/3", b, 1e-6}};
                 }});

  out.push_back({14, "normalizations of W and p_ht; 2 pi int W_vac^2 = 1", [] {
                   const GridSpec g;
                   const SinogramSpec s;
                   const FockOperator k3 = cahill_glauber(1.0 / 3.0);
                   double ew = 0.0, ep = 0.0;
                   for (const FockOperator* T : {&kVac, &kOne, &kCat, &k3}) {
                     cplx sum = 0.0;
                     for (const auto& v : wigner_default(*T).values) sum += v;
                     ew = std::max(ew, std::abs(sum * g.dq() * g.dp() - 1.0));
                     const Sinogram p = tomographic_sinogram(*T, s);
                     for (int i = 0; i < s.n_theta; ++i) {
                       cplx row = 0.0;
                       for (int j = 0; j < s.nr; ++j) row += p.at(i, j);
                       ep = std::max(ep, std::abs(row * s.dr() - 1.0));
                     }
                   }
                   cplx sq = 0.0;
                   for (const auto& v : wigner_default(kVac).values) sq += v * v;
                   const double ev = std::abs(2 * kPi * sq * g.dq() * g.dp() - 1.0);
                   return std::vector<Measure>{{"wigner", ew, 1e-6}, {"homodyne", ep, 1e-8}, {"vacuum overlap", ev, 1e-6}};
                 }});

  return out;
}

}  // namespace

int main() {
  int failed = 0;
  for (const Criterion& c : criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Measure> ms;
    std::string failure;
    try {
      ms = c.run();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = failure.empty();
    std::string detail;
    for (const auto& m : ms) {
      pass = pass && m.error <= m.tolerance;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s%s %.3e <= %.1e", detail.empty() ? "" : "; ", m.label.c_str(), m.error, m.tolerance);
      detail += buf;
    }
    if (!failure.empty()) detail = "exception: " + failure;
    std::printf("criterion %2d %s  %s  [%s] (%.1fs)\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failed;
  }
  std::printf("%d of 14 criteria passed\n", 14 - failed);
  return failed == 0 ? 0 : 1;
}
