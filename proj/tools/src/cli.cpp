#include "tomokernel/cli.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tomokernel/errors.hpp"
#include "tomokernel/io.hpp"
#include "tomokernel/markov_kernels.hpp"
#include "tomokernel/quantum_states.hpp"
#include "tomokernel/reconstruction.hpp"
#include "tomokernel/transforms.hpp"
#include "tomokernel/verify.hpp"

namespace tomokernel::cli {
namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

struct Options {
  std::string state;
  std::string kernel_state;
  std::string kernel_mn;
  bool cat = false;
  std::optional<double> cg_lambda;
  std::string grid;
  std::string sino;
  std::string rect;
  std::string shift;
  std::string index;
  std::string data;
  std::string out;
  std::string format = "csv";
  std::string route = "markov";
  std::string suite = "all";
  std::string which;
  double tol = 1e-12;
  double tail_tol = 0.0;
  int max_index = 3;
  bool mutate_hilbert_sign = false;
};

std::vector<double> parse_list(const std::string& text, std::size_t count, const std::string& flag) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw std::invalid_argument(flag + ": cannot parse '" + item + "' as a number");
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.size() != count) {
    throw std::invalid_argument(flag + ": expected " + std::to_string(count) + " comma-separated values");
  }
  return values;
}

int as_int(double v, const std::string& flag) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument(flag + ": expected an integer, got " + format_double(v));
  return static_cast<int>(v);
}

GridSpec grid_from(const Options& o, const GridSpec& fallback) {
  if (o.grid.empty()) return fallback;
  const auto v = parse_list(o.grid, 6, "--grid");
  GridSpec g{v[0], v[1], as_int(v[2], "--grid"), v[3], v[4], as_int(v[5], "--grid")};
  g.validate();
  return g;
}

SinogramSpec sino_from(const Options& o, const SinogramSpec& fallback) {
  if (o.sino.empty()) return fallback;
  const auto v = parse_list(o.sino, 3, "--sino");
  SinogramSpec s{as_int(v[0], "--sino"), as_int(v[1], "--sino"), v[2]};
  s.validate();
  return s;
}

SeriesControl control_from(const Options& o) {
  SeriesControl c;
  c.abs_tol = o.tol;
  c.validate();
  return c;
}

FockOperator checked_state(const std::string& path, const Options& o) {
  FockOperator T = load_state(path);
  T.validate_state();
  if (o.tail_tol > 0.0) T.validate_tail(o.tail_tol);
  return T;
}

FockOperator require_state(const Options& o) {
  if (o.state.empty()) throw std::invalid_argument("--state FILE is required");
  return checked_state(o.state, o);
}

struct KernelChoice {
  FockOperator K;
  std::string label;
};

KernelChoice kernel_from(const Options& o) {
  const int chosen = !o.kernel_state.empty() + !o.kernel_mn.empty() + o.cat + o.cg_lambda.has_value();
  if (chosen != 1) {
    throw std::invalid_argument("exactly one of --kernel-state, --kernel-mn, --cat, --cg-lambda is required");
  }
  if (!o.kernel_state.empty()) {
    FockOperator K = checked_state(o.kernel_state, o);
    return {K, "state:" + state_hash(K)};
  }
  if (!o.kernel_mn.empty()) {
    const auto v = parse_list(o.kernel_mn, 2, "--kernel-mn");
    const int m = as_int(v[0], "--kernel-mn");
    const int n = as_int(v[1], "--kernel-mn");
    if (m < 0 || n < 0) throw IndexOutOfRange("--kernel-mn: indices must be nonnegative");
    return {fock_projector(m, n, std::max(m, n) + 1), "mn:" + std::to_string(m) + "," + std::to_string(n)};
  }
  if (o.cat) return {cat_state(), "cat"};
  const CahillGlauberParam param{*o.cg_lambda};
  param.validate();
  const double tail = o.tail_tol > 0.0 ? o.tail_tol : 1e-10;
  return {cahill_glauber_kernel(param, cahill_glauber_dim(param, tail), tail),
          "cg_lambda:" + format_double(param.lambda)};
}

struct DataSource {
  Sinogram sino;
  std::string label;
};

DataSource data_from(const Options& o) {
  if (!o.data.empty() && !o.state.empty()) throw std::invalid_argument("--data and --state are mutually exclusive");
  if (!o.data.empty()) {
    Sinogram s = table_to_sinogram(parse_table(read_text_file(o.data)));
    s.validate();
    return {std::move(s), "data"};
  }
  if (o.state.empty()) throw std::invalid_argument("one of --data FILE or --state FILE is required");
  const FockOperator T = require_state(o);
  return {tomographic_sinogram(T, sino_from(o, SinogramSpec{})), "state:" + state_hash(T)};
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
}

void emit_table(const Table& t, const Options& o, std::ostream& out) { emit(format_table(t, parse_format(o.format)), o, out); }

int cmd_wigner(const Options& o, std::ostream& out) {
  const FockOperator T = require_state(o);
  const PhaseField W = wigner(T, grid_from(o, GridSpec{}));
  emit_table(field_table(W, {{"command", "wigner"}, {"state_hash", state_hash(T)}}), o, out);
  return kSuccess;
}

int cmd_sinogram(const Options& o, std::ostream& out) {
  const FockOperator T = require_state(o);
  const Sinogram S = tomographic_sinogram(T, sino_from(o, SinogramSpec{}));
  emit_table(sinogram_table(S, {{"command", "sinogram"}, {"state_hash", state_hash(T)}}), o, out);
  return kSuccess;
}

int cmd_kernel(const Options& o, std::ostream& out) {
  const KernelChoice k = kernel_from(o);
  const auto shift = o.shift.empty() ? std::vector<double>{0.0, 0.0} : parse_list(o.shift, 2, "--shift");
  const KernelDensity density(k.K, control_from(o));
  const Sinogram S = Sinogram::sample(sino_from(o, SinogramSpec{}),
                                      [&](double theta, double r) { return density(shift[0], shift[1], theta, r); });
  emit_table(sinogram_table(S, {{"command", "kernel"},
                                {"kernel", k.label},
                                {"q1", format_double(shift[0])},
                                {"p1", format_double(shift[1])}}),
             o, out);
  return kSuccess;
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
  const DataSource src = data_from(o);
  const KernelChoice k = kernel_from(o);
  const GridSpec grid = grid_from(o, GridSpec{-4.0, 4.0, 17, -4.0, 4.0, 17});
  std::vector<std::pair<double, double>> points;
  points.reserve(static_cast<std::size_t>(grid.nq) * grid.np);
  for (int i = 0; i < grid.nq; ++i)
    for (int j = 0; j < grid.np; ++j) points.emplace_back(grid.q(i), grid.p(j));
  PhaseField F = PhaseField::zeros(grid);
  F.values = reconstruct_density_complex(src.sino, k.K, points, control_from(o));
  emit_table(field_table(F, {{"command", "reconstruct"}, {"source", src.label}, {"kernel", k.label}}), o, out);
  return kSuccess;
}

int cmd_recover(const Options& o, std::ostream& out) {
  const DataSource src = data_from(o);
  const SeriesControl ctrl = control_from(o);
  Table t;
  t.meta = {{"kind", "matrix_elements"}, {"command", "recover"}, {"source", src.label}};
  t.columns = {"n", "m", "re", "im"};
  const auto add = [&](int n, int m) {
    const cplx v = recover_matrix_element(src.sino, n, m, ctrl);
    t.rows.push_back({static_cast<double>(n), static_cast<double>(m), v.real(), v.imag()});
  };
  if (!o.index.empty()) {
    const auto v = parse_list(o.index, 2, "--index");
    const int n = as_int(v[0], "--index");
    const int m = as_int(v[1], "--index");
    if (n < 0 || m < 0) throw IndexOutOfRange("--index: indices must be nonnegative");
    add(n, m);
  } else {
    if (o.max_index < 0) throw IndexOutOfRange("--max-index must be nonnegative");
    for (int n = 0; n <= o.max_index; ++n)
      for (int m = 0; m <= o.max_index; ++m) add(n, m);
  }
  emit_table(t, o, out);
  return kSuccess;
}

int cmd_effects(const Options& o, std::ostream& out) {
  const KernelChoice k = kernel_from(o);
  PhaseRect Z;
  if (!o.rect.empty()) {
    const auto v = parse_list(o.rect, 4, "--rect");
    Z = {v[0], v[1], v[2], v[3]};
  }
  Z.validate();
  if (o.max_index < 0) throw IndexOutOfRange("--max-index must be nonnegative");
  const SinogramSpec s = sino_from(o, SinogramSpec{64, 129, 8.0});
  ReconstructionConfig cfg;
  cfg.n_theta = s.n_theta;
  cfg.nr = s.nr;
  cfg.r_max = s.r_max;
  Eigen::MatrixXcd E;
  if (o.route == "markov") {
    E = effect_block_via_markov(k.K, Z, o.max_index, cfg, control_from(o));
  } else if (o.route == "direct") {
    E = effect_block_direct(k.K, Z, o.max_index, cfg);
  } else {
    throw std::invalid_argument("--route: expected markov or direct");
  }
  Table t;
  t.meta = {{"kind", "matrix_elements"},
            {"command", "effects"},
            {"kernel", k.label},
            {"route", o.route},
            {"rect", format_double(Z.q_lo) + "," + format_double(Z.q_hi) + "," + format_double(Z.p_lo) + "," +
                         format_double(Z.p_hi)}};
  t.columns = {"k", "l", "re", "im"};
  for (int a = 0; a <= o.max_index; ++a)
    for (int b = 0; b <= o.max_index; ++b)
      t.rows.push_back({static_cast<double>(a), static_cast<double>(b), E(a, b).real(), E(a, b).imag()});
  emit_table(t, o, out);
  return kSuccess;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  VerifyOptions vo;
  if (o.mutate_hilbert_sign) vo.hilbert_sign = -1.0;
  const auto results = run_verification(o.suite, vo);
  emit(verification_report_json(results), o, out);
  int failed = 0;
  for (const auto& c : results) {
    if (!c.passed) {
      ++failed;
      err << "FAIL " << c.suite << "/" << c.name << ": error " << format_double(c.error) << " > "
          << format_double(c.tolerance) << "\n";
    }
  }
  err << "verify " << o.suite << ": " << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? kSuccess : kVerificationFailure;
}

int cmd_figures(const Options& o, std::ostream& out) {
  const auto v = o.sino.empty() ? std::vector<double>{64, 201, 5.0} : parse_list(o.sino, 3, "--sino");
  const int n_theta = as_int(v[0], "--sino");
  const int nr = as_int(v[1], "--sino");
  const double r_max = v[2];
  if (n_theta < 1 || nr < 2 || !(r_max > 0.0)) throw std::invalid_argument("--sino: need ntheta >= 1, nr >= 2, rmax > 0");
  const auto r_at = [&](int j) { return -r_max + j * 2.0 * r_max / (nr - 1); };
  const SeriesControl ctrl = control_from(o);
  Table t;
  if (o.which == "cat") {
    const KernelDensity density(cat_state(), ctrl);
    t.meta = {{"kind", "figure"}, {"figure", "cat"}, {"n_theta", std::to_string(n_theta)}, {"nr", std::to_string(nr)},
              {"r_max", format_double(r_max)}};
    t.columns = {"theta", "r", "re", "im"};
    for (int i = 0; i < n_theta; ++i) {
      const double theta = std::numbers::pi * i / n_theta;
      for (int j = 0; j < nr; ++j) {
        const cplx m = density(0.0, 0.0, theta, r_at(j));
        t.rows.push_back({theta, r_at(j), m.real(), m.imag()});
      }
    }
  } else if (o.which == "cahill_glauber") {
    std::vector<KernelDensity> curves;
    for (double s : {-0.5, -1.0}) {
      const auto param = CahillGlauberParam::from_s(s);
      curves.emplace_back(cahill_glauber_kernel(param, cahill_glauber_dim(param, 1e-12), 1e-12), ctrl);
    }
    t.meta = {{"kind", "figure"}, {"figure", "cahill_glauber"}, {"nr", std::to_string(nr)}, {"r_max", format_double(r_max)}};
    t.columns = {"r", "s_minus_half", "s_minus_one"};
    for (int j = 0; j < nr; ++j) {
      const double r = r_at(j);
      t.rows.push_back({r, curves[0](0.0, 0.0, 0.0, r).real(), curves[1](0.0, 0.0, 0.0, r).real()});
    }
  } else {
    throw std::invalid_argument("figures: expected cat or cahill_glauber");
  }
  emit_table(t, o, out);
  return kSuccess;
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_state(CLI::App* cmd, Options& o) {
  cmd->add_option("--state", o.state, "State JSON file");
  cmd->add_option("--tail-tol", o.tail_tol, "Reject states whose outer two rows/columns carry more weight");
}

void add_kernel(CLI::App* cmd, Options& o) {
  cmd->add_option("--kernel-state", o.kernel_state, "Kernel state JSON file");
  cmd->add_option("--kernel-mn", o.kernel_mn, "Kernel |m><n| as M,N");
  cmd->add_flag("--cat", o.cat, "Kernel (|0> + |1>)(<0| + <1|)/2");
  cmd->add_option("--cg-lambda", o.cg_lambda, "Cahill-Glauber kernel parameter lambda in (-1, 1)");
  cmd->add_option("--tol", o.tol, "Series truncation tolerance");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Homodyne tomography kernels and reconstructions", "tomokernel"};
  app.require_subcommand(1);

  auto* wig = app.add_subcommand("wigner", "Wigner function of a state on a phase grid");
  add_state(wig, o);
  wig->add_option("--grid", o.grid, "qmin,qmax,nq,pmin,pmax,np");
  add_output(wig, o);

  auto* sin = app.add_subcommand("sinogram", "Homodyne density p_ht(theta, r) of a state");
  add_state(sin, o);
  sin->add_option("--sino", o.sino, "ntheta,nr,rmax");
  add_output(sin, o);

  auto* ker = app.add_subcommand("kernel", "Kernel density M^K_{q1,p1}(theta, r) on a sinogram lattice");
  add_kernel(ker, o);
  ker->add_option("--tail-tol", o.tail_tol, "Tail tolerance for kernel states");
  ker->add_option("--shift", o.shift, "q1,p1 (default 0,0)");
  ker->add_option("--sino", o.sino, "ntheta,nr,rmax");
  add_output(ker, o);

  auto* rec = app.add_subcommand("reconstruct", "Phase-space density p_K^T from homodyne data");
  add_state(rec, o);
  add_kernel(rec, o);
  rec->add_option("--data", o.data, "Sinogram table of p_ht^T (instead of --state)");
  rec->add_option("--sino", o.sino, "Sinogram lattice used with --state: ntheta,nr,rmax");
  rec->add_option("--grid", o.grid, "qmin,qmax,nq,pmin,pmax,np (default -4,4,17,-4,4,17)");
  add_output(rec, o);

  auto* rcv = app.add_subcommand("recover", "Number-basis matrix elements from homodyne data");
  add_state(rcv, o);
  rcv->add_option("--data", o.data, "Sinogram table of p_ht^T (instead of --state)");
  rcv->add_option("--sino", o.sino, "Sinogram lattice used with --state: ntheta,nr,rmax");
  rcv->add_option("--index", o.index, "Single element N,M");
  rcv->add_option("--max-index", o.max_index, "Block 0..N when --index is absent");
  rcv->add_option("--tol", o.tol, "Series truncation tolerance");
  add_output(rcv, o);

  auto* eff = app.add_subcommand("effects", "Matrix elements <k|E_K(Z)|l> of a covariant effect");
  add_kernel(eff, o);
  eff->add_option("--tail-tol", o.tail_tol, "Tail tolerance for kernel states");
  eff->add_option("--rect", o.rect, "qlo,qhi,plo,phi (default 0,1,0,1)");
  eff->add_option("--max-index", o.max_index, "Largest k, l");
  eff->add_option("--sino", o.sino, "Quadrature lattice ntheta,nr,rmax (default 64,129,8)");
  eff->add_option("--route", o.route, "markov or direct")->check(CLI::IsMember({"markov", "direct"}));
  add_output(eff, o);

  auto* ver = app.add_subcommand("verify", "Run the property suites and print a JSON report");
  ver->add_option("suite", o.suite, "all, transforms, kernels or reconstruction")
      ->check(CLI::IsMember({"all", "transforms", "kernels", "reconstruction"}));
  ver->add_flag("--mutate-hilbert-sign", o.mutate_hilbert_sign, "Flip the Hilbert sign inside the checks");
  ver->add_option("--out", o.out, "Report file (default: standard output)");

  auto* fig = app.add_subcommand("figures", "Data behind the kernel figures");
  fig->add_option("which", o.which, "cat or cahill_glauber")->required()->check(CLI::IsMember({"cat", "cahill_glauber"}));
  fig->add_option("--sino", o.sino, "ntheta,nr,rmax (default 64,201,5)");
  fig->add_option("--tol", o.tol, "Series truncation tolerance");
  add_output(fig, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*wig) return cmd_wigner(o, out);
    if (*sin) return cmd_sinogram(o, out);
    if (*ker) return cmd_kernel(o, out);
    if (*rec) return cmd_reconstruct(o, out);
    if (*rcv) return cmd_recover(o, out);
    if (*eff) return cmd_effects(o, out);
    if (*ver) return cmd_verify(o, out, err);
    if (*fig) return cmd_figures(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace tomokernel::cli
