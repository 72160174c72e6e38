/* Copyright 2026 The ttolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#ifndef TTOLAB_CLI_HPP
#define TTOLAB_CLI_HPP

// Command-line front end: tto-lab build | verify | scan | clark | spectrum |
// plot. Exit codes: 0 success or pass, 1 verification failure, 2 usage or
// input error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttolab/error.hpp"
#include "ttolab/format.hpp"
#include "ttolab/harness.hpp"
#include "ttolab/inner.hpp"
#include "ttolab/io.hpp"
#include "ttolab/modelspace.hpp"
#include "ttolab/plot.hpp"
#include "ttolab/spectral.hpp"
#include "ttolab/symbols.hpp"
#include "ttolab/tto.hpp"

namespace ttolab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct CommandConfig {
  std::string subcommand;
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  int verbosity = 0;
};

/// Output directory: TTO_LAB_OUT when set, else ./out.
inline std::filesystem::path default_out_dir() {
  const char* env = std::getenv("TTO_LAB_OUT");
  return (env != nullptr && *env != '\0') ? std::filesystem::path(env) : std::filesystem::path("out");
}

namespace detail {

/// Inner-function flags shared by several subcommands.
struct InnerOptions {
  std::string zeros;
  std::size_t degree = 0;
  std::string phase = "1";

  void attach(CLI::App* app, std::size_t default_degree) {
    degree = default_degree;
    app->add_option("--zeros", zeros, "comma-separated zeros, e.g. \"0.5,0.3i,-0.2+0.1i\"");
    app->add_option("--degree", degree, "use u = z^n when --zeros is absent")->check(CLI::PositiveNumber);
    app->add_option("--phase", phase, "unimodular constant factor, a+bi");
  }

  BlaschkeProduct make() const {
    const Complex c = parse_complex(phase);
    if (!zeros.empty()) return make_blaschke(parse_complex_list(zeros), c);
    return make_blaschke(std::vector<Complex>(degree, Complex{0.0, 0.0}), c);
  }
};

inline Method parse_method(const std::string& text) {
  if (text == "quadrature") return Method::Quadrature;
  if (text == "functional-calculus" || text == "fc") return Method::FunctionalCalculus;
  throw Error(ErrorCode::ParseError, "--method must be quadrature or functional-calculus");
}

inline std::filesystem::path resolve(const std::filesystem::path& out_dir, const std::string& given,
                                     const std::string& fallback) {
  if (given.empty()) return out_dir / fallback;
  return std::filesystem::path(given);
}

inline Json base_artifact(const CommandConfig& cfg) {
  return Json{{"command", cfg.subcommand}, {"seed", cfg.seed}};
}

// ---------------------------------------------------------------------------
// build

struct BuildOptions {
  InnerOptions inner;
  std::string symbol = "z";
  std::string method;
  std::size_t grid = 0;
  std::string out;
  std::string basis_out;
};

inline int run_build(const CommandConfig& cfg, const BuildOptions& o, std::ostream& out) {
  const BlaschkeProduct u = o.inner.make();
  const Symbol phi = parse_symbol_text(o.symbol);
  Method method = Method::Quadrature;
  if (!o.method.empty()) {
    method = parse_method(o.method);
  } else if (std::holds_alternative<TrigPolynomial>(phi)) {
    method = Method::FunctionalCalculus;
  }
  OperatorMatrix m;
  std::optional<ModelBasis> basis;
  if (method == Method::FunctionalCalculus) {
    const auto* trig = std::get_if<TrigPolynomial>(&phi);
    if (trig == nullptr) throw Error(ErrorCode::MethodMismatch, "functional calculus needs a trigonometric polynomial");
    m = truncated_toeplitz(u, *trig);
  }
  if (method == Method::Quadrature || !o.basis_out.empty()) {
    basis.emplace(o.grid == 0 ? build_basis(u) : build_basis(u, o.grid));
    if (method == Method::Quadrature) m = truncated_toeplitz(*basis, phi);
  }
  const std::filesystem::path path = resolve(cfg.out_dir, o.out, "matrix.csv");
  if (path.extension() == ".json") {
    Json j = base_artifact(cfg);
    j["inner"] = to_json(u);
    j["symbol"] = to_json(phi);
    j["matrix"] = to_json(m);
    write_json(path, j);
  } else {
    std::ostringstream csv;
    write_matrix_csv(m.entries, csv);
    write_atomic(path, csv.str());
  }
  if (!o.basis_out.empty()) {
    std::ostringstream csv;
    write_basis_csv(*basis, csv);
    write_atomic(o.basis_out, csv.str());
  }
  out << "dimension " << u.degree() << ", provenance " << to_string(m.provenance);
  if (basis) out << ", grid " << basis->grid_size() << ", gram defect " << format_double(basis->gram_defect());
  out << "\nwrote " << path.string() << '\n';
  if (const auto warning = u.conditioning_warning()) out << "warning: " << *warning << '\n';
  return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  InnerOptions inner;
  bool all = false;
  std::vector<std::string> identities;
  std::size_t random = 1;
  double radius = 0.9;
};

inline int run_verify(const CommandConfig& cfg, const VerifyOptions& o, std::ostream& out) {
  std::vector<IdentityName> names;
  if (o.all || o.identities.empty()) {
    names.assign(std::begin(kAllIdentities), std::end(kAllIdentities));
  } else {
    for (const auto& text : o.identities) names.push_back(parse_identity(text));
  }
  // cases: the given zeros, or z^n plus seeded random products of degree n
  std::vector<std::pair<std::string, BlaschkeProduct>> cases;
  if (!o.inner.zeros.empty()) {
    cases.emplace_back("zeros", o.inner.make());
  } else {
    cases.emplace_back("z^" + std::to_string(o.inner.degree), o.inner.make());
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t c = 0; c < o.random; ++c) {
      std::vector<Complex> zeros;
      for (std::size_t k = 0; k < o.inner.degree; ++k) {
        zeros.push_back(std::polar(o.radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)));
      }
      cases.emplace_back("random-" + std::to_string(c + 1), make_blaschke(zeros, parse_complex(o.inner.phase)));
    }
  }
  IdentityParams params;
  params.seed = cfg.seed;
  bool pass = true;
  Json j = base_artifact(cfg);
  Json jcases = Json::array();
  for (const auto& [label, u] : cases) {
    const ModelBasis basis = build_basis(u);
    Json reports = Json::array();
    for (IdentityName name : names) {
      const VerificationReport r = verify_identity(name, basis, params);
      pass = pass && r.pass;
      reports.push_back(to_json(r));
      out << (r.pass ? "PASS " : "FAIL ") << label << ' ' << r.identity << " residual " << format_double(r.residual)
          << " tolerance " << format_double(r.tolerance);
      if (cfg.verbosity > 0 && !r.detail.empty()) out << " (" << r.detail << ')';
      out << '\n';
    }
    jcases.push_back(Json{{"label", label}, {"inner", to_json(u)}, {"grid_size", basis.grid_size()}, {"reports", reports}});
  }
  j["pass"] = pass;
  j["cases"] = jcases;
  const auto path = cfg.out_dir / "verify.json";
  write_json(path, j);
  out << "wrote " << path.string() << '\n';
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// scan

struct ScanOptions {
  std::string config;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

inline std::pair<ScanReport, Json> load_and_run(const std::string& config, const ScanOptions* overrides) {
  Json doc = read_json_file(config);
  if (overrides != nullptr && overrides->seed) doc["seed"] = *overrides->seed;
  Scenario s = scenario_from_json(doc);
  if (overrides != nullptr && overrides->threads) s.threads = std::max(1u, *overrides->threads);
  return {run_scenario(s), s.source};
}

inline int run_scan(const CommandConfig& cfg, const ScanOptions& o, std::ostream& out) {
  const auto [report, source] = load_and_run(o.config, &o);
  const Scenario s = scenario_from_json(source);
  const auto csv_path = s.csv_path.empty() ? cfg.out_dir / (s.name + ".csv") : cfg.out_dir / s.csv_path;
  const auto json_path = s.json_path.empty() ? cfg.out_dir / (s.name + ".json") : cfg.out_dir / s.json_path;
  write_atomic(csv_path, scan_csv(report));
  write_json(json_path, scan_summary(report, source));
  out << s.name << ": " << (report.pass ? "PASS" : "FAIL") << " (" << report.verdict << ")\n";
  if (cfg.verbosity > 0) out << scan_csv(report);
  for (const auto& row : report.rows) {
    if (!row.ok) out << "  degree " << row.degree << ": " << row.error << '\n';
  }
  out << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
  return report.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// clark

struct ClarkOptions {
  InnerOptions inner;
  std::string alpha = "1";
  std::string symbol;
};

inline int run_clark(const CommandConfig& cfg, const ClarkOptions& o, std::ostream& out) {
  const BlaschkeProduct u = o.inner.make();
  const Complex alpha = parse_complex(o.alpha);
  const ModelBasis basis = build_basis(u);
  const OperatorMatrix unitary = clark_unitary(basis, alpha);
  const OperatorMatrix shift = compressed_shift(basis);
  const auto n = static_cast<Eigen::Index>(u.degree());

  const double unitarity = (unitary.entries * unitary.entries.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm();
  const std::size_t perturbation_rank = numerical_rank(unitary.entries - shift.entries);
  const SpectralResult eig = eigenvalues(unitary);
  double clark_residual = 0.0;
  Json points = Json::array();
  for (const auto& z : eig.eigenvalues) {
    const Complex zeta = z / std::abs(z);
    clark_residual = std::max(clark_residual, std::abs(eval_inner(u, zeta) - alpha));
    points.push_back(to_json(z));
  }
  const Complex u0 = inner_at_origin(u);
  const Eigen::VectorXcd k0 = basis.project(
      (Eigen::VectorXcd::Ones(basis.inner_values().size()) - std::conj(u0) * basis.inner_values()).eval());
  const std::size_t krylov = numerical_rank(krylov_matrix(unitary.entries, k0));

  bool pass = unitarity < 1e-8 && perturbation_rank == 1 && clark_residual < 1e-6 &&
              krylov == static_cast<std::size_t>(n) && eig.converged;
  Json j = base_artifact(cfg);
  j["inner"] = to_json(u);
  j["alpha"] = to_json(alpha);
  j["grid_size"] = basis.grid_size();
  j["unitarity_residual"] = unitarity;
  j["perturbation_rank"] = perturbation_rank;
  j["clark_points"] = points;
  j["clark_point_residual"] = clark_residual;
  j["krylov_rank"] = krylov;
  j["unitary"] = to_json(unitary);
  out << "unitarity residual " << format_double(unitarity) << "\nrank(U - A_z) " << perturbation_rank
      << "\nmax |u(zeta) - alpha| " << format_double(clark_residual) << "\nKrylov rank " << krylov << " of " << n
      << '\n';
  if (!o.symbol.empty()) {
    const Symbol phi = parse_symbol_text(o.symbol);
    const auto* trig = std::get_if<TrigPolynomial>(&phi);
    if (trig == nullptr) throw Error(ErrorCode::MethodMismatch, "the Clark gap needs a trigonometric polynomial");
    const OperatorMatrix gap = clark_functional_gap(basis, alpha, *trig);
    const Eigen::MatrixXcd f_u = apply_trig(unitary.entries, *trig);
    const double normality = (f_u * f_u.adjoint() - f_u.adjoint() * f_u).norm();
    const std::size_t rank = numerical_rank(gap);
    const auto bound = static_cast<std::size_t>(trig->analytic_degree() + trig->coanalytic_degree());
    pass = pass && rank <= bound && normality < 1e-8;
    j["gap"] = Json{{"symbol", to_json(phi)}, {"rank", rank}, {"rank_bound", bound}, {"normality_defect", normality}};
    out << "rank(phi(U) - A_phi) " << rank << " (bound " << bound << "), normality defect " << format_double(normality)
        << '\n';
  }
  j["pass"] = pass;
  const auto path = cfg.out_dir / "clark.json";
  write_json(path, j);
  out << (pass ? "PASS" : "FAIL") << "\nwrote " << path.string() << '\n';
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOptions {
  InnerOptions inner;
  std::string symbol = "z";
  std::string method = "functional-calculus";
  double rank_tolerance = kDefaultRankTolerance;
};

inline int run_spectrum(const CommandConfig& cfg, const SpectrumOptions& o, std::ostream& out) {
  const BlaschkeProduct u = o.inner.make();
  const Symbol phi = parse_symbol_text(o.symbol);
  const Method method = parse_method(o.method);
  OperatorMatrix m;
  if (method == Method::FunctionalCalculus) {
    const auto* trig = std::get_if<TrigPolynomial>(&phi);
    if (trig == nullptr) throw Error(ErrorCode::MethodMismatch, "functional calculus needs a trigonometric polynomial");
    m = truncated_toeplitz(u, *trig);
  } else {
    m = truncated_toeplitz(build_basis(u), phi);
  }
  const SpectralResult eig = eigenvalues(m);
  const SpectralResult sv = singular_values(m);
  Json j = base_artifact(cfg);
  j["inner"] = to_json(u);
  j["symbol"] = to_json(phi);
  j["provenance"] = std::string(to_string(m.provenance));
  Json ev = Json::array();
  for (const auto& z : eig.eigenvalues) ev.push_back(to_json(z));
  j["eigenvalues"] = ev;
  j["eigenpair_residuals"] = eig.residuals;
  j["singular_values"] = sv.singular_values;
  j["rank"] = numerical_rank(sv.singular_values, o.rank_tolerance);
  j["converged"] = eig.converged && sv.converged;
  if (const auto* trig = std::get_if<TrigPolynomial>(&phi); trig != nullptr && trig->is_analytic()) {
    // eigenvalues of phi(A_z) are phi at the zeros of u
    std::vector<Complex> expected;
    for (const auto& a : u.zeros()) expected.push_back(trig->at(a));
    j["zero_matching_distance"] = matching_distance(eig.eigenvalues, expected);
  }
  const auto path = cfg.out_dir / "spectrum.json";
  write_json(path, j);
  out << "eigenvalues:\n";
  for (const auto& z : eig.eigenvalues) out << "  " << format_double(z.real()) << ' ' << format_double(z.imag()) << '\n';
  out << "singular values:\n";
  for (double s : sv.singular_values) out << "  " << format_double(s) << '\n';
  out << "wrote " << path.string() << '\n';
  return (eig.converged && sv.converged) ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// plot

struct PlotOptions {
  std::string report;
  std::string config;
  std::string kind = "sv-decay";
  std::string out;
};

inline int run_plot(const CommandConfig& cfg, const PlotOptions& o, std::ostream& out) {
  if (o.report.empty() == o.config.empty()) {
    throw CLI::ValidationError("plot", "exactly one of --report or --config is required");
  }
  const PlotKind kind = parse_plot_kind(o.kind);
  const ScanReport report =
      o.report.empty() ? load_and_run(o.config, nullptr).first : scan_report_from_json(read_json_file(o.report));
  const std::filesystem::path stem =
      o.out.empty() ? cfg.out_dir / (report.scenario + "_" + std::string(to_string(kind))) : std::filesystem::path(o.out);
  const PlotFiles files = emit_plot(report, kind, stem);
  out << "wrote " << files.svg.string() << " and " << files.csv.string() << '\n';
  return kExitPass;
}

}  // namespace detail

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Truncated Toeplitz operators on model spaces", "tto-lab"};
  app.require_subcommand(1);
  CommandConfig cfg;
  std::string out_dir = default_out_dir().string();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "output directory (env TTO_LAB_OUT, default ./out)");
    sub->add_option("--seed", cfg.seed, "seed for randomized selections, recorded in every JSON artifact");
    sub->add_flag("-v,--verbose", cfg.verbosity, "more output");
  };

  detail::BuildOptions build;
  CLI::App* build_cmd = app.add_subcommand("build", "build A_phi for one inner function and export it");
  build.inner.attach(build_cmd, 4);
  build_cmd->add_option("--symbol", build.symbol, "chi, a trig expression like \"z^2 + 0.5*conj(z)\", or JSON");
  build_cmd->add_option("--method", build.method, "quadrature or functional-calculus (default by symbol)");
  build_cmd->add_option("--grid", build.grid, "quadrature grid size, a power of two (default automatic)");
  build_cmd->add_option("--out", build.out, "matrix file, .csv or .json (default <out-dir>/matrix.csv)");
  build_cmd->add_option("--basis", build.basis_out, "also write the tabulated basis as CSV");
  add_common(build_cmd);

  detail::VerifyOptions verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "check exact identities");
  verify.inner.attach(verify_cmd, 16);
  verify_cmd->add_flag("--all", verify.all, "every identity (default)");
  verify_cmd->add_option("--identity", verify.identities,
                         "gram, hessenberg, csym, defect, telescoping, hankel, zero-symbol, clark-unitarity");
  verify_cmd->add_option("--random", verify.random, "random products of the given degree (with --degree)");
  verify_cmd->add_option("--radius", verify.radius, "bound on |a| for random zeros")->check(CLI::Range(0.0, 0.999));
  add_common(verify_cmd);

  detail::ScanOptions scan;
  unsigned scan_threads = 0;
  CLI::App* scan_cmd = app.add_subcommand("scan", "run a scenario over a family sweep");
  scan_cmd->add_option("--config", scan.config, "scenario JSON")->required()->check(CLI::ExistingFile);
  auto* threads_opt = scan_cmd->add_option("--threads", scan_threads, "rows computed concurrently");
  add_common(scan_cmd);

  detail::ClarkOptions clark;
  CLI::App* clark_cmd = app.add_subcommand("clark", "Clark unitary U_alpha and its checks");
  clark.inner.attach(clark_cmd, 8);
  clark_cmd->add_option("--alpha", clark.alpha, "unimodular alpha, a+bi");
  clark_cmd->add_option("--symbol", clark.symbol, "optional trig symbol for phi(U_alpha) - A_phi");
  add_common(clark_cmd);

  detail::SpectrumOptions spectrum;
  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and singular values of A_phi");
  spectrum.inner.attach(spectrum_cmd, 8);
  spectrum_cmd->add_option("--symbol", spectrum.symbol, "symbol (default z)");
  spectrum_cmd->add_option("--method", spectrum.method, "functional-calculus (default) or quadrature");
  spectrum_cmd->add_option("--rank-tol", spectrum.rank_tolerance, "relative rank tolerance")
      ->check(CLI::Range(0.0, 1.0));
  add_common(spectrum_cmd);

  detail::PlotOptions plot;
  CLI::App* plot_cmd = app.add_subcommand("plot", "SVG figure from a scan report");
  plot_cmd->add_option("--report", plot.report, "scan summary JSON")->check(CLI::ExistingFile);
  plot_cmd->add_option("--config", plot.config, "scenario JSON (runs the scan first)")->check(CLI::ExistingFile);
  plot_cmd->add_option("--kind", plot.kind, "eig-scatter or sv-decay");
  plot_cmd->add_option("--out", plot.out, "output stem (default <out-dir>/<scenario>_<kind>)");
  add_common(plot_cmd);

  if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
      app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "usage error: unknown subcommand '" << args.front() << "'\n" << app.help();
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (CLI::App* sub : app.get_subcommands()) out << sub->help();
      return kExitPass;
    }
    err << "usage error: " << e.what() << '\n';
    CLI::App* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << active->help();
    return kExitUsage;
  }

  cfg.out_dir = out_dir;
  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    if (sub == build_cmd) return detail::run_build(cfg, build, out);
    if (sub == verify_cmd) return detail::run_verify(cfg, verify, out);
    if (sub == scan_cmd) {
      if (scan_cmd->count("--seed") > 0) scan.seed = cfg.seed;
      if (threads_opt->count() > 0) scan.threads = scan_threads;
      return detail::run_scan(cfg, scan, out);
    }
    if (sub == clark_cmd) return detail::run_clark(cfg, clark, out);
    if (sub == spectrum_cmd) return detail::run_spectrum(cfg, spectrum, out);
    if (sub == plot_cmd) return detail::run_plot(cfg, plot, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ttolab::cli

#endif  // TTOLAB_CLI_HPP
