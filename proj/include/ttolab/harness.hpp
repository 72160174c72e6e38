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

#ifndef TTOLAB_HARNESS_HPP
#define TTOLAB_HARNESS_HPP

// Scenario runner: sweeps a family of inner functions, builds one operator
// per member and records singular values, eigenvalue distances, ranks and
// residuals as a ScanReport with CSV and JSON views.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ttolab/error.hpp"
#include "ttolab/format.hpp"
#include "ttolab/inner.hpp"
#include "ttolab/io.hpp"
#include "ttolab/modelspace.hpp"
#include "ttolab/spectral.hpp"
#include "ttolab/symbols.hpp"
#include "ttolab/tto.hpp"

namespace ttolab {

enum class ScenarioKind { Compactness, EssentialSpectrum, EssentialNorm, ClarkComparison, PcReduction, IdentitySuite };

inline std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Compactness: return "compactness";
    case ScenarioKind::EssentialSpectrum: return "essential-spectrum";
    case ScenarioKind::EssentialNorm: return "essential-norm";
    case ScenarioKind::ClarkComparison: return "clark-comparison";
    case ScenarioKind::PcReduction: return "pc-reduction";
    case ScenarioKind::IdentitySuite: return "identity-suite";
  }
  return "unknown";
}

inline ScenarioKind parse_scenario_kind(std::string_view text) {
  for (ScenarioKind k : {ScenarioKind::Compactness, ScenarioKind::EssentialSpectrum, ScenarioKind::EssentialNorm,
                         ScenarioKind::ClarkComparison, ScenarioKind::PcReduction, ScenarioKind::IdentitySuite}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::BadScenario, "unknown scenario kind '" + std::string(text) + "'");
}

inline double default_tolerance(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Compactness: return 0.05;
    case ScenarioKind::EssentialSpectrum: return 0.05;
    case ScenarioKind::EssentialNorm: return 0.1;
    case ScenarioKind::ClarkComparison: return 1e-8;
    case ScenarioKind::PcReduction: return 0.1;
    case ScenarioKind::IdentitySuite: return 0.0;
  }
  return 0.0;
}

inline constexpr double kCompressionTolerance = 1e-10;
inline constexpr int kDefaultChiOrder = 256;

struct FamilySpec {
  enum class Type { Accumulation, Monomial, Random, Zeros };
  Type type = Type::Accumulation;
  Complex xi{1.0, 0.0};
  double rate = 1.0 / 3.0;
  Complex phase{1.0, 0.0};
  std::vector<std::size_t> degrees{8, 16, 24, 32, 40, 48};
  double radius = 0.9;             // random zeros: |a| <= radius
  std::vector<Complex> zeros;      // explicit zeros; members are prefixes
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::Compactness;
  FamilySpec family;
  Symbol symbol = TrigPolynomial::monomial(1);
  double tolerance = 0.05;
  double rank_tolerance = kDefaultRankTolerance;
  Method method = Method::FunctionalCalculus;
  std::size_t grid_size = 0;  // 0: automatic
  Complex alpha{1.0, 0.0};
  int chi_order = kDefaultChiOrder;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool record_timing = false;
  std::string expect;  // compactness: "compact" | "non-compact" | ""
  std::string csv_path;
  std::string json_path;
  Json source;  // the document the scenario was read from
};

struct ScanRow {
  std::size_t degree = 0;
  double sigma_1 = 0.0;
  double sigma_q1 = 0.0;   // sigma_{ceil(n/4)}
  double sigma_mid = 0.0;  // sigma_{ceil(n/2)}
  double sigma_min = 0.0;  // sigma_n
  double eig_dist = std::numeric_limits<double>::quiet_NaN();
  std::size_t rank = 0;
  double residual = 0.0;
  double seconds = 0.0;
  bool ok = true;
  std::string error;
  std::vector<double> singular_values;
  std::vector<Complex> eigenvalues;
  std::vector<VerificationReport> identities;
};

struct ScanReport {
  std::string scenario;
  ScenarioKind kind = ScenarioKind::Compactness;
  std::vector<ScanRow> rows;
  bool pass = false;
  std::string verdict;
  double compression_residual = 0.0;
  std::optional<Complex> accumulation;  // xi for accumulation families
  std::optional<Complex> target;        // phi(xi)
  std::uint64_t seed = 0;
  Json calibration = Json::object();
};

// ---------------------------------------------------------------------------
// Scenario input

namespace detail {

inline FamilySpec family_from_json(const Json& j) {
  FamilySpec f;
  const std::string type = j.value("type", std::string("accumulation"));
  if (type == "accumulation") {
    f.type = FamilySpec::Type::Accumulation;
  } else if (type == "monomial") {
    f.type = FamilySpec::Type::Monomial;
  } else if (type == "random") {
    f.type = FamilySpec::Type::Random;
  } else if (type == "zeros") {
    f.type = FamilySpec::Type::Zeros;
  } else {
    throw Error(ErrorCode::BadScenario, "unknown family type '" + type + "'");
  }
  if (j.contains("xi")) f.xi = complex_from_json(j.at("xi"));
  if (j.contains("rate")) f.rate = rate_from_json(j.at("rate"));
  if (j.contains("phase")) f.phase = complex_from_json(j.at("phase"));
  if (j.contains("radius")) f.radius = j.at("radius").get<double>();
  if (j.contains("zeros")) f.zeros = zeros_from_json(j.at("zeros"));
  if (j.contains("degrees")) {
    f.degrees = j.at("degrees").get<std::vector<std::size_t>>();
  } else if (f.type == FamilySpec::Type::Zeros) {
    f.degrees = {f.zeros.size()};
  }
  if (f.degrees.empty()) throw Error(ErrorCode::BadScenario, "degree sweep is empty");
  for (std::size_t k = 0; k < f.degrees.size(); ++k) {
    if (f.degrees[k] == 0) throw Error(ErrorCode::BadScenario, "degrees must be positive");
    if (k > 0 && f.degrees[k] <= f.degrees[k - 1]) {
      throw Error(ErrorCode::BadScenario, "degree sweep must be strictly increasing");
    }
  }
  if (f.type == FamilySpec::Type::Zeros && f.degrees.back() > f.zeros.size()) {
    throw Error(ErrorCode::BadScenario, "degree exceeds the number of explicit zeros");
  }
  if (f.type == FamilySpec::Type::Random && !(f.radius > 0.0 && f.radius < 1.0)) {
    throw Error(ErrorCode::BadScenario, "random family radius must lie in (0, 1)");
  }
  return f;
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadScenario, "scenario must be a JSON object");
  Scenario s;
  s.source = j;
  if (!j.contains("kind")) throw Error(ErrorCode::BadScenario, "scenario needs a 'kind'");
  s.kind = parse_scenario_kind(j.at("kind").get<std::string>());
  s.name = j.value("name", std::string(to_string(s.kind)));
  s.family = detail::family_from_json(j.value("family", Json::object()));
  if (j.contains("symbol")) {
    s.symbol = symbol_from_json(j.at("symbol"));
  } else if (s.kind == ScenarioKind::PcReduction) {
    s.symbol = chi_symbol();
  }
  s.tolerance = j.value("tolerance", default_tolerance(s.kind));
  s.rank_tolerance = j.value("rank_tolerance", kDefaultRankTolerance);
  if (!(s.tolerance >= 0.0) || !(s.rank_tolerance > 0.0 && s.rank_tolerance < 1.0)) {
    throw Error(ErrorCode::BadScenario, "tolerances must be positive (rank_tolerance in (0, 1))");
  }
  const std::string method = j.value("method", std::string("functional-calculus"));
  if (method == "functional-calculus") {
    s.method = Method::FunctionalCalculus;
  } else if (method == "quadrature") {
    s.method = Method::Quadrature;
  } else {
    throw Error(ErrorCode::BadScenario, "method must be 'functional-calculus' or 'quadrature'");
  }
  s.grid_size = j.value("grid_size", std::size_t{0});
  if (j.contains("alpha")) s.alpha = complex_from_json(j.at("alpha"));
  s.chi_order = j.value("chi_order", kDefaultChiOrder);
  if (s.chi_order < 1) throw Error(ErrorCode::BadScenario, "chi_order must be >= 1");
  s.seed = j.value("seed", std::uint64_t{1});
  s.threads = std::max(1u, j.value("threads", 1u));
  s.record_timing = j.value("record_timing", false);
  s.expect = j.value("expect", std::string());
  if (j.contains("output")) {
    const Json& out = j.at("output");
    s.csv_path = out.value("csv", std::string());
    s.json_path = out.value("json", std::string());
  }
  const bool needs_trig = s.kind == ScenarioKind::Compactness || s.kind == ScenarioKind::EssentialSpectrum ||
                          s.kind == ScenarioKind::EssentialNorm || s.kind == ScenarioKind::ClarkComparison;
  if (needs_trig && !std::holds_alternative<TrigPolynomial>(s.symbol)) {
    throw Error(ErrorCode::BadScenario, std::string(to_string(s.kind)) + " needs a trigonometric polynomial symbol");
  }
  if (s.kind == ScenarioKind::EssentialSpectrum && !std::get<TrigPolynomial>(s.symbol).is_analytic()) {
    throw Error(ErrorCode::BadScenario, "essential-spectrum needs an analytic symbol");
  }
  if (s.kind == ScenarioKind::PcReduction) {
    if (!std::holds_alternative<JumpSymbol>(s.symbol)) {
      throw Error(ErrorCode::BadScenario, "pc-reduction needs a jump symbol");
    }
    pc_reduction_coefficients(std::get<JumpSymbol>(s.symbol));  // validates the jump set
    if (s.family.type != FamilySpec::Type::Accumulation || std::abs(s.family.xi - Complex{1.0, 0.0}) > kPhaseTolerance) {
      throw Error(ErrorCode::BadScenario, "pc-reduction needs a family accumulating at 1");
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Families

/// Members of the sweep, one per degree; each member's zeros extend the
/// previous member's, so the model spaces are nested.
inline std::vector<BlaschkeProduct> family_members(const FamilySpec& f, std::uint64_t seed) {
  std::vector<BlaschkeProduct> out;
  switch (f.type) {
    case FamilySpec::Type::Accumulation: {
      const TruncationFamily fam = accumulation_family(f.xi, f.rate, f.degrees, f.phase);
      for (std::size_t k = 0; k < fam.size(); ++k) out.push_back(fam.member(k));
      break;
    }
    case FamilySpec::Type::Monomial:
      for (std::size_t n : f.degrees) out.push_back(make_blaschke(std::vector<Complex>(n, Complex{0.0, 0.0}), f.phase));
      break;
    case FamilySpec::Type::Random: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<Complex> zeros;
      for (std::size_t k = 0; k < f.degrees.back(); ++k) {
        const double r = f.radius * std::sqrt(unit(rng));
        zeros.push_back(std::polar(r, 2.0 * std::numbers::pi * unit(rng)));
      }
      for (std::size_t n : f.degrees) {
        out.push_back(make_blaschke(std::span<const Complex>(zeros.data(), n), f.phase));
      }
      break;
    }
    case FamilySpec::Type::Zeros:
      for (std::size_t n : f.degrees) out.push_back(make_blaschke(std::span<const Complex>(f.zeros.data(), n), f.phase));
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rows

namespace detail {

inline std::size_t ceil_div(std::size_t n, std::size_t d) { return (n + d - 1) / d; }

/// Operators for one family member, either closed form or quadrature.
class MemberOperators {
 public:
  MemberOperators(const BlaschkeProduct& u, Method method, std::size_t grid) : u_(u), method_(method) {
    if (method == Method::Quadrature) {
      basis_.emplace(grid == 0 ? build_basis(u) : build_basis(u, grid));
      shift_ = compressed_shift(*basis_).entries;
    } else {
      shift_ = compressed_shift(u).entries;
    }
  }

  const Eigen::MatrixXcd& shift() const { return shift_; }

  Eigen::MatrixXcd tto(const TrigPolynomial& phi) const {
    if (method_ == Method::Quadrature) return truncated_toeplitz(*basis_, phi).entries;
    return apply_trig(shift_, phi);
  }

  Eigen::MatrixXcd clark(Complex alpha) const {
    if (method_ == Method::Quadrature) return clark_unitary(*basis_, alpha).entries;
    return clark_unitary(u_, alpha).entries;
  }

  const ModelBasis& basis() {
    if (!basis_) basis_.emplace(build_basis(u_));
    return *basis_;
  }

 private:
  BlaschkeProduct u_;
  Method method_;
  std::optional<ModelBasis> basis_;
  Eigen::MatrixXcd shift_;
};

inline void fill_singular_values(ScanRow& row, const Eigen::MatrixXcd& m, double rank_tol) {
  row.singular_values = singular_values(m).singular_values;
  const std::size_t n = row.singular_values.size();
  row.sigma_1 = row.singular_values.front();
  row.sigma_q1 = row.singular_values[ceil_div(n, 4) - 1];
  row.sigma_mid = row.singular_values[ceil_div(n, 2) - 1];
  row.sigma_min = row.singular_values.back();
  row.rank = numerical_rank(row.singular_values, rank_tol);
}

inline double max_residual(const SpectralResult& r) {
  double worst = 0.0;
  for (double x : r.residuals) worst = std::max(worst, x);
  return worst;
}

inline double distance_to(const std::vector<Complex>& pts, Complex target) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::min(best, std::abs(p - target));
  return best;
}

struct RowResult {
  ScanRow row;
  Eigen::MatrixXcd nested;  // operator whose compressions must be consistent
};

inline RowResult compute_row(const Scenario& s, const BlaschkeProduct& u, std::optional<Complex> target) {
  RowResult out;
  ScanRow& row = out.row;
  row.degree = u.degree();
  MemberOperators ops(u, s.method, s.grid_size);
  const Eigen::Index n = static_cast<Eigen::Index>(u.degree());
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);

  switch (s.kind) {
    case ScenarioKind::Compactness:
    case ScenarioKind::EssentialSpectrum:
    case ScenarioKind::EssentialNorm: {
      const auto& phi = std::get<TrigPolynomial>(s.symbol);
      out.nested = ops.tto(phi);
      fill_singular_values(row, out.nested, s.rank_tolerance);
      const SpectralResult eig = eigenvalues(out.nested);
      row.eigenvalues = eig.eigenvalues;
      row.residual = max_residual(eig);
      if (target) row.eig_dist = distance_to(row.eigenvalues, *target);
      if (!eig.converged) throw Error(ErrorCode::NoConvergence, "QR sweep cap reached");
      break;
    }
    case ScenarioKind::ClarkComparison: {
      // phi(U_alpha) - A_phi: normal plus finite rank
      const auto& phi = std::get<TrigPolynomial>(s.symbol);
      out.nested = ops.tto(phi);
      const Eigen::MatrixXcd f_u = apply_trig(ops.clark(s.alpha), phi);
      const Eigen::MatrixXcd gap = f_u - out.nested;
      fill_singular_values(row, gap, s.rank_tolerance);
      row.residual = (f_u * f_u.adjoint() - f_u.adjoint() * f_u).norm();
      row.eigenvalues = eigenvalues(f_u).eigenvalues;
      if (target) row.eig_dist = distance_to(row.eigenvalues, *target);
      break;
    }
    case ScenarioKind::PcReduction: {
      // R_n = A_phi - alpha A_chi - beta I with chi and the jump part of phi
      // both replaced by their order-d Fejer means
      const auto& phi = std::get<JumpSymbol>(s.symbol);
      const PcReduction pc = pc_reduction_coefficients(phi);
      const Eigen::MatrixXcd a_phi = ops.tto(smooth_jumps(phi, s.chi_order));
      const Eigen::MatrixXcd a_chi = ops.tto(smooth_jumps(chi_symbol(), s.chi_order));
      out.nested = a_phi - pc.alpha * a_chi - pc.beta * identity;
      fill_singular_values(row, out.nested, s.rank_tolerance);
      row.residual = row.sigma_1;
      break;
    }
    case ScenarioKind::IdentitySuite: {
      const ModelBasis& basis = ops.basis();
      IdentityParams params;
      params.seed = s.seed;
      params.alpha = s.alpha;
      out.nested = compressed_shift(basis).entries;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.sigma_1 = row.sigma_q1 = row.sigma_mid = row.sigma_min = nan;
      bool all = true;
      for (IdentityName id : kAllIdentities) {
        row.identities.push_back(verify_identity(id, basis, params));
        const auto& r = row.identities.back();
        all = all && r.pass;
        row.residual = std::max(row.residual, r.residual / r.tolerance);
      }
      if (!all) row.error = "identity failure";
      row.ok = all;
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Runs any scenario kind. Failed rows are recorded and never abort the sweep.
inline ScanReport run_scenario(const Scenario& s) {
  ScanReport report;
  report.scenario = s.name;
  report.kind = s.kind;
  report.seed = s.seed;
  const std::vector<BlaschkeProduct> members = family_members(s.family, s.seed);
  if (s.family.type == FamilySpec::Type::Accumulation) {
    report.accumulation = s.family.xi / std::abs(s.family.xi);
    report.target = eval_symbol(s.symbol, std::arg(s.family.xi));
  }

  std::vector<detail::RowResult> results(members.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < members.size(); k = next++) {
      const auto start = std::chrono::steady_clock::now();
      try {
        results[k] = detail::compute_row(s, members[k], report.target);
      } catch (const std::exception& e) {
        results[k].row = ScanRow{};
        results[k].row.degree = members[k].degree();
        results[k].row.ok = false;
        results[k].row.error = e.what();
        results[k].nested.resize(0, 0);
      }
      if (s.record_timing) {
        results[k].row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(s.threads, static_cast<unsigned>(members.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // compression consistency between consecutive members
  for (std::size_t k = 1; k < results.size(); ++k) {
    const auto& small = results[k - 1].nested;
    const auto& big = results[k].nested;
    if (small.size() == 0 || big.size() == 0) continue;
    const double d = (big.topLeftCorner(small.rows(), small.cols()) - small).cwiseAbs().maxCoeff();
    report.compression_residual = std::max(report.compression_residual, d);
  }
  for (auto& r : results) report.rows.push_back(std::move(r.row));

  const bool rows_ok = std::all_of(report.rows.begin(), report.rows.end(), [](const ScanRow& r) { return r.ok; });
  const bool nested_ok = report.compression_residual <= kCompressionTolerance;
  report.calibration = Json{{"sigma_q1_index", "ceil(n/4)"},
                            {"sigma_mid_index", "ceil(n/2)"},
                            {"tolerance", s.tolerance},
                            {"rank_tolerance", s.rank_tolerance},
                            {"compression_tolerance", kCompressionTolerance},
                            {"method", s.method == Method::Quadrature ? "quadrature" : "functional-calculus"}};

  const auto& rows = report.rows;
  auto strictly_decreasing = [&](auto field) {
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (!(field(rows[k]) < field(rows[k - 1]))) return false;
    }
    return true;
  };
  auto non_increasing = [&](auto field) {
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (!(field(rows[k]) <= field(rows[k - 1]))) return false;
    }
    return true;
  };
  const double target_abs = report.target ? std::abs(*report.target) : std::numeric_limits<double>::quiet_NaN();

  bool verdict_ok = false;
  if (rows_ok && !rows.empty()) {
    switch (s.kind) {
      case ScenarioKind::Compactness: {
        const bool compact = strictly_decreasing([](const ScanRow& r) { return r.sigma_mid; }) &&
                             rows.back().sigma_mid < s.tolerance;
        const bool non_compact = report.target && target_abs > 0.0 &&
                                 std::all_of(rows.begin(), rows.end(),
                                             [&](const ScanRow& r) { return r.sigma_mid > target_abs / 2.0; });
        report.verdict = compact ? "compact-consistent" : non_compact ? "non-compact-consistent" : "inconclusive";
        if (s.expect == "compact") {
          verdict_ok = compact;
        } else if (s.expect == "non-compact") {
          verdict_ok = non_compact;
        } else {
          verdict_ok = compact || non_compact;
        }
        break;
      }
      case ScenarioKind::EssentialSpectrum: {
        verdict_ok = report.target && non_increasing([](const ScanRow& r) { return r.eig_dist; }) &&
                     rows.back().eig_dist < s.tolerance;
        report.verdict = verdict_ok ? "eigenvalues-approach-target" : "inconclusive";
        break;
      }
      case ScenarioKind::EssentialNorm: {
        verdict_ok = report.target && std::abs(rows.back().sigma_q1 - target_abs) <= s.tolerance &&
                     std::abs(rows.back().sigma_mid - target_abs) <= s.tolerance;
        report.verdict = verdict_ok ? "converged-to-essential-norm" : "inconclusive";
        break;
      }
      case ScenarioKind::ClarkComparison: {
        const auto& phi = std::get<TrigPolynomial>(s.symbol);
        const auto bound = static_cast<std::size_t>(phi.analytic_degree() + phi.coanalytic_degree());
        verdict_ok = std::all_of(rows.begin(), rows.end(), [&](const ScanRow& r) {
          return r.rank <= bound && r.residual < s.tolerance;
        });
        report.calibration["rank_bound"] = bound;
        report.verdict = verdict_ok ? "normal-plus-finite-rank" : "bound-violated";
        break;
      }
      case ScenarioKind::PcReduction: {
        verdict_ok = non_increasing([](const ScanRow& r) { return r.sigma_mid; }) && rows.back().sigma_mid < s.tolerance;
        report.verdict = verdict_ok ? "remainder-compact-consistent" : "inconclusive";
        report.calibration["chi_order"] = s.chi_order;
        report.calibration["chi_l2_tail"] = chi_fejer_l2_error(s.chi_order);
        break;
      }
      case ScenarioKind::IdentitySuite:
        verdict_ok = true;
        report.verdict = "all-identities-pass";
        break;
    }
  } else {
    report.verdict = rows.empty() ? "empty" : "row-failure";
  }
  report.pass = rows_ok && nested_ok && verdict_ok;
  return report;
}

namespace detail {

inline void require_kind(const Scenario& s, ScenarioKind k) {
  if (s.kind != k) {
    throw Error(ErrorCode::BadScenario,
                "expected a " + std::string(to_string(k)) + " scenario, got " + std::string(to_string(s.kind)));
  }
}

}  // namespace detail

inline ScanReport compactness_scan(const Scenario& s) {
  detail::require_kind(s, ScenarioKind::Compactness);
  return run_scenario(s);
}

inline ScanReport essential_spectrum_scan(const Scenario& s) {
  detail::require_kind(s, ScenarioKind::EssentialSpectrum);
  return run_scenario(s);
}

inline ScanReport essential_norm_scan(const Scenario& s) {
  detail::require_kind(s, ScenarioKind::EssentialNorm);
  return run_scenario(s);
}

inline ScanReport clark_comparison(const Scenario& s) {
  detail::require_kind(s, ScenarioKind::ClarkComparison);
  return run_scenario(s);
}

inline ScanReport pc_reduction_scan(const Scenario& s) {
  detail::require_kind(s, ScenarioKind::PcReduction);
  return run_scenario(s);
}

inline ScanReport identity_suite(const Scenario& s) {
  detail::require_kind(s, ScenarioKind::IdentitySuite);
  return run_scenario(s);
}

// ---------------------------------------------------------------------------
// Output

inline constexpr std::string_view kScanCsvHeader =
    "degree,sigma_1,sigma_q1,sigma_mid,sigma_min,eig_dist,rank,residual,seconds";

inline std::string scan_csv(const ScanReport& report) {
  std::ostringstream out;
  out << kScanCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.degree << ',' << format_double(r.sigma_1) << ',' << format_double(r.sigma_q1) << ','
        << format_double(r.sigma_mid) << ',' << format_double(r.sigma_min) << ',' << format_double(r.eig_dist) << ','
        << r.rank << ',' << format_double(r.residual) << ',' << format_double(r.seconds) << '\n';
  }
  return out.str();
}

namespace detail {

/// JSON has no NaN or infinity; those become null.
inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace detail

inline Json scan_summary(const ScanReport& report, const Json& scenario_source = Json::object()) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row{{"degree", r.degree},
             {"ok", r.ok},
             {"sigma_1", detail::finite_or_null(r.sigma_1)},
             {"sigma_q1", detail::finite_or_null(r.sigma_q1)},
             {"sigma_mid", detail::finite_or_null(r.sigma_mid)},
             {"sigma_min", detail::finite_or_null(r.sigma_min)},
             {"eig_dist", detail::finite_or_null(r.eig_dist)},
             {"rank", r.rank},
             {"residual", detail::finite_or_null(r.residual)},
             {"seconds", r.seconds}};
    if (!r.error.empty()) row["error"] = r.error;
    Json sv = Json::array();
    for (double x : r.singular_values) sv.push_back(detail::finite_or_null(x));
    row["singular_values"] = sv;
    Json ev = Json::array();
    for (const auto& z : r.eigenvalues) ev.push_back(to_json(z));
    row["eigenvalues"] = ev;
    if (!r.identities.empty()) {
      Json ids = Json::array();
      for (const auto& v : r.identities) ids.push_back(to_json(v));
      row["identities"] = ids;
    }
    rows.push_back(std::move(row));
  }
  Json out{{"scenario", scenario_source.empty() ? Json(report.scenario) : scenario_source},
           {"kind", std::string(to_string(report.kind))},
           {"pass", report.pass},
           {"verdict", report.verdict},
           {"seed", report.seed},
           {"compression_residual", report.compression_residual},
           {"calibration", report.calibration},
           {"rows", rows}};
  if (report.accumulation) out["accumulation"] = to_json(*report.accumulation);
  if (report.target) out["target"] = to_json(*report.target);
  return out;
}

/// Reads back a summary written by scan_summary (identity reports are not
/// restored).
inline ScanReport scan_report_from_json(const Json& j) {
  auto number = [](const Json& row, const char* key) {
    const auto it = row.find(key);
    if (it == row.end() || it->is_null()) return std::numeric_limits<double>::quiet_NaN();
    return it->get<double>();
  };
  ScanReport r;
  try {
    r.kind = parse_scenario_kind(j.at("kind").get<std::string>());
    const Json& sc = j.at("scenario");
    r.scenario = sc.is_string() ? sc.get<std::string>() : sc.value("name", std::string(to_string(r.kind)));
    r.pass = j.value("pass", false);
    r.verdict = j.value("verdict", std::string());
    r.seed = j.value("seed", std::uint64_t{0});
    r.compression_residual = j.value("compression_residual", 0.0);
    if (j.contains("calibration")) r.calibration = j.at("calibration");
    if (j.contains("accumulation")) r.accumulation = complex_from_json(j.at("accumulation"));
    if (j.contains("target")) r.target = complex_from_json(j.at("target"));
    for (const auto& row : j.at("rows")) {
      ScanRow out;
      out.degree = row.at("degree").get<std::size_t>();
      out.ok = row.value("ok", true);
      out.sigma_1 = number(row, "sigma_1");
      out.sigma_q1 = number(row, "sigma_q1");
      out.sigma_mid = number(row, "sigma_mid");
      out.sigma_min = number(row, "sigma_min");
      out.eig_dist = number(row, "eig_dist");
      out.rank = row.value("rank", std::size_t{0});
      out.residual = number(row, "residual");
      out.seconds = number(row, "seconds");
      out.error = row.value("error", std::string());
      if (row.contains("singular_values")) {
        for (const auto& x : row.at("singular_values")) {
          out.singular_values.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
        }
      }
      if (row.contains("eigenvalues")) {
        for (const auto& z : row.at("eigenvalues")) out.eigenvalues.push_back(complex_from_json(z));
      }
      r.rows.push_back(std::move(out));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad scan summary: ") + e.what());
  }
  return r;
}

}  // namespace ttolab

#endif  // TTOLAB_HARNESS_HPP
