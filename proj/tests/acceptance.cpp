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

// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Usage: acceptance <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ttolab/cli.hpp"
#include "ttolab/harness.hpp"

namespace {

using namespace ttolab;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

std::vector<Complex> random_zeros(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> z;
  for (std::size_t k = 0; k < n; ++k) z.push_back(std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)));
  return z;
}

Complex random_unimodular(std::mt19937_64& rng) {
  return std::polar(1.0, std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng));
}

TrigPolynomial random_trig(std::mt19937_64& rng, int dp, int dm) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::map<int, Complex> c;
  for (int n = -dm; n <= dp; ++n) c[n] = Complex{unit(rng), unit(rng)};
  return TrigPolynomial(c);
}

std::size_t random_degree(std::mt19937_64& rng, std::size_t max) {
  return std::uniform_int_distribution<std::size_t>(1, max)(rng);
}

BlaschkeProduct monomial(std::size_t n) { return make_blaschke(std::vector<Complex>(n, Complex{0.0, 0.0})); }

/// z^n for n = 1..32 and 20 random products of degree <= 32, |a| <= 0.9.
std::vector<BlaschkeProduct> suite_products() {
  std::vector<BlaschkeProduct> out;
  for (std::size_t n = 1; n <= 32; ++n) out.push_back(monomial(n));
  std::mt19937_64 rng(20260101);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = random_degree(rng, 32);
    out.push_back(make_blaschke(random_zeros(rng, n, 0.9), random_unimodular(rng)));
  }
  return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

// 1. identity suite
void criterion_identities(Outcome& o, double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  double worst_ratio = 0.0;
  std::size_t checks = 0;
  for (const auto& u : suite_products()) {
    const ModelBasis basis = build_basis(u);
    for (IdentityName name : kAllIdentities) {
      const VerificationReport r = verify_identity(name, basis);
      o.require(r.pass, r.identity + " at degree " + std::to_string(u.degree()) + " residual " + sci(r.residual));
      worst_ratio = std::max(worst_ratio, r.residual / r.tolerance);
      ++checks;
    }
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds < 60.0, "runtime " + std::to_string(seconds) + " s");
  o.note << checks << " identity checks on 52 products, worst residual/tolerance " << sci(worst_ratio);
}

// 2. functional calculus vs quadrature
void criterion_methods(Outcome& o, double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto u = make_blaschke(random_zeros(rng, random_degree(rng, 16), 0.9), random_unimodular(rng));
    const int dp = std::uniform_int_distribution<int>(0, 8)(rng);
    const int dm = std::uniform_int_distribution<int>(0, 8)(rng);
    const auto phi = random_trig(rng, dp, dm);
    const ModelBasis basis = build_basis(u);
    const auto fc = truncated_toeplitz(basis, Symbol{phi}, Method::FunctionalCalculus);
    const auto qd = truncated_toeplitz(basis, Symbol{phi}, Method::Quadrature);
    worst = std::max(worst, max_abs(fc.entries - qd.entries));
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(worst < 1e-8, "max entry difference " + sci(worst));
  o.require(seconds < 30.0, "runtime " + std::to_string(seconds) + " s");
  o.note << "50 pairs, max entry difference " << sci(worst);
}

// 3. eigenvalues of A_z are the zeros. A_z is the closed-form compressed
// shift; the quadrature-tabulated matrix is reported alongside, its accuracy
// being limited by eigenvalue condition numbers (up to ~1e10 at degree 32).
void criterion_spectrum(Outcome& o, double&) {
  double worst = 0.0;
  double worst_quad = 0.0;
  std::size_t quad_ok = 0;
  std::size_t separated = 0;
  std::size_t repeated = 0;
  for (const auto& u : suite_products()) {
    const double d = matching_distance(eigenvalues(compressed_shift(u)).eigenvalues, u.zeros());
    worst = std::max(worst, d);
    if (min_separation(u.zeros()) >= 1e-3) {
      ++separated;
      o.require(d < 1e-8, "degree " + std::to_string(u.degree()) + " distance " + sci(d));
      const double dq = matching_distance(eigenvalues(compressed_shift(build_basis(u))).eigenvalues, u.zeros());
      worst_quad = std::max(worst_quad, dq);
      if (dq < 1e-8) ++quad_ok;
    } else {
      ++repeated;
      o.require(d < 1e-8, "repeated zeros at degree " + std::to_string(u.degree()) + " distance " + sci(d));
    }
  }
  o.note << separated << " separated and " << repeated << " repeated-zero products, max matching distance "
         << sci(worst) << "; quadrature-tabulated A_z within 1e-8 for " << quad_ok << " of " << separated
         << " (max " << sci(worst_quad) << ")";
}

// 4. Clark suite
void criterion_clark(Outcome& o, double&) {
  std::mt19937_64 rng(4);
  double unitarity = 0.0;
  double point = 0.0;
  double roots = 0.0;
  for (const auto& u : suite_products()) {
    const bool mono = u.radius() == 0.0;
    const Complex alpha = mono ? Complex{1.0, 0.0} : random_unimodular(rng);
    const ModelBasis basis = build_basis(u);
    const auto uc = clark_unitary(basis, alpha).entries;
    const auto n = uc.rows();
    const double un = (uc * uc.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm();
    unitarity = std::max(unitarity, un);
    o.require(un < 1e-8, "unitarity " + sci(un));
    const std::size_t rank = numerical_rank(Eigen::MatrixXcd(uc - compressed_shift(basis).entries));
    o.require(rank == 1, "rank(U - A_z) = " + std::to_string(rank) + " at degree " + std::to_string(n));
    const SpectralResult eig = eigenvalues(uc);
    for (const Complex z : eig.eigenvalues) {
      const double r = std::abs(eval_inner(u, z / std::abs(z)) - alpha);
      point = std::max(point, r);
      o.require(r < 1e-6, "|u(zeta) - alpha| = " + sci(r));
    }
    const Eigen::VectorXcd k0 = kernel_coordinates(u);
    const std::size_t krylov = numerical_rank(krylov_matrix(uc, k0));
    o.require(krylov == static_cast<std::size_t>(n), "Krylov rank " + std::to_string(krylov) + " of " + std::to_string(n));
    if (mono) {
      std::vector<Complex> unity;
      for (Eigen::Index k = 0; k < n; ++k) unity.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n));
      const double d = matching_distance(eig.eigenvalues, unity);
      roots = std::max(roots, d);
      o.require(d < 1e-8, "roots of unity distance " + sci(d) + " at n = " + std::to_string(n));
    }
  }
  o.note << "52 products: unitarity " << sci(unitarity) << ", Clark points " << sci(point) << ", roots of unity "
         << sci(roots);
}

// 5. Clark functional gap
void criterion_gap(Outcome& o, double&) {
  std::mt19937_64 rng(5);
  double normality = 0.0;
  std::size_t max_rank = 0;
  for (int k = 0; k < 20; ++k) {
    const auto u = make_blaschke(random_zeros(rng, random_degree(rng, 24), 0.9), random_unimodular(rng));
    const int total = std::uniform_int_distribution<int>(1, 6)(rng);
    const int dp = std::uniform_int_distribution<int>(0, total)(rng);
    const auto phi = random_trig(rng, dp, total - dp);
    const Complex alpha = random_unimodular(rng);
    const auto gap = clark_functional_gap(u, alpha, phi);
    const auto f_u = apply_trig(clark_unitary(u, alpha).entries, phi);
    const double nd = (f_u * f_u.adjoint() - f_u.adjoint() * f_u).norm();
    const std::size_t rank = numerical_rank(gap);
    const auto bound = static_cast<std::size_t>(phi.analytic_degree() + phi.coanalytic_degree());
    normality = std::max(normality, nd);
    max_rank = std::max(max_rank, rank);
    o.require(rank <= bound, "rank " + std::to_string(rank) + " > " + std::to_string(bound));
    o.require(nd < 1e-8, "normality defect " + sci(nd));
  }
  o.note << "20 cases, max rank " << max_rank << ", max normality defect " << sci(normality);
}

// 6. Hankel semicommutator
void criterion_hankel(Outcome& o, double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto u = make_blaschke(random_zeros(rng, random_degree(rng, 8), 0.9), random_unimodular(rng));
    const int bp = std::uniform_int_distribution<int>(0, 4)(rng);
    const int bm = std::uniform_int_distribution<int>(0, 4)(rng);
    const auto phi = random_trig(rng, bp, bm);
    const auto psi = random_trig(rng, std::uniform_int_distribution<int>(0, 4)(rng), std::uniform_int_distribution<int>(0, 4)(rng));
    const ModelBasis basis = build_basis(u);
    const auto base = hankel_semicommutator(basis, phi, psi);
    const auto doubled = hankel_semicommutator(basis, phi, psi, 2 * base.truncation);
    worst = std::max(worst, base.residual);
    o.require(base.residual < 1e-6, "residual " + sci(base.residual));
    o.require(doubled.residual <= std::max(base.residual, kHankelRoundoffFloor),
              "refinement " + sci(doubled.residual) + " > " + sci(base.residual));
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds < 30.0, "runtime " + std::to_string(seconds) + " s");
  o.note << "10 cases, max relative residual " << sci(worst);
}

ScanReport scan(const std::string& json) { return run_scenario(scenario_from_json(Json::parse(json))); }

std::string mids(const ScanReport& r, double ScanRow::*field) {
  std::ostringstream s;
  s.precision(4);
  for (const auto& row : r.rows) s << (s.tellp() > 0 ? " " : "") << row.*field;
  return s.str();
}

// 7. compactness dichotomy
void criterion_compactness(Outcome& o, double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  const auto minus = scan(R"({"kind": "compactness", "symbol": {"coeffs": {"1": [1, 0], "0": [-1, 0]}}})");
  const auto plus = scan(R"({"kind": "compactness", "symbol": {"coeffs": {"1": [1, 0], "0": [1, 0]}}})");
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(minus.rows.size() == 6 && plus.rows.size() == 6, "sweep length");
  for (std::size_t k = 0; k < minus.rows.size(); ++k) {
    o.require(minus.rows[k].ok && plus.rows[k].ok, "row failure");
    if (k > 0) o.require(minus.rows[k].sigma_mid < minus.rows[k - 1].sigma_mid, "z-1 not strictly decreasing");
    o.require(plus.rows[k].sigma_mid > 1.0, "z+1 sigma_mid <= 1");
  }
  o.require(!minus.rows.empty() && minus.rows.back().sigma_mid < 0.05, "z-1 final sigma_mid >= 0.05");
  o.require(minus.compression_residual <= kCompressionTolerance && plus.compression_residual <= kCompressionTolerance,
            "compression consistency");
  o.require(seconds < 120.0, "runtime");
  o.note << "z-1: " << mids(minus, &ScanRow::sigma_mid) << "; z+1: " << mids(plus, &ScanRow::sigma_mid);
}

// 8. essential spectrum and norm
void criterion_essential(Outcome& o, double&) {
  const auto sq = scan(R"({"kind": "essential-spectrum", "symbol": {"coeffs": {"2": [1, 0]}}})");
  const auto plus = scan(R"({"kind": "essential-norm", "symbol": {"coeffs": {"1": [1, 0], "0": [1, 0]}}})");
  for (std::size_t k = 0; k < sq.rows.size(); ++k) {
    o.require(sq.rows[k].ok, "row failure");
    // distances reach exactly 0 once 1 - |a| underflows, hence non-strict
    if (k > 0) o.require(sq.rows[k].eig_dist <= sq.rows[k - 1].eig_dist, "z^2 distance increased");
  }
  o.require(!sq.rows.empty() && sq.rows.back().eig_dist < 0.05, "z^2 final distance >= 0.05");
  o.require(!plus.rows.empty() && std::abs(plus.rows.back().sigma_mid - 2.0) < 0.1, "z+1 sigma_mid not within 0.1 of 2");
  o.note << "z^2 distances: " << mids(sq, &ScanRow::eig_dist) << "; z+1 final sigma_mid "
         << (plus.rows.empty() ? 0.0 : plus.rows.back().sigma_mid);
}

// 9. piecewise continuous reduction
void criterion_pc(Outcome& o, double&) {
  const auto chi = scan(R"({"kind": "pc-reduction", "symbol": {"type": "chi"}, "chi_order": 256})");
  const auto bg = scan(
      R"({"kind": "pc-reduction", "chi_order": 256, "symbol": {"type": "chi", "background": {"1": [1, 0], "0": [-1, 0]}}})");
  double worst = 0.0;
  for (const auto& row : chi.rows) {
    o.require(row.ok, "row failure");
    worst = std::max(worst, row.sigma_1);
  }
  o.require(!chi.rows.empty() && worst < 1e-4, "||R_n|| for chi = " + sci(worst));
  for (std::size_t k = 0; k < bg.rows.size(); ++k) {
    o.require(bg.rows[k].ok, "row failure");
    if (k > 0) o.require(bg.rows[k].sigma_mid <= bg.rows[k - 1].sigma_mid, "chi + (z-1) sigma_mid increased");
  }
  o.require(!bg.rows.empty() && bg.rows.back().sigma_mid < 0.1, "chi + (z-1) final sigma_mid >= 0.1");
  o.note << "chi: max ||R_n|| " << sci(worst) << "; chi + (z-1): " << mids(bg, &ScanRow::sigma_mid);
}

// 10. kernel density normalization
void criterion_density(Outcome& o, double&) {
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto u = make_blaschke(random_zeros(rng, random_degree(rng, 16), 0.9), random_unimodular(rng));
    const Complex lambda = random_zeros(rng, 1, 0.9)[0];
    const double err = std::abs(kernel_density_grid(build_basis(u), lambda).mean() - 1.0);
    worst = std::max(worst, err);
  }
  o.require(worst < 1e-8, "grid mean error " + sci(worst));
  o.note << "20 cases, max |mean - 1| " << sci(worst);
}

// 11. determinism of repeated scans
void criterion_determinism(Outcome& o, double&, const fs::path& scratch) {
  const fs::path config = scratch / "determinism.json";
  fs::create_directories(scratch);
  std::ofstream(config) << R"({"name": "determinism", "kind": "clark-comparison", "alpha": [0, 1],
    "symbol": {"coeffs": {"2": [1, 0], "-1": [1, 0]}}, "threads": 2})";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  for (const char* run : {"run1", "run2"}) {
    std::ostringstream sink;
    const int code = cli::run({"scan", "--config", config.string(), "--out-dir", (scratch / run).string()}, sink, sink);
    o.require(code == cli::kExitPass, std::string(run) + " exit " + std::to_string(code));
  }
  for (const char* ext : {".csv", ".json"}) {
    const std::string a = slurp(scratch / "run1" / (std::string("determinism") + ext));
    const std::string b = slurp(scratch / "run2" / (std::string("determinism") + ext));
    o.require(!a.empty() && a == b, std::string(ext) + " differs");
  }
  o.note << "two scan runs, CSV and JSON byte-identical";
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "ttolab_acceptance";
  using Check = std::function<void(Outcome&, double&)>;
  const std::vector<std::pair<std::string, Check>> criteria = {
      {"identity suite", criterion_identities},
      {"functional calculus vs quadrature", criterion_methods},
      {"eigenvalues of A_z match the zeros", criterion_spectrum},
      {"Clark unitaries", criterion_clark},
      {"Clark functional gap", criterion_gap},
      {"Hankel semicommutator", criterion_hankel},
      {"compactness dichotomy", criterion_compactness},
      {"essential spectrum and norm", criterion_essential},
      {"piecewise continuous reduction", criterion_pc},
      {"kernel density normalization", criterion_density},
      {"determinism", [&](Outcome& o, double& s) { criterion_determinism(o, s, scratch); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    double seconds = -1.0;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o, seconds);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    if (seconds < 0.0) seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (k + 1) << ": " << criteria[k].first << " -- "
              << o.note.str() << " [" << std::fixed << std::setprecision(1) << seconds << " s]" << std::defaultfloat
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
