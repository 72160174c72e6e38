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

#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "test_support.hpp"
#include "ttolab/symbols.hpp"

using namespace ttolab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using ttolab::testing::code_of;

namespace {

constexpr double kPi = std::numbers::pi;

const TrigPolynomial kZ = TrigPolynomial::monomial(1);
const TrigPolynomial kZbar = TrigPolynomial::monomial(-1);

/// Composite Simpson rule for int_0^{2 pi} (1 - t / 2 pi) e^{-int} dt / 2 pi.
/// The integrand is smooth on the open interval, so no splitting is needed
/// beyond the endpoints.
Complex chi_coefficient_by_quadrature(int n) {
  const int m = 40000;
  const double h = 2.0 * kPi / m;
  Complex acc{0.0, 0.0};
  for (int j = 0; j <= m; ++j) {
    const double t = j * h;
    const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    acc += w * (1.0 - t / (2.0 * kPi)) * std::polar(1.0, -n * t);
  }
  return acc * h / 3.0 / (2.0 * kPi);
}

}  // namespace

TEST_CASE("trigonometric polynomial evaluation", "[symbols]") {
  const auto phi = kZ + kZbar;
  CHECK(std::abs(phi(0.0) - 2.0) < 1e-15);
  CHECK(std::abs(phi(kPi / 2.0)) < 1e-15);
  const auto psi = kZ * kZ + Complex{0.5, 0.0} * kZbar;
  const Complex z = std::polar(1.0, 0.7);
  CHECK(std::abs(psi(0.7) - (z * z + 0.5 * std::conj(z))) < 1e-15);
  CHECK(std::abs(psi.at(z) - psi(0.7)) < 1e-15);
  CHECK(psi.analytic_degree() == 2);
  CHECK(psi.coanalytic_degree() == 1);
  CHECK(psi.bandwidth() == 2);
  CHECK_FALSE(psi.is_analytic());
  CHECK((kZ * kZbar).coefficients().size() == 1);
  CHECK(std::abs((kZ * kZbar).coefficient(0) - 1.0) < 1e-16);
  CHECK((kZ - kZ).is_zero());
  const auto c = Complex{0.0, 2.0} * kZ;
  CHECK(std::abs(c.conj().coefficient(-1) - Complex{0.0, -2.0}) < 1e-16);
}

TEST_CASE("chi values and one-sided limits", "[symbols]") {
  const auto chi = chi_symbol();
  CHECK_THAT(chi(kPi).real(), WithinAbs(0.5, 1e-15));
  CHECK_THAT(chi(0.0).real(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(chi(kPi / 2.0).real(), WithinAbs(0.75, 1e-15));
  const auto [left, right] = chi.one_sided_limits(0.0);
  CHECK(left == Complex{0.0, 0.0});
  CHECK(right == Complex{1.0, 0.0});
  CHECK(std::abs(eval_symbol(Symbol{chi}, kPi) - 0.5) < 1e-15);
}

TEST_CASE("jump symbols merge coincident jumps", "[symbols]") {
  const JumpSymbol a(TrigPolynomial{}, {Jump{0.0, 1.0}, Jump{2.0 * kPi, 2.0}, Jump{1.0, 1.0}, Jump{1.0, -1.0}});
  REQUIRE(a.jumps().size() == 1);
  CHECK(a.jumps()[0].height == Complex{3.0, 0.0});
}

TEST_CASE("sampled symbols use the nearest sample", "[symbols]") {
  SampledSymbol s;
  s.values = Eigen::VectorXcd::LinSpaced(4, 0.0, 3.0);
  CHECK(eval_symbol(s, 0.0) == Complex{0.0, 0.0});
  CHECK(eval_symbol(s, kPi) == Complex{2.0, 0.0});
  CHECK(eval_symbol(s, 2.0 * kPi - 0.01) == Complex{0.0, 0.0});
  CHECK(code_of([] { eval_symbol(SampledSymbol{}, 0.0); }) == ErrorCode::GridMismatch);
}

TEST_CASE("chi Fourier coefficients against numerical integration", "[symbols]") {
  for (int n = -12; n <= 12; ++n) {
    CHECK(std::abs(chi_coefficient(n) - chi_coefficient_by_quadrature(n)) < 1e-10);
  }
  const auto f = fourier_coefficients(chi_symbol(), 12);
  CHECK(std::abs(f.coefficient(3) - chi_coefficient(3)) < 1e-16);
  // a jump at theta shifts coefficients by e^{-i n theta}
  const JumpSymbol shifted(TrigPolynomial{}, {Jump{kPi, 1.0}});
  const auto g = fourier_coefficients(shifted, 4);
  CHECK(std::abs(g.coefficient(1) + chi_coefficient(1)) < 1e-15);
  CHECK(std::abs(g.coefficient(2) - chi_coefficient(2)) < 1e-15);
  CHECK(code_of([] { fourier_coefficients(chi_symbol(), 0); }) == ErrorCode::BadDegree);
}

TEST_CASE("Parseval for chi and trig polynomials", "[symbols]") {
  // ||chi||^2 = int_0^1 (1 - s)^2 ds = 1/3
  const int d = 20000;
  double head = 0.0;
  for (const auto& [n, c] : fourier_coefficients(chi_symbol(), d).coefficients()) head += std::norm(c);
  CHECK_THAT(head, WithinAbs(1.0 / 3.0, 1e-5));

  std::mt19937_64 rng(21);
  const auto p = testing::random_trig(rng, 5, 3);
  double coeffs = 0.0;
  for (const auto& [n, c] : p.coefficients()) coeffs += std::norm(c);
  double samples = 0.0;
  const int m = 64;
  for (int j = 0; j < m; ++j) samples += std::norm(p(2.0 * kPi * j / m));
  CHECK_THAT(samples / m, WithinRel(coeffs, 1e-13));
}

TEST_CASE("Cesaro means", "[symbols]") {
  CHECK(std::abs(cesaro_mean(kZ, 1).coefficient(1) - 0.5) < 1e-16);
  CHECK(std::abs(cesaro_mean(TrigPolynomial::constant(3.0), 4).coefficient(0) - 3.0) < 1e-16);
  CHECK(cesaro_mean(TrigPolynomial::monomial(5), 4).is_zero());
  const auto chi2 = cesaro_mean(chi_symbol(), 2);
  CHECK(std::abs(chi2.coefficient(0) - 0.5) < 1e-16);
  CHECK(std::abs(chi2.coefficient(2) - chi_coefficient(2) / 3.0) < 1e-16);
}

TEST_CASE("Fejer error at continuity points", "[symbols]") {
  const auto chi = chi_symbol();
  // t = pi is a symmetry point where every Fejer mean is exact
  CHECK(std::abs(cesaro_mean(chi, 16)(kPi) - 0.5) < 1e-15);
  for (double t : {kPi / 2.0, 1.0, 4.0}) {
    double prev = std::abs(cesaro_mean(chi, 16)(t) - chi(t));
    for (int d : {64, 256, 1024}) {
      const double err = std::abs(cesaro_mean(chi, d)(t) - chi(t));
      CHECK(err <= 0.5 * prev);
      prev = err;
    }
  }
  // Fejer means of chi stay within [0, 1]
  const auto f = cesaro_mean(chi, 64);
  for (int j = 0; j < 200; ++j) {
    const double v = f(2.0 * kPi * j / 200).real();
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("exact L2 Fejer error of chi", "[symbols]") {
  for (int d : {4, 16, 64}) {
    const auto f = cesaro_mean(chi_symbol(), d);
    const int m = 1 << 18;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double t = 2.0 * kPi * (j + 0.5) / m;
      acc += std::norm(f(t) - chi_symbol()(t));
    }
    CHECK_THAT(chi_fejer_l2_error(d), WithinRel(std::sqrt(acc / m), 1e-4));
  }
}

TEST_CASE("smooth_jumps keeps the background exactly", "[symbols]") {
  const JumpSymbol phi(kZ - TrigPolynomial::constant(1.0), {Jump{0.0, 1.0}});
  const auto s = smooth_jumps(phi, 8);
  CHECK(std::abs(s.coefficient(1) - (1.0 + (1.0 - 1.0 / 9.0) * chi_coefficient(1))) < 1e-15);
  CHECK(std::abs(s.coefficient(0) - (-1.0 + 0.5)) < 1e-15);
}

TEST_CASE("piecewise continuous reduction", "[symbols]") {
  {
    const auto r = pc_reduction_coefficients(chi_symbol());
    CHECK(r.alpha == Complex{1.0, 0.0});
    CHECK(r.beta == Complex{0.0, 0.0});
    CHECK(r.remainder.jumps().empty());
    CHECK(r.remainder.background().is_zero());
  }
  {
    const auto phi = Complex{2.0, 0.0} * chi_symbol() + JumpSymbol(TrigPolynomial::constant(3.0), {});
    const auto r = pc_reduction_coefficients(phi);
    CHECK(r.alpha == Complex{2.0, 0.0});
    CHECK(r.beta == Complex{3.0, 0.0});
  }
  {
    // phi_+(1) = 1, phi_-(1) = -1
    const auto phi = Complex{2.0, 0.0} * chi_symbol() + JumpSymbol(TrigPolynomial::constant(-1.0), {});
    const auto [left, right] = phi.one_sided_limits(0.0);
    CHECK(left == Complex{-1.0, 0.0});
    CHECK(right == Complex{1.0, 0.0});
    const auto r = pc_reduction_coefficients(phi);
    CHECK(r.alpha == Complex{2.0, 0.0});
    CHECK(r.beta == Complex{-1.0, 0.0});
  }
  {
    const JumpSymbol phi(kZ - TrigPolynomial::constant(1.0), {Jump{0.0, 1.0}});
    const auto r = pc_reduction_coefficients(phi);
    CHECK(r.remainder.jumps().empty());
    for (double t : {-0.02, -0.001, 0.0, 0.001, 0.02}) CHECK(std::abs(r.remainder(t)) < 0.05);
  }
  CHECK(code_of([] { pc_reduction_coefficients(JumpSymbol(kZ, {})); }) == ErrorCode::WrongJumpSet);
  CHECK(code_of([] { pc_reduction_coefficients(JumpSymbol(kZ, {Jump{1.0, 1.0}})); }) == ErrorCode::WrongJumpSet);
  CHECK(code_of([] {
          pc_reduction_coefficients(JumpSymbol(kZ, {Jump{0.0, 1.0}, Jump{2.0, 1.0}}));
        }) == ErrorCode::WrongJumpSet);
}
