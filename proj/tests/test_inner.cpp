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
#include <vector>

#include "catch_amalgamated.hpp"
#include "test_support.hpp"
#include "ttolab/inner.hpp"

using namespace ttolab;
using ttolab::testing::code_of;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("single zero at the origin is the identity map", "[inner]") {
  const auto u = make_blaschke({Complex{0.0, 0.0}});
  for (Complex z : {Complex{0.3, -0.2}, Complex{-0.7, 0.1}, Complex{0.0, 0.9}}) {
    CHECK(std::abs(eval_inner(u, z) - z) < 1e-15);
  }
  const auto u2 = make_blaschke({0.0, 0.0});
  CHECK(std::abs(eval_inner(u2, 0.5) - 0.25) < 1e-15);
}

TEST_CASE("zeros vanish and the boundary is unimodular", "[inner]") {
  const auto u = make_blaschke({0.5});
  CHECK(std::abs(eval_inner(u, 0.5)) == 0.0);
  CHECK(std::abs(eval_inner(u, 1.0) - 1.0) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = testing::random_blaschke(rng, 1 + trial, 0.95);
    for (int k = 0; k < 50; ++k) {
      CHECK(std::abs(std::abs(eval_inner(v, std::polar(1.0, angle(rng)))) - 1.0) < 1e-12);
      const Complex inside = std::polar(0.999 * std::sqrt(angle(rng) / (2.0 * std::numbers::pi)), angle(rng));
      CHECK(std::abs(eval_inner(v, inside)) < 1.0);
    }
  }
}

TEST_CASE("construction errors", "[inner]") {
  CHECK(code_of([] { make_blaschke({Complex{1.0, 0.0}}); }) == ErrorCode::ZeroOutsideDisk);
  CHECK(code_of([] { make_blaschke({Complex{0.0, 1.0 - 1e-13}}); }) == ErrorCode::ZeroOutsideDisk);
  CHECK(code_of([] { make_blaschke({0.5}, Complex{1.1, 0.0}); }) == ErrorCode::BadPhase);
  CHECK(code_of([] { make_blaschke(std::vector<Complex>{}); }) == ErrorCode::EmptyProduct);
  const auto u = make_blaschke({0.5});
  CHECK(code_of([&] { eval_inner(u, 2.0); }) == ErrorCode::PoleHit);
  CHECK_NOTHROW(make_blaschke({Complex{0.0, 1.0 - 1e-11}}));
}

TEST_CASE("conditioning warning near the circle", "[inner]") {
  CHECK_FALSE(make_blaschke({0.9}).conditioning_warning().has_value());
  CHECK(make_blaschke({1.0 - 1e-7}).conditioning_warning().has_value());
}

TEST_CASE("derivative matches central differences", "[inner]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const auto u = testing::random_blaschke(rng, 7, 0.9);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const Complex z = std::polar(1.0, angle(rng));
    const Complex fd = (eval_inner(u, z + h) - eval_inner(u, z - h)) / (2.0 * h);
    const Complex d = eval_inner_with_derivative(u, z).derivative;
    CHECK(std::abs(fd - d) <= 1e-6 * std::abs(d));
  }
  // on the circle |u'(zeta)| = sum (1 - |a|^2) / |zeta - a|^2
  const Complex zeta = std::polar(1.0, 0.4);
  double expected = 0.0;
  for (std::size_t j = 0; j < u.degree(); ++j) expected += u.complements()[j] / std::norm(zeta - u.zeros()[j]);
  CHECK_THAT(std::abs(eval_inner_with_derivative(u, zeta).derivative), WithinRel(expected, 1e-12));
}

TEST_CASE("value at the origin", "[inner]") {
  const auto u = make_blaschke({0.5, Complex{0.0, -0.3}}, Complex{0.0, 1.0});
  CHECK(std::abs(inner_at_origin(u) - eval_inner(u, 0.0)) < 1e-16);
}

TEST_CASE("accumulation families", "[inner]") {
  const auto f = accumulation_family(1.0, 1.0 / 3.0, {2});
  const auto m = f.member(0);
  REQUIRE(m.degree() == 2);
  CHECK_THAT(m.zeros()[0].real(), WithinAbs(2.0 / 3.0, 1e-16));
  CHECK_THAT(m.zeros()[1].real(), WithinAbs(8.0 / 9.0, 1e-16));

  const auto g = accumulation_family(-1.0, 0.5, {3});
  const auto z = g.member(0).zeros();
  CHECK(z[0] == Complex{-0.5, 0.0});
  CHECK(z[1] == Complex{-0.75, 0.0});
  CHECK(z[2] == Complex{-0.875, 0.0});

  const auto h = accumulation_family(1.0, 0.5, {1, 2});
  CHECK(h.member(0).zeros()[0] == h.member(1).zeros()[0]);

  // nesting is exact for the default sweep, including zeros that round to 1
  const auto d = accumulation_family(1.0, 1.0 / 3.0, {8, 16, 24, 32, 40, 48});
  const auto big = d.member(5);
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    const auto small = d.member(k);
    for (std::size_t j = 0; j < small.degree(); ++j) {
      CHECK(small.zeros()[j] == big.zeros()[j]);
      CHECK(small.complements()[j] == big.complements()[j]);
    }
  }
  // complements stay exact where the zero itself rounds to 1
  CHECK(big.zeros()[47] == Complex{1.0, 0.0});
  CHECK_THAT(big.complements()[47], WithinRel(2.0 * std::pow(3.0, -48.0), 1e-12));
}

TEST_CASE("family errors", "[inner]") {
  CHECK(code_of([] { accumulation_family(1.0, 1.5, {2}); }) == ErrorCode::BadRate);
  CHECK(code_of([] { accumulation_family(1.0, 0.0, {2}); }) == ErrorCode::BadRate);
  CHECK(code_of([] { accumulation_family(Complex{0.5, 0.0}, 0.5, {2}); }) == ErrorCode::BadPoint);
  CHECK(code_of([] { accumulation_family(1.0, 0.5, {3, 2}); }) == ErrorCode::BadDegree);
}

TEST_CASE("spectrum of products and families", "[inner]") {
  const auto u = make_blaschke({0.0, 0.0, 0.0});
  const auto s = inner_spectrum(u);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == Complex{0.0, 0.0});

  const auto v = make_blaschke({0.3, Complex{0.0, 0.3}});
  CHECK(inner_spectrum(v).size() == 2);
  CHECK(circle_part(inner_spectrum(v)).empty());

  const auto f = accumulation_family(1.0, 0.5, {3});
  const auto fs = inner_spectrum(f);
  REQUIRE(fs.size() == 4);
  CHECK(fs[0] == Complex{0.5, 0.0});
  CHECK(fs[1] == Complex{0.75, 0.0});
  CHECK(fs[2] == Complex{0.875, 0.0});
  CHECK(fs[3] == Complex{1.0, 0.0});
  const auto boundary = circle_part(fs);
  REQUIRE(boundary.size() == 1);
  CHECK(boundary[0] == Complex{1.0, 0.0});
}

TEST_CASE("prefix and fingerprint", "[inner]") {
  const auto u = make_blaschke({0.1, 0.2, 0.3});
  const auto p = u.prefix(2);
  CHECK(p.degree() == 2);
  CHECK(p.zeros()[1] == Complex{0.2, 0.0});
  CHECK(u.fingerprint() == make_blaschke({0.1, 0.2, 0.3}).fingerprint());
  CHECK(u.fingerprint() != make_blaschke({0.1, 0.3, 0.2}).fingerprint());
}
