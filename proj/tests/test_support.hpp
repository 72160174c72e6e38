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

#ifndef TTOLAB_TESTS_TEST_SUPPORT_HPP
#define TTOLAB_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "catch_amalgamated.hpp"
#include "ttolab/error.hpp"
#include "ttolab/inner.hpp"
#include "ttolab/symbols.hpp"

namespace ttolab::testing {

/// Zeros drawn uniformly from the disk of the given radius.
inline std::vector<Complex> random_zeros(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)));
  }
  return out;
}

inline Complex random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
}

inline BlaschkeProduct random_blaschke(std::mt19937_64& rng, std::size_t n, double radius = 0.9) {
  return make_blaschke(random_zeros(rng, n, radius), random_unimodular(rng));
}

/// Trig polynomial with coefficients in the unit square for -dm <= n <= dp.
inline TrigPolynomial random_trig(std::mt19937_64& rng, int dp, int dm) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::map<int, Complex> c;
  for (int n = -dm; n <= dp; ++n) c[n] = Complex{unit(rng), unit(rng)};
  return TrigPolynomial(c);
}

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex{gauss(rng), gauss(rng)};
  }
  return m;
}

/// Error code raised by f, failing the test when nothing is thrown.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no ttolab::Error thrown");
  return ErrorCode::IoError;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace ttolab::testing

#endif  // TTOLAB_TESTS_TEST_SUPPORT_HPP
