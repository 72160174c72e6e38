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

#ifndef TTOLAB_SYMBOLS_HPP
#define TTOLAB_SYMBOLS_HPP

// Symbols on the unit circle: trigonometric polynomials, piecewise
// continuous symbols built from rotated copies of the sawtooth
//
//   chi(e^{i theta}) = 1 - theta / (2 pi),   0 <= theta < 2 pi,
//
// over a trigonometric background, and raw grid samples.

#include <cmath>
#include <map>
#include <numbers>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ttolab/error.hpp"

namespace ttolab {

class TrigPolynomial {
 public:
  TrigPolynomial() = default;

  explicit TrigPolynomial(const std::map<int, Complex>& coeffs) {
    for (const auto& [n, c] : coeffs) {
      if (c != Complex{0.0, 0.0}) coeffs_[n] = c;
    }
  }

  static TrigPolynomial constant(Complex c) { return TrigPolynomial({{0, c}}); }
  static TrigPolynomial monomial(int n, Complex c = {1.0, 0.0}) { return TrigPolynomial({{n, c}}); }

  const std::map<int, Complex>& coefficients() const noexcept { return coeffs_; }

  Complex coefficient(int n) const {
    const auto it = coeffs_.find(n);
    return it == coeffs_.end() ? Complex{0.0, 0.0} : it->second;
  }

  /// d+ : highest positive frequency (0 if none).
  int analytic_degree() const { return coeffs_.empty() ? 0 : std::max(0, coeffs_.rbegin()->first); }
  /// d- : highest negative frequency in absolute value (0 if none).
  int coanalytic_degree() const { return coeffs_.empty() ? 0 : std::max(0, -coeffs_.begin()->first); }
  int bandwidth() const { return std::max(analytic_degree(), coanalytic_degree()); }
  bool is_analytic() const { return coanalytic_degree() == 0; }
  bool is_zero() const { return coeffs_.empty(); }

  Complex operator()(double t) const {
    Complex acc{0.0, 0.0};
    for (const auto& [n, c] : coeffs_) acc += c * std::polar(1.0, static_cast<double>(n) * t);
    return acc;
  }

  /// Value at a point z of the circle (z^{-n} taken as conj(z)^n).
  Complex at(Complex z) const {
    Complex acc{0.0, 0.0};
    for (const auto& [n, c] : coeffs_) {
      acc += c * (n >= 0 ? std::pow(z, n) : std::pow(std::conj(z), -n));
    }
    return acc;
  }

  /// conj(phi): coefficients conj(c_{-n}).
  TrigPolynomial conj() const {
    std::map<int, Complex> out;
    for (const auto& [n, c] : coeffs_) out[-n] = std::conj(c);
    return TrigPolynomial(out);
  }

  friend TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b) {
    std::map<int, Complex> out = a.coeffs_;
    for (const auto& [n, c] : b.coeffs_) out[n] += c;
    return TrigPolynomial(out);
  }

  friend TrigPolynomial operator-(const TrigPolynomial& a, const TrigPolynomial& b) {
    return a + (-1.0) * b;
  }

  friend TrigPolynomial operator*(Complex s, const TrigPolynomial& a) {
    std::map<int, Complex> out;
    for (const auto& [n, c] : a.coeffs_) out[n] = s * c;
    return TrigPolynomial(out);
  }

  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
    std::map<int, Complex> out;
    for (const auto& [n, c] : a.coeffs_) {
      for (const auto& [m, d] : b.coeffs_) out[n + m] += c * d;
    }
    return TrigPolynomial(out);
  }

 private:
  std::map<int, Complex> coeffs_;
};

/// A jump of size `height` (right limit minus left limit) at e^{i theta}.
struct Jump {
  double theta = 0.0;
  Complex height{1.0, 0.0};
};

namespace detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// theta reduced to [0, 2 pi).
inline double wrap_angle(double theta) {
  double s = std::fmod(theta, kTwoPi);
  if (s < 0.0) s += kTwoPi;
  if (s >= kTwoPi) s = 0.0;
  return s;
}

inline double sawtooth(double theta) { return 1.0 - wrap_angle(theta) / kTwoPi; }

}  // namespace detail

/// phi = background + sum_k height_k * chi(e^{i(theta - theta_k)}).
/// Each sawtooth term is continuous away from its own jump point.
class JumpSymbol {
 public:
  JumpSymbol() = default;

  JumpSymbol(TrigPolynomial background, std::vector<Jump> jumps) : background_(std::move(background)) {
    // merge coincident jump points, drop vanishing ones
    std::map<double, Complex> merged;
    for (const auto& j : jumps) merged[detail::wrap_angle(j.theta)] += j.height;
    for (const auto& [theta, height] : merged) {
      if (height != Complex{0.0, 0.0}) jumps_.push_back(Jump{theta, height});
    }
  }

  const TrigPolynomial& background() const noexcept { return background_; }
  const std::vector<Jump>& jumps() const noexcept { return jumps_; }

  /// Jump points evaluate to their right limit.
  Complex operator()(double t) const {
    Complex acc = background_(t);
    for (const auto& j : jumps_) acc += j.height * detail::sawtooth(t - j.theta);
    return acc;
  }

  /// (left limit, right limit) at e^{it}.
  std::pair<Complex, Complex> one_sided_limits(double t) const {
    const double s = detail::wrap_angle(t);
    Complex left = background_(t);
    Complex right = left;
    for (const auto& j : jumps_) {
      if (j.theta == s) {
        right += j.height;  // chi_+(1) = 1, chi_-(1) = 0
      } else {
        const Complex v = j.height * detail::sawtooth(s - j.theta);
        left += v;
        right += v;
      }
    }
    return {left, right};
  }

  friend JumpSymbol operator+(const JumpSymbol& a, const JumpSymbol& b) {
    std::vector<Jump> jumps = a.jumps_;
    jumps.insert(jumps.end(), b.jumps_.begin(), b.jumps_.end());
    return JumpSymbol(a.background_ + b.background_, jumps);
  }

  friend JumpSymbol operator*(Complex s, const JumpSymbol& a) {
    std::vector<Jump> jumps = a.jumps_;
    for (auto& j : jumps) j.height *= s;
    return JumpSymbol(s * a.background_, jumps);
  }

 private:
  TrigPolynomial background_;
  std::vector<Jump> jumps_;
};

inline JumpSymbol chi_symbol() { return JumpSymbol(TrigPolynomial{}, {Jump{0.0, {1.0, 0.0}}}); }

/// Values of a symbol on a specific uniform grid.
struct SampledSymbol {
  Eigen::VectorXcd values;
};

using Symbol = std::variant<TrigPolynomial, JumpSymbol, SampledSymbol>;

inline Complex eval_symbol(const TrigPolynomial& phi, double t) { return phi(t); }
inline Complex eval_symbol(const JumpSymbol& phi, double t) { return phi(t); }

/// Nearest grid sample.
inline Complex eval_symbol(const SampledSymbol& phi, double t) {
  const auto n = phi.values.size();
  if (n == 0) throw Error(ErrorCode::GridMismatch, "empty sampled symbol");
  const double pos = detail::wrap_angle(t) / detail::kTwoPi * static_cast<double>(n);
  auto j = static_cast<Eigen::Index>(std::llround(pos)) % n;
  return phi.values(j);
}

inline Complex eval_symbol(const Symbol& phi, double t) {
  return std::visit([t](const auto& s) { return eval_symbol(s, t); }, phi);
}

/// Fourier coefficient of chi: 1/2 at n = 0, 1/(2 pi i n) otherwise.
inline Complex chi_coefficient(int n) {
  if (n == 0) return {0.5, 0.0};
  return 1.0 / (Complex{0.0, detail::kTwoPi} * static_cast<double>(n));
}

/// Coefficients c_n, |n| <= d, in closed form.
inline TrigPolynomial fourier_coefficients(const JumpSymbol& phi, int d) {
  if (d < 1) throw Error(ErrorCode::BadDegree, "degree must be >= 1");
  std::map<int, Complex> out;
  for (const auto& [n, c] : phi.background().coefficients()) {
    if (std::abs(n) <= d) out[n] += c;
  }
  for (const auto& j : phi.jumps()) {
    for (int n = -d; n <= d; ++n) {
      out[n] += j.height * chi_coefficient(n) * std::polar(1.0, -static_cast<double>(n) * j.theta);
    }
  }
  return TrigPolynomial(out);
}

inline TrigPolynomial fourier_coefficients(const TrigPolynomial& phi, int d) {
  if (d < 1) throw Error(ErrorCode::BadDegree, "degree must be >= 1");
  std::map<int, Complex> out;
  for (const auto& [n, c] : phi.coefficients()) {
    if (std::abs(n) <= d) out[n] = c;
  }
  return TrigPolynomial(out);
}

/// Fejer mean of order d: weights (1 - |n|/(d+1)) on |n| <= d.
inline TrigPolynomial cesaro_mean(const TrigPolynomial& phi, int d) {
  if (d < 1) throw Error(ErrorCode::BadDegree, "degree must be >= 1");
  std::map<int, Complex> out;
  for (const auto& [n, c] : phi.coefficients()) {
    if (std::abs(n) <= d) out[n] = (1.0 - static_cast<double>(std::abs(n)) / (d + 1)) * c;
  }
  return TrigPolynomial(out);
}

inline TrigPolynomial cesaro_mean(const JumpSymbol& phi, int d) {
  return cesaro_mean(fourier_coefficients(phi, d), d);
}

/// Background kept exactly, sawtooth terms replaced by their order-d Fejer
/// means. This is how piecewise continuous symbols enter matrix functional
/// calculus.
inline TrigPolynomial smooth_jumps(const JumpSymbol& phi, int d) {
  return phi.background() + cesaro_mean(JumpSymbol(TrigPolynomial{}, phi.jumps()), d);
}

/// ||chi - Fejer_d(chi)||_{L^2(T, dt/2pi)}, exact.
inline double chi_fejer_l2_error(int d) {
  if (d < 1) throw Error(ErrorCode::BadDegree, "degree must be >= 1");
  // sum_{n>d} 1/n^2 = pi^2/6 - sum_{n<=d} 1/n^2; summed small terms first
  double head = 0.0;
  for (int n = d; n >= 1; --n) head += 1.0 / (static_cast<double>(n) * n);
  const double tail = std::numbers::pi * std::numbers::pi / 6.0 - head;
  const double dd = d;
  const double weighted = dd / ((dd + 1.0) * (dd + 1.0));
  return std::sqrt(2.0 * (weighted + tail)) / detail::kTwoPi;
}

struct PcReduction {
  Complex alpha;  // phi_+(1) - phi_-(1)
  Complex beta;   // phi_-(1)
  JumpSymbol remainder;  // phi - alpha chi - beta
};

/// Splits a symbol with a single jump at 1 as alpha chi + beta + remainder,
/// the remainder continuous at 1 and vanishing there.
inline PcReduction pc_reduction_coefficients(const JumpSymbol& phi) {
  if (phi.jumps().size() != 1 || phi.jumps().front().theta != 0.0) {
    throw Error(ErrorCode::WrongJumpSet, "symbol must have exactly one jump, located at 1");
  }
  PcReduction r;
  r.alpha = phi.jumps().front().height;  // right minus left limit, exactly
  r.beta = phi.one_sided_limits(0.0).first;
  r.remainder = phi + (-r.alpha) * chi_symbol() + JumpSymbol(TrigPolynomial::constant(-r.beta), {});
  return r;
}

}  // namespace ttolab

#endif  // TTOLAB_SYMBOLS_HPP
