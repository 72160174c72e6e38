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

#ifndef TTOLAB_INNER_HPP
#define TTOLAB_INNER_HPP

// Finite Blaschke products
//
//   u(z) = phase * prod_j (z - a_j) / (1 - conj(a_j) z)
//
// and nested families whose zeros (1 - r^j) xi accumulate at a boundary
// point xi. Zero order is part of the data: it fixes the model-space basis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttolab/error.hpp"

namespace ttolab {

inline constexpr double kZeroRadiusLimit = 1e-12;   // reject |a| >= 1 - this
inline constexpr double kConditioningRadius = 1e-6;  // warn above |a| > 1 - this
inline constexpr double kPhaseTolerance = 1e-12;
inline constexpr double kPoleTolerance = 1e-13;

class BlaschkeProduct {
 public:
  const std::vector<Complex>& zeros() const noexcept { return zeros_; }

  /// 1 - |a_j|^2 for every zero. Exact for family members, whose zeros may
  /// sit closer to the circle than a double can resolve.
  const std::vector<double>& complements() const noexcept { return complements_; }

  Complex phase() const noexcept { return phase_; }
  std::size_t degree() const noexcept { return zeros_.size(); }

  /// Largest |a_j|.
  double radius() const {
    double r = 0.0;
    for (const auto& a : zeros_) r = std::max(r, std::abs(a));
    return r;
  }

  /// Smallest complement 1 - |a_j|^2, i.e. how close the zeros come to T.
  double min_complement() const {
    double c = 1.0;
    for (double x : complements_) c = std::min(c, x);
    return c;
  }

  /// Set when some zero has |a| > 1 - 1e-6.
  std::optional<std::string> conditioning_warning() const {
    for (std::size_t j = 0; j < zeros_.size(); ++j) {
      // 1 - |a| = c / (1 + |a|)
      if (complements_[j] / (1.0 + std::abs(zeros_[j])) < kConditioningRadius) {
        return "zero #" + std::to_string(j) + " lies within 1e-6 of the unit circle; "
               "quadrature-based quantities will be ill-conditioned";
      }
    }
    return std::nullopt;
  }

  /// The product of the first m factors (same phase).
  BlaschkeProduct prefix(std::size_t m) const {
    if (m == 0 || m > degree()) throw Error(ErrorCode::EmptyProduct, "prefix length out of range");
    BlaschkeProduct p;
    p.zeros_.assign(zeros_.begin(), zeros_.begin() + static_cast<std::ptrdiff_t>(m));
    p.complements_.assign(complements_.begin(), complements_.begin() + static_cast<std::ptrdiff_t>(m));
    p.phase_ = phase_;
    return p;
  }

  /// FNV-1a over the raw bits of zeros, complements and phase.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double x) {
      std::uint64_t bits = 0;
      static_assert(sizeof(bits) == sizeof(x));
      std::memcpy(&bits, &x, sizeof(x));
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xffU;
        h *= 1099511628211ULL;
      }
    };
    for (const auto& a : zeros_) { mix(a.real()); mix(a.imag()); }
    for (double c : complements_) mix(c);
    mix(phase_.real());
    mix(phase_.imag());
    return h;
  }

  friend BlaschkeProduct make_blaschke(std::span<const Complex> zeros, Complex phase);
  friend BlaschkeProduct make_blaschke_exact(std::span<const Complex> zeros,
                                             std::span<const double> complements, Complex phase);

 private:
  BlaschkeProduct() = default;

  std::vector<Complex> zeros_;
  std::vector<double> complements_;
  Complex phase_{1.0, 0.0};
};

namespace detail {

inline void check_phase(Complex phase) {
  if (std::abs(std::abs(phase) - 1.0) > kPhaseTolerance) {
    throw Error(ErrorCode::BadPhase, "|phase| = " + std::to_string(std::abs(phase)));
  }
}

}  // namespace detail

inline BlaschkeProduct make_blaschke(std::span<const Complex> zeros, Complex phase = {1.0, 0.0}) {
  if (zeros.empty()) throw Error(ErrorCode::EmptyProduct, "a Blaschke product needs at least one zero");
  detail::check_phase(phase);
  BlaschkeProduct u;
  u.zeros_.reserve(zeros.size());
  u.complements_.reserve(zeros.size());
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    const double r = std::abs(zeros[j]);
    if (!(r < 1.0 - kZeroRadiusLimit)) {
      throw Error(ErrorCode::ZeroOutsideDisk,
                  "zero #" + std::to_string(j) + " has modulus " + std::to_string(r));
    }
    u.zeros_.push_back(zeros[j]);
    u.complements_.push_back((1.0 - r) * (1.0 + r));
  }
  u.phase_ = phase;
  return u;
}

/// Like make_blaschke, but with caller-supplied complements 1 - |a_j|^2.
/// Each complement must be positive and agree with the stored zero to
/// double precision; zeros arbitrarily close to T are then representable.
inline BlaschkeProduct make_blaschke_exact(std::span<const Complex> zeros,
                                           std::span<const double> complements,
                                           Complex phase = {1.0, 0.0}) {
  if (zeros.empty()) throw Error(ErrorCode::EmptyProduct, "a Blaschke product needs at least one zero");
  if (zeros.size() != complements.size()) {
    throw Error(ErrorCode::ZeroOutsideDisk, "one complement per zero is required");
  }
  detail::check_phase(phase);
  BlaschkeProduct u;
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    const double r = std::abs(zeros[j]);
    const double c = complements[j];
    if (!(c > 0.0) || c > 1.0 || std::abs((1.0 - r) * (1.0 + r) - c) > 8e-16) {
      throw Error(ErrorCode::ZeroOutsideDisk,
                  "zero #" + std::to_string(j) + " has inconsistent complement " + std::to_string(c));
    }
  }
  u.zeros_.assign(zeros.begin(), zeros.end());
  u.complements_.assign(complements.begin(), complements.end());
  u.phase_ = phase;
  return u;
}

inline BlaschkeProduct make_blaschke(std::initializer_list<Complex> zeros, Complex phase = {1.0, 0.0}) {
  return make_blaschke(std::span<const Complex>(zeros.begin(), zeros.size()), phase);
}

struct InnerEval {
  Complex value;
  Complex derivative;
};

namespace detail {

inline void check_pole(const BlaschkeProduct& u, Complex z) {
  for (const auto& a : u.zeros()) {
    if (std::abs(z * std::conj(a) - 1.0) < kPoleTolerance) {
      throw Error(ErrorCode::PoleHit, "evaluation point coincides with a pole 1/conj(a)");
    }
  }
}

}  // namespace detail

inline Complex eval_inner(const BlaschkeProduct& u, Complex z) {
  detail::check_pole(u, z);
  Complex value = u.phase();
  for (const auto& a : u.zeros()) value *= (z - a) / (1.0 - std::conj(a) * z);
  return value;
}

/// Value and derivative; u' = phase * sum_j b_j' prod_{m != j} b_m with
/// b_j' = (1 - |a_j|^2) / (1 - conj(a_j) z)^2.
inline InnerEval eval_inner_with_derivative(const BlaschkeProduct& u, Complex z) {
  detail::check_pole(u, z);
  const auto& zeros = u.zeros();
  const std::size_t n = zeros.size();
  std::vector<Complex> factor(n), suffix(n + 1, Complex{1.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) factor[j] = (z - zeros[j]) / (1.0 - std::conj(zeros[j]) * z);
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] * factor[j];
  Complex prefix{1.0, 0.0};
  Complex derivative{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const Complex denom = 1.0 - std::conj(zeros[j]) * z;
    derivative += prefix * (u.complements()[j] / (denom * denom)) * suffix[j + 1];
    prefix *= factor[j];
  }
  return {u.phase() * prefix, u.phase() * derivative};
}

/// u(0) = phase * prod(-a_j).
inline Complex inner_at_origin(const BlaschkeProduct& u) {
  Complex value = u.phase();
  for (const auto& a : u.zeros()) value *= -a;
  return value;
}

class TruncationFamily {
 public:
  Complex accumulation_point() const noexcept { return xi_; }
  double rate() const noexcept { return rate_; }
  Complex phase() const noexcept { return phase_; }
  const std::vector<std::size_t>& member_degrees() const noexcept { return degrees_; }
  std::size_t size() const noexcept { return degrees_.size(); }

  /// Member k: zeros (1 - r^j) xi, j = 1..degrees[k], complements r^j (2 - r^j).
  BlaschkeProduct member(std::size_t k) const {
    const std::size_t n = degrees_.at(k);
    std::vector<Complex> zeros(n);
    std::vector<double> complements(n);
    for (std::size_t j = 1; j <= n; ++j) {
      const double d = std::pow(rate_, static_cast<double>(j));
      zeros[j - 1] = (1.0 - d) * xi_;
      complements[j - 1] = d * (2.0 - d);
    }
    return make_blaschke_exact(zeros, complements, phase_);
  }

  friend TruncationFamily accumulation_family(Complex xi, double rate,
                                              std::span<const std::size_t> degrees, Complex phase);

 private:
  Complex xi_;
  double rate_ = 0.5;
  std::vector<std::size_t> degrees_;
  Complex phase_{1.0, 0.0};
};

inline TruncationFamily accumulation_family(Complex xi, double rate, std::span<const std::size_t> degrees,
                                            Complex phase = {1.0, 0.0}) {
  if (!(rate > 0.0 && rate < 1.0)) throw Error(ErrorCode::BadRate, "rate must lie in (0, 1)");
  if (std::abs(std::abs(xi) - 1.0) > kPhaseTolerance) {
    throw Error(ErrorCode::BadPoint, "accumulation point must be unimodular");
  }
  detail::check_phase(phase);
  if (degrees.empty()) throw Error(ErrorCode::EmptyProduct, "family needs at least one member");
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    if (degrees[k] == 0) throw Error(ErrorCode::EmptyProduct, "member degrees must be positive");
    if (k > 0 && degrees[k] <= degrees[k - 1]) {
      throw Error(ErrorCode::BadDegree, "member degrees must be strictly increasing");
    }
  }
  TruncationFamily f;
  f.xi_ = xi / std::abs(xi);
  f.rate_ = rate;
  f.degrees_.assign(degrees.begin(), degrees.end());
  f.phase_ = phase;
  return f;
}

inline TruncationFamily accumulation_family(Complex xi, double rate, std::initializer_list<std::size_t> degrees,
                                            Complex phase = {1.0, 0.0}) {
  return accumulation_family(xi, rate, std::span<const std::size_t>(degrees.begin(), degrees.size()), phase);
}

namespace detail {

inline void push_unique(std::vector<Complex>& set, Complex z) {
  for (const auto& w : set) {
    if (w == z) return;
  }
  set.push_back(z);
}

}  // namespace detail

/// sigma(u): for a finite product, the support of the zero multiset.
inline std::vector<Complex> inner_spectrum(const BlaschkeProduct& u) {
  std::vector<Complex> out;
  for (const auto& a : u.zeros()) detail::push_unique(out, a);
  return out;
}

/// Union of all member zeros together with the accumulation point.
inline std::vector<Complex> inner_spectrum(const TruncationFamily& family) {
  std::vector<Complex> out;
  if (family.size() > 0) {
    const BlaschkeProduct last = family.member(family.size() - 1);
    for (const auto& a : last.zeros()) detail::push_unique(out, a);
  }
  detail::push_unique(out, family.accumulation_point());
  return out;
}

/// The part of a spectrum lying on the unit circle.
inline std::vector<Complex> circle_part(const std::vector<Complex>& spectrum, double tol = kPhaseTolerance) {
  std::vector<Complex> out;
  for (const auto& z : spectrum) {
    if (std::abs(std::abs(z) - 1.0) <= tol) out.push_back(z);
  }
  return out;
}

}  // namespace ttolab

#endif  // TTOLAB_INNER_HPP
