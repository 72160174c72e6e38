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

#ifndef TTOLAB_TTO_HPP
#define TTOLAB_TTO_HPP

// Dense matrices of truncated Toeplitz operators A_phi f = P_u(phi f) in the
// Takenaka-Malmquist basis, (A_phi)_{jk} = <phi e_k, e_j>.
//
// Two construction routes:
//   * quadrature: <phi e_k, e_j> on the basis grid (any symbol);
//   * functional calculus: c_0 I + sum c_n A_z^n + sum c_{-n} (A_z^*)^n from
//     the closed-form compressed shift (trigonometric polynomials only).
// The closed form needs no grid, so it also covers zeros too close to the
// circle for quadrature.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ttolab/error.hpp"
#include "ttolab/format.hpp"
#include "ttolab/inner.hpp"
#include "ttolab/modelspace.hpp"
#include "ttolab/symbols.hpp"

namespace ttolab {

enum class Provenance { FunctionalCalculus, Quadrature, Derived };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::FunctionalCalculus: return "functional-calculus";
    case Provenance::Quadrature: return "quadrature";
    case Provenance::Derived: return "derived";
  }
  return "unknown";
}

enum class Method { FunctionalCalculus, Quadrature };

struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  BasisTag basis;
  Provenance provenance = Provenance::Derived;

  Eigen::Index dimension() const { return entries.rows(); }
};

inline BasisTag closed_form_tag(const BlaschkeProduct& u) { return {u.degree(), u.fingerprint(), 0}; }

// ---------------------------------------------------------------------------
// Compressed shift

/// Closed form: (A_z)_{kk} = a_k and, for j > k,
///   (A_z)_{jk} = s_j s_k prod_{k<m<j} (-conj(a_m)),   s_k = sqrt(1 - |a_k|^2);
/// zero above the diagonal.
inline OperatorMatrix compressed_shift(const BlaschkeProduct& u) {
  const auto n = static_cast<Eigen::Index>(u.degree());
  const auto& a = u.zeros();
  std::vector<double> s(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) s[k] = std::sqrt(u.complements()[k]);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    m(k, k) = a[kk];
    Complex chain{1.0, 0.0};
    for (Eigen::Index j = k + 1; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      m(j, k) = s[jj] * s[kk] * chain;
      chain *= -std::conj(a[jj]);
    }
  }
  return {std::move(m), closed_form_tag(u), Provenance::FunctionalCalculus};
}

/// Quadrature: (A_z)_{jk} = <z e_k, e_j> on the grid.
inline OperatorMatrix compressed_shift(const ModelBasis& basis) {
  const auto& e = basis.values();
  Eigen::MatrixXcd m = e.adjoint() * (basis.points().asDiagonal() * e) / static_cast<double>(basis.grid_size());
  return {std::move(m), basis.tag(), Provenance::Quadrature};
}

/// Coordinates of k_0: conj(e_k(0)) = s_k prod_{m<k} (-conj(a_m)).
inline Eigen::VectorXcd kernel_coordinates(const BlaschkeProduct& u) {
  const auto& a = u.zeros();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(a.size()));
  Complex chain{1.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = std::sqrt(u.complements()[k]) * chain;
    chain *= -std::conj(a[k]);
  }
  return v;
}

/// Coordinates of C k_0: <C k_0, e_k> = (C e_k)(0) = phase s_k prod_{m>k} (-a_m).
inline Eigen::VectorXcd conjugate_kernel_coordinates(const BlaschkeProduct& u) {
  const auto& a = u.zeros();
  Eigen::VectorXcd w(static_cast<Eigen::Index>(a.size()));
  Complex chain = u.phase();
  for (std::size_t k = a.size(); k-- > 0;) {
    w(static_cast<Eigen::Index>(k)) = std::sqrt(u.complements()[k]) * chain;
    chain *= -a[k];
  }
  return w;
}

// ---------------------------------------------------------------------------
// Truncated Toeplitz operators

/// sum_{n>=0} c_n T^n + sum_{n>=1} c_{-n} (T^*)^n.
inline Eigen::MatrixXcd apply_trig(const Eigen::MatrixXcd& t, const TrigPolynomial& phi) {
  const Eigen::Index n = t.rows();
  Eigen::MatrixXcd out = phi.coefficient(0) * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= phi.analytic_degree(); ++k) {
    power = (power * t).eval();
    const Complex c = phi.coefficient(k);
    if (c != Complex{0.0, 0.0}) out += c * power;
  }
  const Eigen::MatrixXcd t_adj = t.adjoint();
  power.setIdentity();
  for (int k = 1; k <= phi.coanalytic_degree(); ++k) {
    power = (power * t_adj).eval();
    const Complex c = phi.coefficient(-k);
    if (c != Complex{0.0, 0.0}) out += c * power;
  }
  return out;
}

/// A_phi = phi(A_z) from a compressed-shift matrix.
inline OperatorMatrix functional_calculus(const OperatorMatrix& shift, const TrigPolynomial& phi) {
  return {apply_trig(shift.entries, phi), shift.basis, Provenance::FunctionalCalculus};
}

/// Closed-form A_phi for a trigonometric polynomial symbol.
inline OperatorMatrix truncated_toeplitz(const BlaschkeProduct& u, const TrigPolynomial& phi) {
  return functional_calculus(compressed_shift(u), phi);
}

namespace detail {

inline Eigen::VectorXcd sample_symbol(const ModelBasis& basis, const Symbol& phi) {
  const auto m = static_cast<Eigen::Index>(basis.grid_size());
  if (const auto* sampled = std::get_if<SampledSymbol>(&phi)) {
    if (sampled->values.size() != m) {
      throw Error(ErrorCode::GridMismatch, "sampled symbol length differs from the basis grid");
    }
    return sampled->values;
  }
  Eigen::VectorXcd out(m);
  for (Eigen::Index j = 0; j < m; ++j) out(j) = eval_symbol(phi, basis.angle(static_cast<std::size_t>(j)));
  return out;
}

}  // namespace detail

/// M_{jk} = <phi e_k, e_j> by quadrature, or phi(A_z) by functional calculus.
inline OperatorMatrix truncated_toeplitz(const ModelBasis& basis, const Symbol& phi,
                                         Method method = Method::Quadrature) {
  if (method == Method::FunctionalCalculus) {
    const auto* trig = std::get_if<TrigPolynomial>(&phi);
    if (trig == nullptr) {
      throw Error(ErrorCode::MethodMismatch, "functional calculus needs a trigonometric polynomial symbol");
    }
    OperatorMatrix m = truncated_toeplitz(basis.source(), *trig);
    m.basis = basis.tag();
    return m;
  }
  const auto& e = basis.values();
  const Eigen::VectorXcd samples = detail::sample_symbol(basis, phi);
  Eigen::MatrixXcd m = e.adjoint() * (samples.asDiagonal() * e) / static_cast<double>(basis.grid_size());
  return {std::move(m), basis.tag(), Provenance::Quadrature};
}

/// Samples of an arbitrary circle function on the basis grid.
template <typename F>
SampledSymbol sample_on_grid(const ModelBasis& basis, F&& f) {
  SampledSymbol s;
  s.values.resize(static_cast<Eigen::Index>(basis.grid_size()));
  for (Eigen::Index j = 0; j < s.values.size(); ++j) s.values(j) = f(basis.points()(j));
  return s;
}

// ---------------------------------------------------------------------------
// Conjugation

/// Matrix J of C f = u conj(z f), acting as x -> J conj(x).
struct ConjugationMatrix {
  Eigen::MatrixXcd entries;
  BasisTag basis;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return entries * x.conjugate(); }
};

inline ConjugationMatrix conjugation_matrix(const ModelBasis& basis) {
  const auto& e = basis.values();
  Eigen::MatrixXcd ce = (e.array().colwise() * basis.points().array()).conjugate();
  ce = basis.inner_values().asDiagonal() * ce;
  Eigen::MatrixXcd j = e.adjoint() * ce / static_cast<double>(basis.grid_size());
  return {std::move(j), basis.tag()};
}

/// max |M - J M^T conj(J)|.
inline double complex_symmetry_residual(const Eigen::MatrixXcd& m, const ConjugationMatrix& j) {
  return (m - j.entries * m.transpose() * j.entries.conjugate()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Clark unitaries

namespace detail {

inline Complex clark_weight(Complex u0, Complex alpha) {
  if (std::abs(std::abs(alpha) - 1.0) > kPhaseTolerance) {
    throw Error(ErrorCode::BadAlpha, "|alpha| must be 1");
  }
  const Complex denom = 1.0 - std::conj(u0) * alpha;
  // |denom| >= 1 - |u(0)| > 0 for a finite Blaschke product
  if (!(std::abs(denom) > 0.0)) throw Error(ErrorCode::BadAlpha, "1 - conj(u(0)) alpha vanished");
  return alpha / denom;
}

}  // namespace detail

/// U_alpha = A_z + alpha / (1 - conj(u(0)) alpha) k_0 (x) C k_0, where
/// (f (x) g) x = <x, g> f. Closed form.
inline OperatorMatrix clark_unitary(const BlaschkeProduct& u, Complex alpha) {
  const Complex c = detail::clark_weight(inner_at_origin(u), alpha);
  OperatorMatrix m = compressed_shift(u);
  m.entries += c * kernel_coordinates(u) * conjugate_kernel_coordinates(u).adjoint();
  m.provenance = Provenance::Derived;
  return m;
}

/// Same operator from quadrature ingredients: A_z, k_0 and C k_0 all
/// projected from grid values.
inline OperatorMatrix clark_unitary(const ModelBasis& basis, Complex alpha) {
  const Complex u0 = inner_at_origin(basis.source());
  const Complex c = detail::clark_weight(u0, alpha);
  const Eigen::VectorXcd k0 = Eigen::VectorXcd::Ones(basis.inner_values().size()) - std::conj(u0) * basis.inner_values();
  const Eigen::VectorXcd ck0 = (basis.inner_values().array() * (basis.points().array() * k0.array()).conjugate()).matrix();
  OperatorMatrix m = compressed_shift(basis);
  m.entries += c * basis.project(k0) * basis.project(ck0).adjoint();
  m.provenance = Provenance::Quadrature;
  return m;
}

/// phi(U_alpha) - A_phi, both by functional calculus (closed form).
inline OperatorMatrix clark_functional_gap(const BlaschkeProduct& u, Complex alpha, const TrigPolynomial& phi) {
  const OperatorMatrix unitary = clark_unitary(u, alpha);
  const OperatorMatrix shift = compressed_shift(u);
  return {apply_trig(unitary.entries, phi) - apply_trig(shift.entries, phi), unitary.basis, Provenance::Derived};
}

inline OperatorMatrix clark_functional_gap(const ModelBasis& basis, Complex alpha, const TrigPolynomial& phi) {
  OperatorMatrix gap = clark_functional_gap(basis.source(), alpha, phi);
  gap.basis = basis.tag();
  return gap;
}

/// Columns v, M v, ..., M^{n-1} v.
inline Eigen::MatrixXcd krylov_matrix(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXcd k(n, n);
  if (n == 0) return k;
  k.col(0) = v;
  for (Eigen::Index j = 1; j < n; ++j) k.col(j) = m * k.col(j - 1);
  return k;
}

// ---------------------------------------------------------------------------
// Hankel operators H_phi = (I - P_u) M_phi : K_u -> L^2

namespace detail {

/// In-place radix-2 DFT, X_m = sum_j x_j e^{-2 pi i j m / N}.
inline void fft(std::vector<Complex>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex w = std::polar(1.0, ang * static_cast<double>(k));
        const Complex a = x[i + k];
        const Complex b = x[i + k + len / 2] * w;
        x[i + k] = a + b;
        x[i + k + len / 2] = a - b;
      }
    }
  }
}

}  // namespace detail

struct HankelBlock {
  /// Row m + N_f holds the Fourier coefficient of mode m, |m| <= N_f.
  Eigen::MatrixXcd coefficients;
  int truncation = 0;
};

/// Smallest admissible truncation: bandwidth + 4 * degree.
inline int minimum_hankel_truncation(const BlaschkeProduct& u, const TrigPolynomial& phi) {
  return phi.bandwidth() + 4 * static_cast<int>(u.degree());
}

/// Truncation at which the discarded Fourier tail (decaying like max|a|^m)
/// falls to about 1e-5, so products of two blocks are accurate to ~1e-10.
inline int auto_hankel_truncation(const BlaschkeProduct& u, const TrigPolynomial& phi) {
  const double rho = u.radius();
  int tail = 0;
  if (rho > 1e-3) tail = static_cast<int>(std::ceil(std::log(1e-5) / std::log(rho)));
  return phi.bandwidth() + std::max(4 * static_cast<int>(u.degree()), tail);
}

/// Column k: Fourier coefficients of phi e_k - P_u(phi e_k), |m| <= N_f.
/// truncation == 0 selects auto_hankel_truncation.
inline HankelBlock hankel_operator(const ModelBasis& basis, const TrigPolynomial& phi, int truncation = 0) {
  const BlaschkeProduct& u = basis.source();
  if (truncation == 0) truncation = auto_hankel_truncation(u, phi);
  if (truncation < minimum_hankel_truncation(u, phi)) {
    throw Error(ErrorCode::TruncationTooSmall, "N_f must be at least bandwidth + 4 * degree = " +
                                                   std::to_string(minimum_hankel_truncation(u, phi)));
  }
  const std::size_t grid = std::max(basis.grid_size(),
                                    detail::next_power_of_two(4 * static_cast<std::size_t>(truncation + phi.bandwidth())));
  if (grid > kMaxGridSize) throw Error(ErrorCode::TruncationTooSmall, "N_f exceeds the supported grid");
  const ModelBasis fine = grid == basis.grid_size() ? basis : build_basis_at(u, grid);
  const auto m = static_cast<Eigen::Index>(grid);
  const Eigen::Index n = fine.values().cols();

  Eigen::VectorXcd samples(m);
  for (Eigen::Index j = 0; j < m; ++j) samples(j) = phi(fine.angle(static_cast<std::size_t>(j)));
  const Eigen::MatrixXcd product = samples.asDiagonal() * fine.values();
  const Eigen::MatrixXcd projected = fine.values() * (fine.values().adjoint() * product / static_cast<double>(grid));
  const Eigen::MatrixXcd residual = product - projected;

  HankelBlock h;
  h.truncation = truncation;
  h.coefficients.resize(2 * truncation + 1, n);
  std::vector<Complex> column(grid);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < m; ++j) column[static_cast<std::size_t>(j)] = residual(j, k);
    detail::fft(column);
    for (int mode = -truncation; mode <= truncation; ++mode) {
      const auto idx = static_cast<std::size_t>((mode % m + m) % m);
      h.coefficients(mode + truncation, k) = column[idx] / static_cast<double>(grid);
    }
  }
  return h;
}

/// (H_a)^* H_b, the Gram matrix of two Hankel blocks in L^2.
inline Eigen::MatrixXcd hankel_product(const HankelBlock& a, const HankelBlock& b) {
  if (a.truncation != b.truncation) throw Error(ErrorCode::GridMismatch, "Hankel truncations differ");
  return a.coefficients.adjoint() * b.coefficients;
}

struct SemicommutatorCheck {
  double residual = 0.0;           // ||A_{phi psi} - A_phi A_psi - H^*H||_F / scale
  int truncation = 0;
};

/// Relative residual of A_{phi psi} - A_phi A_psi = (H_{conj phi})^* H_psi,
/// normalized by the largest of ||A_{phi psi}||_F, ||A_phi||_F ||A_psi||_F
/// and ||H_{conj phi}||_F ||H_psi||_F.
inline SemicommutatorCheck hankel_semicommutator(const ModelBasis& basis, const TrigPolynomial& phi,
                                                 const TrigPolynomial& psi, int truncation = 0) {
  if (truncation == 0) {
    truncation = std::max(auto_hankel_truncation(basis.source(), phi.conj()),
                          auto_hankel_truncation(basis.source(), psi));
  }
  const Eigen::MatrixXcd a_phipsi = truncated_toeplitz(basis, phi * psi).entries;
  const Eigen::MatrixXcd a_phi = truncated_toeplitz(basis, phi).entries;
  const Eigen::MatrixXcd a_psi = truncated_toeplitz(basis, psi).entries;
  const HankelBlock h_phi = hankel_operator(basis, phi.conj(), truncation);
  const HankelBlock h_psi = hankel_operator(basis, psi, truncation);
  const Eigen::MatrixXcd lhs = a_phipsi - a_phi * a_psi;
  const Eigen::MatrixXcd rhs = hankel_product(h_phi, h_psi);
  const double scale = std::max({a_phipsi.norm(), a_phi.norm() * a_psi.norm(),
                                 h_phi.coefficients.norm() * h_psi.coefficients.norm(), 1e-300});
  return {(lhs - rhs).norm() / scale, truncation};
}

// ---------------------------------------------------------------------------
// Export

inline void write_matrix_csv(const Eigen::MatrixXcd& m, std::ostream& out) {
  out << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << r << ',' << c << ',' << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag()) << '\n';
    }
  }
}

}  // namespace ttolab

#endif  // TTOLAB_TTO_HPP
