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

#ifndef TTOLAB_MODELSPACE_HPP
#define TTOLAB_MODELSPACE_HPP

// The model space K_u = H^2 (-) uH^2 for a finite Blaschke product u,
// realized through the Takenaka-Malmquist basis
//
//   e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}(z),
//
// tabulated on the uniform grid t_j = 2 pi j / N. All L^2(T) inner products
// are the trapezoid rule on that grid.

#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ttolab/error.hpp"
#include "ttolab/format.hpp"
#include "ttolab/inner.hpp"

namespace ttolab {

inline constexpr double kGramTolerance = 1e-10;
inline constexpr std::size_t kMaxGridSize = std::size_t{1} << 20;

/// Identifies the basis an operator matrix is expressed in.
/// grid_size == 0 marks closed-form (quadrature-free) construction.
struct BasisTag {
  std::size_t dimension = 0;
  std::uint64_t fingerprint = 0;
  std::size_t grid_size = 0;

  bool same_basis(const BasisTag& other) const {
    return dimension == other.dimension && fingerprint == other.fingerprint;
  }
};

/// Values e_k(z), k = 0..n-1, at one point (closed form).
inline Eigen::VectorXcd evaluate_basis(const BlaschkeProduct& u, Complex z) {
  const auto& zeros = u.zeros();
  const auto& comp = u.complements();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(zeros.size()));
  Complex prefix{1.0, 0.0};
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const Complex denom = 1.0 - std::conj(zeros[k]) * z;
    out(static_cast<Eigen::Index>(k)) = std::sqrt(comp[k]) / denom * prefix;
    prefix *= (z - zeros[k]) / denom;
  }
  return out;
}

inline Complex grid_point(std::size_t j, std::size_t n_grid) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_grid));
}

class ModelBasis {
 public:
  const BlaschkeProduct& source() const noexcept { return source_; }
  std::size_t dimension() const noexcept { return source_.degree(); }
  std::size_t grid_size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double gram_defect() const noexcept { return gram_defect_; }

  /// N x n table; column k holds e_k on the grid.
  const Eigen::MatrixXcd& values() const noexcept { return values_; }
  /// u on the grid.
  const Eigen::VectorXcd& inner_values() const noexcept { return inner_values_; }
  /// e^{i t_j}.
  const Eigen::VectorXcd& points() const noexcept { return points_; }

  double angle(std::size_t j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid_size());
  }

  Eigen::VectorXcd evaluate(Complex z) const { return evaluate_basis(source_, z); }

  /// Coordinates <f, e_k> of a grid function.
  Eigen::VectorXcd project(const Eigen::VectorXcd& f) const {
    if (static_cast<std::size_t>(f.size()) != grid_size()) {
      throw Error(ErrorCode::GridMismatch, "grid function has the wrong length");
    }
    return values_.adjoint() * f / static_cast<double>(grid_size());
  }

  /// Grid values of sum_k c_k e_k.
  Eigen::VectorXcd synthesize(const Eigen::VectorXcd& coords) const { return values_ * coords; }

  BasisTag tag() const { return {dimension(), source_.fingerprint(), grid_size()}; }

  friend ModelBasis build_basis_at(const BlaschkeProduct& u, std::size_t n_grid);

 private:
  explicit ModelBasis(BlaschkeProduct u) : source_(std::move(u)) {}

  BlaschkeProduct source_;
  Eigen::MatrixXcd values_;
  Eigen::VectorXcd inner_values_;
  Eigen::VectorXcd points_;
  double gram_defect_ = 0.0;
};

/// Tabulates the basis at a fixed grid size without checking the Gram defect.
inline ModelBasis build_basis_at(const BlaschkeProduct& u, std::size_t n_grid) {
  ModelBasis basis(u);
  const auto n = static_cast<Eigen::Index>(u.degree());
  const auto m = static_cast<Eigen::Index>(n_grid);
  basis.values_.resize(m, n);
  basis.inner_values_.resize(m);
  basis.points_.resize(m);
  const auto& zeros = u.zeros();
  const auto& comp = u.complements();
  std::vector<double> scale(zeros.size());
  for (std::size_t k = 0; k < zeros.size(); ++k) scale[k] = std::sqrt(comp[k]);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex z = grid_point(static_cast<std::size_t>(j), n_grid);
    basis.points_(j) = z;
    Complex prefix{1.0, 0.0};
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const Complex denom = 1.0 - std::conj(zeros[kk]) * z;
      basis.values_(j, k) = scale[kk] / denom * prefix;
      prefix *= (z - zeros[kk]) / denom;
    }
    basis.inner_values_(j) = u.phase() * prefix;
  }
  const Eigen::MatrixXcd gram = basis.values_.adjoint() * basis.values_ / static_cast<double>(n_grid);
  basis.gram_defect_ = (gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  return basis;
}

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Basis at an explicit grid size N (a power of two, N >= 4 * degree).
inline ModelBasis build_basis(const BlaschkeProduct& u, std::size_t n_grid) {
  if (!detail::is_power_of_two(n_grid) || n_grid < 4 * u.degree() || n_grid > kMaxGridSize) {
    throw Error(ErrorCode::BadGridSize, "grid size must be a power of two in [4*degree, 2^20], got " +
                                            std::to_string(n_grid));
  }
  ModelBasis basis = build_basis_at(u, n_grid);
  if (!(basis.gram_defect() < kGramTolerance)) {
    throw Error(ErrorCode::QuadratureStall, "Gram defect " + format_double(basis.gram_defect()) +
                                                " at N = " + std::to_string(n_grid));
  }
  return basis;
}

/// Basis with automatic grid: N doubles from max(1024, 16 * degree) until
/// the Gram defect drops below 1e-10, capped at 2^20.
inline ModelBasis build_basis(const BlaschkeProduct& u) {
  // Trapezoid aliasing error for a pole at 1/conj(a) decays like |a|^N; if
  // even the cap cannot reach the tolerance, fail before tabulating.
  const double rho = std::sqrt(std::max(0.0, 1.0 - u.min_complement()));
  if (std::pow(rho, static_cast<double>(kMaxGridSize)) > kGramTolerance) {
    throw Error(ErrorCode::QuadratureStall,
                "zeros too close to the unit circle for N <= 2^20 (max |a| = " + format_double(rho) + ")");
  }
  std::size_t n_grid = detail::next_power_of_two(std::max<std::size_t>(1024, 16 * u.degree()));
  double last_defect = 0.0;
  for (; n_grid <= kMaxGridSize; n_grid <<= 1) {
    ModelBasis basis = build_basis_at(u, n_grid);
    if (basis.gram_defect() < kGramTolerance) return basis;
    last_defect = basis.gram_defect();
  }
  throw Error(ErrorCode::QuadratureStall,
              "Gram defect " + format_double(last_defect) + " still above 1e-10 at N = 2^20");
}

/// (1/N) sum_j f(t_j) conj(g(t_j)).
inline Complex circle_inner_product(std::span<const Complex> f, std::span<const Complex> g) {
  if (f.size() != g.size()) throw Error(ErrorCode::GridMismatch, "grid sizes differ");
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < f.size(); ++j) acc += f[j] * std::conj(g[j]);
  return acc / static_cast<double>(f.size());
}

inline Complex circle_inner_product(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
  return circle_inner_product(std::span<const Complex>(f.data(), static_cast<std::size_t>(f.size())),
                              std::span<const Complex>(g.data(), static_cast<std::size_t>(g.size())));
}

struct KernelValue {
  Complex base;
  Eigen::VectorXcd values;       // k_lambda on the grid
  Eigen::VectorXcd coordinates;  // (conj(e_k(lambda)))_k
  double norm = 0.0;
};

/// k_lambda(z) = (1 - conj(u(lambda)) u(z)) / (1 - conj(lambda) z), |lambda| <= 1.
inline KernelValue reproducing_kernel(const ModelBasis& basis, Complex lambda) {
  if (std::abs(lambda) > 1.0 + 1e-12) {
    throw Error(ErrorCode::BasePointOutside, "|lambda| = " + format_double(std::abs(lambda)));
  }
  KernelValue k;
  k.base = lambda;
  k.coordinates = basis.evaluate(lambda).conjugate();
  k.norm = k.coordinates.norm();
  const Complex u_lambda = eval_inner(basis.source(), lambda);
  const auto m = static_cast<Eigen::Index>(basis.grid_size());
  k.values.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex z = basis.points()(j);
    const Complex denom = 1.0 - std::conj(lambda) * z;
    if (std::abs(denom) < 1e-6) {
      // removable singularity at z = lambda on the circle
      k.values(j) = (basis.values().row(j) * k.coordinates).value();
    } else {
      k.values(j) = (1.0 - std::conj(u_lambda) * basis.inner_values()(j)) / denom;
    }
  }
  return k;
}

namespace detail {

inline double density_scale(const BlaschkeProduct& u, Complex lambda) {
  if (std::abs(lambda) >= 1.0 - 1e-12) {
    throw Error(ErrorCode::BasePointOnCircle, "kernel density needs |lambda| < 1");
  }
  const double ul = std::abs(eval_inner(u, lambda));
  return (1.0 - std::norm(lambda)) / ((1.0 - ul) * (1.0 + ul));
}

}  // namespace detail

/// F_lambda(e^{it}) = (1 - |lambda|^2) / (1 - |u(lambda)|^2) |k_lambda(e^{it})|^2.
inline double kernel_density(const ModelBasis& basis, Complex lambda, double t) {
  const BlaschkeProduct& u = basis.source();
  const double scale = detail::density_scale(u, lambda);
  const Complex z = std::polar(1.0, t);
  const Complex k = (1.0 - std::conj(eval_inner(u, lambda)) * eval_inner(u, z)) / (1.0 - std::conj(lambda) * z);
  return scale * std::norm(k);
}

/// F_lambda sampled on the basis grid.
inline Eigen::VectorXd kernel_density_grid(const ModelBasis& basis, Complex lambda) {
  const double scale = detail::density_scale(basis.source(), lambda);
  const Complex u_lambda = eval_inner(basis.source(), lambda);
  const auto m = static_cast<Eigen::Index>(basis.grid_size());
  Eigen::VectorXd out(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex k = (1.0 - std::conj(u_lambda) * basis.inner_values()(j)) / (1.0 - std::conj(lambda) * basis.points()(j));
    out(j) = scale * std::norm(k);
  }
  return out;
}

/// (||k_zeta||^2 by quadrature, |u'(zeta)|) for zeta on the circle.
inline std::pair<double, double> boundary_kernel_norm_check(const ModelBasis& basis, Complex zeta) {
  zeta /= std::abs(zeta);
  const KernelValue k = reproducing_kernel(basis, zeta);
  const double quad = k.values.squaredNorm() / static_cast<double>(basis.grid_size());
  const double deriv = std::abs(eval_inner_with_derivative(basis.source(), zeta).derivative);
  return {quad, deriv};
}

/// CSV rows (k, j, t_j, re e_k, im e_k).
inline void write_basis_csv(const ModelBasis& basis, std::ostream& out) {
  out << "k,j,t,re,im\n";
  for (Eigen::Index k = 0; k < basis.values().cols(); ++k) {
    for (Eigen::Index j = 0; j < basis.values().rows(); ++j) {
      const Complex v = basis.values()(j, k);
      out << k << ',' << j << ',' << format_double(basis.angle(static_cast<std::size_t>(j))) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

}  // namespace ttolab

#endif  // TTOLAB_MODELSPACE_HPP
