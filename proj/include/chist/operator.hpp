// Copyright 2026 The chist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace chist {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances shared by every predicate in the library.
///
/// `alg` bounds Frobenius-norm residuals of algebraic identities
/// (idempotence, commutators, completeness). `norm` bounds the deviation of
/// a ket's Euclidean norm from one. `consistency` is the relative bound on
/// off-diagonal decoherence-functional entries, with `floor` as the absolute
/// bound used when the diagonal weights vanish. `prob` bounds probability
/// bookkeeping such as a weight vector summing to one.
struct Tolerances {
  double alg = 1e-10;
  double norm = 1e-12;
  double consistency = 1e-8;
  double floor = 1e-12;
  double prob = 1e-10;

  bool operator==(const Tolerances&) const = default;
};

double frobenius_norm(const Matrix& m);

/// A vector in a d-dimensional complex Hilbert space.
class Ket {
 public:
  Ket() = default;
  explicit Ket(Vector amplitudes);
  Ket(std::initializer_list<Complex> amplitudes);

  static Ket basis(std::size_t dim, std::size_t index);

  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol = Tolerances{}.norm) const;
  /// Throws NormalizationError for the zero vector.
  Ket normalized() const;

  /// <this|other>, antilinear in the left argument.
  Complex inner(const Ket& other) const;

 private:
  Vector amplitudes_;
};

/// Optional semantic tag. A tagged operator was checked against the tag's
/// defining identity when it was constructed.
enum class Flavor { none, hermitian, projector, unitary, positive };

const char* to_string(Flavor flavor);

/// Dense complex square matrix with a validated flavor tag.
class Operator {
 public:
  Operator() = default;
  /// Throws DimError for a non-square matrix and FlavorError (or
  /// NotProjectorError for projectors) when the tag does not hold.
  explicit Operator(Matrix entries, Flavor flavor = Flavor::none, double tol = Tolerances{}.alg);

  static Operator identity(std::size_t dim);
  static Operator zero(std::size_t dim);
  /// Tags without checking; the caller guarantees the flavor's identity.
  static Operator unchecked(Matrix entries, Flavor flavor);

  const Matrix& matrix() const { return entries_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  Flavor flavor() const { return flavor_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  Operator adjoint() const;
  Complex trace() const { return entries_.trace(); }
  double norm() const { return frobenius_norm(entries_); }

  bool is_hermitian(double tol = Tolerances{}.alg) const;
  bool is_projector(double tol = Tolerances{}.alg) const;
  bool is_unitary(double tol = Tolerances{}.alg) const;
  bool is_positive(double tol = Tolerances{}.alg) const;
  bool is_zero(double tol = Tolerances{}.alg) const { return norm() <= tol; }

  /// Re-tags after validation; throws like the constructor.
  Operator with_flavor(Flavor flavor, double tol = Tolerances{}.alg) const;

  Ket apply(const Ket& k) const;

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  Matrix entries_;
  Flavor flavor_ = Flavor::none;
};

/// Ordered tensor-product structure. Index arithmetic is row-major over the
/// factor order: the last factor varies fastest.
struct CompositeSpace {
  std::vector<std::size_t> factors;

  std::size_t total() const;
  std::size_t size() const { return factors.size(); }
  bool operator==(const CompositeSpace&) const = default;
};

/// |k><k| for a normalized ket; throws NormalizationError otherwise.
Operator dyad(const Ket& k, double tol_norm = Tolerances{}.norm);

enum class Axis { x, y, z };

const char* to_string(Axis axis);

/// Spin-half eigenkets with |x±> = (|z+> ± |z->)/√2 and
/// |y±> = (|z+> ± i|z->)/√2.
Ket spin_ket(Axis axis, int sign);
/// ([axis+], [axis-]).
std::pair<Operator, Operator> spin_projectors(Axis axis);

/// ‖AB − BA‖ ≤ tol. Throws DimError on mismatched dimensions.
bool commutes(const Operator& a, const Operator& b, double tol = Tolerances{}.alg);

/// Kronecker products in argument order. A tensor product of projectors is
/// tagged as a projector; likewise for unitary and Hermitian operands.
Operator tensor(const Operator& a, const Operator& b);
Operator tensor(std::span<const Operator> factors);
Ket tensor(const Ket& a, const Ket& b);
Ket tensor(std::span<const Ket> factors);

/// Lifts `op` acting on factor `index` of `space` to the whole space.
Operator embed(const Operator& op, const CompositeSpace& space, std::size_t index);

/// Traces out every factor not listed in `keep`. The result acts on the kept
/// factors in ascending factor order.
Operator partial_trace(const Operator& a, const CompositeSpace& space, std::span<const std::size_t> keep);
Operator partial_trace(const Operator& a, const CompositeSpace& space, std::initializer_list<std::size_t> keep);

/// (|z+,z-> − |z-,z+>)/√2 on 2⊗2.
Ket singlet();

/// Diagonal 0/1 projector on a discrete position grid; entry i is one
/// exactly when lo ≤ grid[i] ≤ hi. Throws DimError for an empty grid.
Operator interval_projector(std::span<const double> grid, double lo, double hi);

}  // namespace chist
