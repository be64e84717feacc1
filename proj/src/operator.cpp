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

#include "chist/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chist/errors.hpp"

namespace chist {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                   std::to_string(b.dim()) + ")");
  }
}

Flavor product_flavor(Flavor a, Flavor b) {
  if (a == b) return a;
  // hermitian ⊗ projector and positive ⊗ projector stay in the weaker class
  auto rank = [](Flavor f) {
    switch (f) {
      case Flavor::projector: return 3;
      case Flavor::positive: return 2;
      case Flavor::hermitian: return 1;
      default: return 0;
    }
  };
  if (a == Flavor::unitary || b == Flavor::unitary || a == Flavor::none || b == Flavor::none) {
    return Flavor::none;
  }
  if (rank(a) >= 2 && rank(b) >= 2) return Flavor::positive;
  return Flavor::hermitian;
}

// Mixed-radix digits of `flat`, most significant first.
std::vector<std::size_t> digits(std::size_t flat, const std::vector<std::size_t>& radices) {
  std::vector<std::size_t> out(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    out[k] = flat % radices[k];
    flat /= radices[k];
  }
  return out;
}

}  // namespace

double frobenius_norm(const Matrix& m) { return m.norm(); }

// ---------------------------------------------------------------------------
// Ket

Ket::Ket(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}

Ket::Ket(std::initializer_list<Complex> amplitudes) : amplitudes_(idx(amplitudes.size())) {
  std::size_t i = 0;
  for (const auto& a : amplitudes) amplitudes_(idx(i++)) = a;
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimError("basis index " + std::to_string(index) + " out of range for dim " + std::to_string(dim));
  Vector v = Vector::Zero(idx(dim));
  v(idx(index)) = 1.0;
  return Ket(std::move(v));
}

bool Ket::is_normalized(double tol) const { return dim() > 0 && std::abs(norm() - 1.0) <= tol; }

Ket Ket::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw NormalizationError("cannot normalize the zero ket");
  return Ket(amplitudes_ / n);
}

Complex Ket::inner(const Ket& other) const {
  if (dim() != other.dim()) throw DimError("inner product of kets with different dimensions");
  return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------
// Operator

const char* to_string(Flavor flavor) {
  switch (flavor) {
    case Flavor::none: return "none";
    case Flavor::hermitian: return "hermitian";
    case Flavor::projector: return "projector";
    case Flavor::unitary: return "unitary";
    case Flavor::positive: return "positive";
  }
  return "?";
}

Operator::Operator(Matrix entries, Flavor flavor, double tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimError("operator matrix must be square, got " + std::to_string(entries_.rows()) + "x" +
                   std::to_string(entries_.cols()));
  }
  if (entries_.rows() == 0) throw DimError("operator dimension must be at least 1");
  *this = with_flavor(flavor, tol);
}

Operator Operator::identity(std::size_t dim) {
  Operator op;
  op.entries_ = Matrix::Identity(idx(dim), idx(dim));
  op.flavor_ = Flavor::projector;
  return op;
}

Operator Operator::zero(std::size_t dim) {
  Operator op;
  op.entries_ = Matrix::Zero(idx(dim), idx(dim));
  op.flavor_ = Flavor::projector;
  return op;
}

Operator Operator::unchecked(Matrix entries, Flavor flavor) {
  Operator op;
  op.entries_ = std::move(entries);
  op.flavor_ = flavor;
  return op;
}

Operator Operator::adjoint() const {
  Operator op;
  op.entries_ = entries_.adjoint();
  op.flavor_ = flavor_;
  return op;
}

bool Operator::is_hermitian(double tol) const { return frobenius_norm(entries_ - entries_.adjoint()) <= tol; }

bool Operator::is_projector(double tol) const {
  return is_hermitian(tol) && frobenius_norm(entries_ * entries_ - entries_) <= tol;
}

bool Operator::is_unitary(double tol) const {
  return frobenius_norm(entries_.adjoint() * entries_ - Matrix::Identity(entries_.rows(), entries_.cols())) <= tol;
}

bool Operator::is_positive(double tol) const {
  if (!is_hermitian(tol)) return false;
  const Matrix h = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tol;
}

Operator Operator::with_flavor(Flavor flavor, double tol) const {
  bool ok = true;
  switch (flavor) {
    case Flavor::none: break;
    case Flavor::hermitian: ok = is_hermitian(tol); break;
    case Flavor::projector:
      if (!is_projector(tol)) throw NotProjectorError("operator is not a projector (P^2 = P = P^† violated)");
      break;
    case Flavor::unitary: ok = is_unitary(tol); break;
    case Flavor::positive: ok = is_positive(tol); break;
  }
  if (!ok) throw FlavorError(std::string("operator does not satisfy the '") + to_string(flavor) + "' invariant");
  Operator op;
  op.entries_ = entries_;
  op.flavor_ = flavor;
  return op;
}

Ket Operator::apply(const Ket& k) const {
  if (k.dim() != dim()) throw DimError("operator/ket dimension mismatch");
  return Ket(entries_ * k.amplitudes());
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator product");
  Operator op;
  op.entries_ = a.entries_ * b.entries_;
  op.flavor_ = (a.flavor_ == Flavor::unitary && b.flavor_ == Flavor::unitary) ? Flavor::unitary : Flavor::none;
  return op;
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator sum");
  Operator op;
  op.entries_ = a.entries_ + b.entries_;
  return op;
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator difference");
  Operator op;
  op.entries_ = a.entries_ - b.entries_;
  return op;
}

Operator operator*(Complex s, const Operator& a) {
  Operator op;
  op.entries_ = s * a.entries_;
  return op;
}

// ---------------------------------------------------------------------------
// Composite spaces

std::size_t CompositeSpace::total() const {
  return std::accumulate(factors.begin(), factors.end(), std::size_t{1}, std::multiplies<>());
}

Operator dyad(const Ket& k, double tol_norm) {
  if (!k.is_normalized(tol_norm)) {
    throw NormalizationError("dyad requires a normalized ket (norm = " + std::to_string(k.norm()) + ")");
  }
  Matrix m = k.amplitudes() * k.amplitudes().adjoint();
  // Symmetrize away rounding so the projector tag is exact to machine precision.
  m = 0.5 * (m + m.adjoint()).eval();
  return Operator(std::move(m), Flavor::projector);
}

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

Ket spin_ket(Axis axis, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  const double r = 1.0 / std::sqrt(2.0);
  switch (axis) {
    case Axis::z: return sign >= 0 ? Ket{1.0, 0.0} : Ket{0.0, 1.0};
    case Axis::x: return Ket{r, s * r};
    case Axis::y: return Ket{r, Complex(0.0, s * r)};
  }
  return {};
}

std::pair<Operator, Operator> spin_projectors(Axis axis) {
  return {dyad(spin_ket(axis, +1)), dyad(spin_ket(axis, -1))};
}

bool commutes(const Operator& a, const Operator& b, double tol) {
  require_same_dim(a, b, "commutes");
  return frobenius_norm(a.matrix() * b.matrix() - b.matrix() * a.matrix()) <= tol;
}

Operator tensor(const Operator& a, const Operator& b) {
  const auto ra = a.matrix().rows();
  const auto rb = b.matrix().rows();
  Matrix m(ra * rb, ra * rb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ra; ++j) {
      m.block(i * rb, j * rb, rb, rb) = a.matrix()(i, j) * b.matrix();
    }
  }
  // Kronecker products preserve each flavor, so the tag is carried over.
  return Operator::unchecked(std::move(m), product_flavor(a.flavor(), b.flavor()));
}

Operator tensor(std::span<const Operator> factors) {
  if (factors.empty()) throw DimError("tensor product of an empty factor list");
  Operator out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

Ket tensor(const Ket& a, const Ket& b) {
  Vector v(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
  }
  return Ket(std::move(v));
}

Ket tensor(std::span<const Ket> factors) {
  if (factors.empty()) throw DimError("tensor product of an empty factor list");
  Ket out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

Operator embed(const Operator& op, const CompositeSpace& space, std::size_t index) {
  if (index >= space.size()) throw DimError("factor index " + std::to_string(index) + " out of range");
  if (op.dim() != space.factors[index]) {
    throw DimError("operator dim " + std::to_string(op.dim()) + " does not match factor " + std::to_string(index) +
                   " dim " + std::to_string(space.factors[index]));
  }
  std::vector<Operator> parts;
  parts.reserve(space.size());
  for (std::size_t k = 0; k < space.size(); ++k) {
    parts.push_back(k == index ? op : Operator::identity(space.factors[k]));
  }
  return tensor(parts);
}

Operator partial_trace(const Operator& a, const CompositeSpace& space, std::span<const std::size_t> keep) {
  if (space.factors.empty() || space.total() != a.dim()) {
    throw DimError("partial_trace: operator dim " + std::to_string(a.dim()) + " does not match composite space");
  }
  std::vector<bool> kept(space.size(), false);
  for (auto k : keep) {
    if (k >= space.size()) throw DimError("partial_trace: factor index " + std::to_string(k) + " out of range");
    kept[k] = true;
  }
  std::vector<std::size_t> keep_dims, trace_dims;
  for (std::size_t k = 0; k < space.size(); ++k) (kept[k] ? keep_dims : trace_dims).push_back(space.factors[k]);
  const CompositeSpace kept_space{keep_dims};
  const CompositeSpace traced_space{trace_dims};
  const std::size_t nk = kept_space.total();
  const std::size_t nt = traced_space.total();

  // Reassemble a full multi-index from kept and traced digits.
  auto full_index = [&](const std::vector<std::size_t>& kd, const std::vector<std::size_t>& td) {
    std::size_t flat = 0, ik = 0, it = 0;
    for (std::size_t k = 0; k < space.size(); ++k) {
      flat = flat * space.factors[k] + (kept[k] ? kd[ik++] : td[it++]);
    }
    return flat;
  };

  Matrix out = Matrix::Zero(idx(nk), idx(nk));
  for (std::size_t r = 0; r < nk; ++r) {
    const auto rd = digits(r, keep_dims);
    for (std::size_t c = 0; c < nk; ++c) {
      const auto cd = digits(c, keep_dims);
      Complex acc = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        const auto td = digits(t, trace_dims);
        acc += a.matrix()(idx(full_index(rd, td)), idx(full_index(cd, td)));
      }
      out(idx(r), idx(c)) = acc;
    }
  }
  return Operator(std::move(out));
}

Operator partial_trace(const Operator& a, const CompositeSpace& space, std::initializer_list<std::size_t> keep) {
  return partial_trace(a, space, std::span<const std::size_t>(keep.begin(), keep.size()));
}

Ket singlet() {
  const double r = 1.0 / std::sqrt(2.0);
  return Ket{0.0, r, -r, 0.0};
}

Operator interval_projector(std::span<const double> grid, double lo, double hi) {
  if (grid.empty()) throw DimError("interval_projector requires a non-empty grid");
  Matrix m = Matrix::Zero(idx(grid.size()), idx(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (lo <= grid[i] && grid[i] <= hi) m(idx(i), idx(i)) = 1.0;
  }
  return Operator(std::move(m), Flavor::projector);
}

}  // namespace chist
