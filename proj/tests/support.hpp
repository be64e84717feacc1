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

// Random generators and brute-force oracles shared by the test binaries.
// Nothing here is used by the library itself.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "chist/dynamics.hpp"
#include "chist/framework.hpp"
#include "chist/histories.hpp"
#include "chist/operator.hpp"

namespace chist::testing {

using Rng = std::mt19937_64;

inline Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline Ket random_ket(std::size_t d, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gaussian_complex(rng);
  return Ket(v / v.norm());
}

inline std::vector<Complex> random_amplitudes(std::size_t d, Rng& rng) {
  const Ket k = random_ket(d, rng);
  std::vector<Complex> c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = k[i];
  return c;
}

/// Haar unitary from the QR decomposition of a complex Gaussian matrix.
inline Matrix random_unitary_matrix(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gaussian_complex(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex diag = r(j, j);
    q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

inline Operator random_unitary(std::size_t d, Rng& rng) {
  return Operator(random_unitary_matrix(d, rng), Flavor::unitary, 1e-9);
}

/// Random PD: columns of a Haar unitary split into `parts` nonempty groups.
inline PD random_pd(std::size_t d, std::size_t parts, Rng& rng) {
  const Matrix u = random_unitary_matrix(d, rng);
  std::vector<std::size_t> owner(d);
  for (std::size_t i = 0; i < d; ++i) owner[i] = i < parts ? i : std::uniform_int_distribution<std::size_t>(0, parts - 1)(rng);
  std::shuffle(owner.begin(), owner.end(), rng);
  std::vector<Operator> projectors;
  for (std::size_t p = 0; p < parts; ++p) {
    Matrix m = Matrix::Zero(u.rows(), u.cols());
    for (std::size_t i = 0; i < d; ++i) {
      if (owner[i] == p) m += u.col(static_cast<Eigen::Index>(i)) * u.col(static_cast<Eigen::Index>(i)).adjoint();
    }
    m = 0.5 * (m + m.adjoint()).eval();
    projectors.push_back(Operator(m, Flavor::projector, 1e-9));
  }
  return make_pd(std::move(projectors));
}

inline PD random_pd(std::size_t d, Rng& rng) {
  return random_pd(d, std::uniform_int_distribution<std::size_t>(1, d)(rng), rng);
}

/// Rank-one PD from the columns of a Haar unitary.
inline PD random_basis_pd(std::size_t d, Rng& rng) { return random_pd(d, d, rng); }

/// Decoherence functional from chain kets K(Y)|ψ> for a family whose first
/// factor is the fixed [ψ]: D(α, β) = <K_α ψ | K_β ψ>. Evaluated ket by ket,
/// never forming chain operators.
inline Matrix chain_ket_oracle(const HistoryFamily& fam, const Dynamics& dyn, const Ket& psi) {
  const auto n = static_cast<Eigen::Index>(fam.size());
  std::vector<Vector> kets;
  for (const auto& y : fam.histories()) {
    Vector v = y.factors[0].matrix() * psi.amplitudes();
    for (std::size_t m = 0; m + 1 < y.factors.size(); ++m) {
      v = (dyn.step(m).matrix() * v).eval();
      v = (y.factors[m + 1].matrix() * v).eval();
    }
    kets.push_back(v);
  }
  Matrix d(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) d(a, b) = kets[static_cast<std::size_t>(a)].dot(kets[static_cast<std::size_t>(b)]);
  return d;
}

/// Spin rotation exp(-i θ σ_axis / 2) written out by hand.
inline Operator rotation(Axis axis, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix m(2, 2);
  switch (axis) {
    case Axis::x: m << c, Complex(0, -s), Complex(0, -s), c; break;
    case Axis::y: m << c, -s, s, c; break;
    case Axis::z: m << Complex(c, -s), 0, 0, Complex(c, s); break;
  }
  return Operator(m, Flavor::unitary);
}

}  // namespace chist::testing
