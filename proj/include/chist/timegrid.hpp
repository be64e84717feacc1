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

#include <cstddef>
#include <vector>

#include "chist/operator.hpp"

namespace chist {

/// Strictly increasing times t_0 < t_1 < ... < t_f.
class TimeGrid {
 public:
  TimeGrid() = default;
  /// Throws GridMismatchError unless `times` is non-empty and strictly
  /// increasing.
  explicit TimeGrid(std::vector<double> times);
  /// Times 0, 1, ..., count-1.
  static TimeGrid uniform(std::size_t count);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  /// Number of intervals, f.
  std::size_t steps() const { return times_.empty() ? 0 : times_.size() - 1; }
  double operator[](std::size_t m) const { return times_.at(m); }

  /// t'_m = -t_{f-m}: the same instants read backwards.
  TimeGrid reversed() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  std::vector<double> times_;
};

/// Unitary time development on a grid: one operator T(t_{m+1}, t_m) per
/// consecutive pair of grid times.
class Dynamics {
 public:
  Dynamics() = default;
  /// Throws GridMismatchError if the step count does not match the grid,
  /// DimError on mixed dimensions, FlavorError if a step is not unitary.
  Dynamics(TimeGrid grid, std::vector<Operator> steps, double tol = Tolerances{}.alg);

  /// T = I on every interval.
  static Dynamics trivial(TimeGrid grid, std::size_t dim);
  /// The same step unitary on every interval.
  static Dynamics repeated(TimeGrid grid, const Operator& step, double tol = Tolerances{}.alg);
  /// T(t_{m+1}, t_m) = exp(-i (t_{m+1} - t_m) H) with ħ = 1, computed from
  /// the eigendecomposition of H. Throws FlavorError unless H is Hermitian.
  static Dynamics from_hamiltonian(TimeGrid grid, const Operator& hamiltonian, double tol = Tolerances{}.alg);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Operator>& steps() const { return steps_; }
  const Operator& step(std::size_t m) const { return steps_.at(m); }

  /// T(t_to, t_from) for any pair of grid indices. T(t, t) = I and
  /// T(t', t) = T(t, t')^†.
  Operator propagator(std::size_t to, std::size_t from) const;

  /// Adjoint steps in reverse order on the reversed grid.
  Dynamics reversed() const;

 private:
  TimeGrid grid_;
  std::size_t dim_ = 0;
  std::vector<Operator> steps_;
};

/// exp(-i t H) for Hermitian H via eigendecomposition.
Operator unitary_from_hamiltonian(const Operator& hamiltonian, double t, double tol = Tolerances{}.alg);

}  // namespace chist
