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

#include "chist/timegrid.hpp"

#include <cmath>
#include <string>

#include "chist/errors.hpp"

namespace chist {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty()) throw GridMismatchError("a time grid needs at least one time");
  for (std::size_t m = 1; m < times_.size(); ++m) {
    if (!(times_[m] > times_[m - 1])) {
      throw GridMismatchError("grid times must be strictly increasing (t_" + std::to_string(m) +
                              " <= t_" + std::to_string(m - 1) + ")");
    }
  }
}

TimeGrid TimeGrid::uniform(std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t m = 0; m < count; ++m) t[m] = static_cast<double>(m);
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::reversed() const {
  std::vector<double> t(times_.rbegin(), times_.rend());
  for (auto& v : t) v = -v;
  return TimeGrid(std::move(t));
}

Dynamics::Dynamics(TimeGrid grid, std::vector<Operator> steps, double tol)
    : grid_(std::move(grid)), steps_(std::move(steps)) {
  if (steps_.size() != grid_.steps()) {
    throw GridMismatchError("dynamics has " + std::to_string(steps_.size()) + " steps but the grid has " +
                            std::to_string(grid_.steps()) + " intervals");
  }
  if (steps_.empty()) return;
  dim_ = steps_.front().dim();
  for (std::size_t m = 0; m < steps_.size(); ++m) {
    if (steps_[m].dim() != dim_) throw DimError("dynamics step " + std::to_string(m) + " has the wrong dimension");
    if (steps_[m].flavor() != Flavor::unitary) {
      if (!steps_[m].is_unitary(tol)) {
        throw FlavorError("dynamics step " + std::to_string(m) + " is not unitary");
      }
      steps_[m] = steps_[m].with_flavor(Flavor::unitary, tol);
    }
  }
}

Dynamics Dynamics::trivial(TimeGrid grid, std::size_t dim) {
  std::vector<Operator> steps(grid.steps(), Operator::unchecked(Matrix::Identity(static_cast<Eigen::Index>(dim),
                                                                                  static_cast<Eigen::Index>(dim)),
                                                                Flavor::unitary));
  Dynamics d(std::move(grid), std::move(steps));
  d.dim_ = dim;
  return d;
}

Dynamics Dynamics::repeated(TimeGrid grid, const Operator& step, double tol) {
  std::vector<Operator> steps(grid.steps(), step);
  Dynamics d(std::move(grid), std::move(steps), tol);
  d.dim_ = step.dim();
  return d;
}

Operator unitary_from_hamiltonian(const Operator& hamiltonian, double t, double tol) {
  if (!hamiltonian.is_hermitian(tol)) throw FlavorError("Hamiltonian must be Hermitian");
  const Matrix h = 0.5 * (hamiltonian.matrix() + hamiltonian.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(Complex(0.0, -t * w(i)));
  Matrix u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  return Operator(std::move(u), Flavor::unitary, std::max(tol, 1e-9));
}

Dynamics Dynamics::from_hamiltonian(TimeGrid grid, const Operator& hamiltonian, double tol) {
  std::vector<Operator> steps;
  steps.reserve(grid.steps());
  for (std::size_t m = 0; m < grid.steps(); ++m) {
    steps.push_back(unitary_from_hamiltonian(hamiltonian, grid[m + 1] - grid[m], tol));
  }
  Dynamics d(std::move(grid), std::move(steps), tol);
  d.dim_ = hamiltonian.dim();
  return d;
}

Operator Dynamics::propagator(std::size_t to, std::size_t from) const {
  if (to >= grid_.size() || from >= grid_.size()) throw GridMismatchError("propagator index outside the grid");
  Operator u = Operator::identity(dim_).with_flavor(Flavor::unitary);
  if (to >= from) {
    for (std::size_t m = from; m < to; ++m) u = steps_[m] * u;
    return u;
  }
  return propagator(from, to).adjoint();
}

Dynamics Dynamics::reversed() const {
  std::vector<Operator> steps;
  steps.reserve(steps_.size());
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) steps.push_back(it->adjoint());
  Dynamics d(grid_.reversed(), std::move(steps));
  d.dim_ = dim_;
  return d;
}

}  // namespace chist
