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
#include <optional>
#include <string>
#include <vector>

#include "chist/framework.hpp"
#include "chist/operator.hpp"
#include "chist/timegrid.hpp"

namespace chist {

/// A history projector F_0 ⊙ F_1 ⊙ ... ⊙ F_f, kept in factored form.
struct History {
  std::vector<Operator> factors;
  std::string label;
  /// Throwaway histories stay in the sample space so the projectors sum to
  /// the history identity, but carry zero probability and never take part
  /// in conditioning.
  bool excluded = false;
};

/// A sample space of product histories on H_0 ⊙ ... ⊙ H_f: mutually
/// orthogonal history projectors that sum to the history identity.
class HistoryFamily {
 public:
  HistoryFamily() = default;

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return histories_.size(); }
  const History& operator[](std::size_t a) const { return histories_.at(a); }
  const std::vector<History>& histories() const { return histories_; }

  /// Index of the history with `label`, or size() if absent.
  std::size_t find(const std::string& label) const;
  /// Set for families built by unitary_family.
  std::optional<std::size_t> unitary_history() const { return unitary_history_; }

  /// Histories with factors reversed on the reversed grid.
  HistoryFamily reversed() const;

 private:
  friend HistoryFamily make_family(TimeGrid, std::size_t, std::vector<History>, double);
  friend HistoryFamily unitary_family(const TimeGrid&, const Ket&, const std::vector<Operator>&, double);
  TimeGrid grid_;
  std::size_t dim_ = 0;
  std::vector<History> histories_;
  std::optional<std::size_t> unitary_history_;
};

/// Validates an arbitrary list of product histories: one projector factor
/// per grid time, pairwise orthogonal, summing to the history identity.
/// Throws GridMismatchError, DimError, NotProjectorError, FamilyError.
HistoryFamily make_family(TimeGrid grid, std::size_t dim, std::vector<History> histories,
                          double tol = Tolerances{}.alg);

/// Cartesian product of one PD per grid time. Labels join the element
/// labels with ",".
HistoryFamily product_family(const TimeGrid& grid, const std::vector<PD>& per_time, double tol = Tolerances{}.alg);

/// P0 at t_0 followed by the product of `later` PDs, plus the throwaway
/// history (I - P0) ⊙ I ⊙ ... ⊙ I labelled "~initial". The throwaway is
/// dropped when P0 = I.
HistoryFamily fixed_initial_family(const TimeGrid& grid, const Operator& initial, const std::vector<PD>& later,
                                   double tol = Tolerances{}.alg);

/// Two-projector PDs {[ψ(t_m)], I - [ψ(t_m)]} at each later time, with ψ
/// evolved by `steps`, on top of a fixed initial [ψ0]. The history that
/// follows [ψ(t_m)] at every time is recorded as the unitary history.
HistoryFamily unitary_family(const TimeGrid& grid, const Ket& psi0, const std::vector<Operator>& steps,
                             double tol = Tolerances{}.alg);

/// Every history projector of `f` commutes with every one of `g`. Two
/// product histories commute iff some factor product vanishes or every pair
/// of factors commutes, so the test runs on factors alone.
bool family_compatible(const HistoryFamily& f, const HistoryFamily& g, double tol = Tolerances{}.alg);

/// The nonzero products Y^α Z^β of two compatible families, labelled
/// "α&β". Throws IncompatibleFrameworksError otherwise.
HistoryFamily family_refinement(const HistoryFamily& f, const HistoryFamily& g, double tol = Tolerances{}.alg);

/// A condition "projector E holds at grid time m".
struct TimeCondition {
  std::size_t time = 0;
  Operator projector;
};

/// Conjunction of time conditions; the empty event is always true.
using HistoryEvent = std::vector<TimeCondition>;

/// Whether history `y` lies inside `e`. Each condition must either contain
/// the factor (E F = F) or be orthogonal to it (E F = 0); anything else
/// means the event is not in the family's event algebra and throws
/// EventError.
bool satisfies(const History& y, const HistoryEvent& e, double tol = Tolerances{}.alg);

/// Dense d^(f+1) history projector. Intended for small checks only.
Operator dense_projector(const History& y);

}  // namespace chist
