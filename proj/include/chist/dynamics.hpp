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
#include <cstdint>
#include <string>
#include <vector>

#include "chist/framework.hpp"
#include "chist/histories.hpp"
#include "chist/operator.hpp"
#include "chist/timegrid.hpp"

namespace chist {

/// K(Y) = F_f T(t_f, t_{f-1}) F_{f-1} ... F_1 T(t_1, t_0) F_0. Not a
/// projector in general.
struct ChainOperator {
  Operator value;
  std::string label;
};

/// Throws GridMismatchError if the history has a different number of times
/// than the dynamics grid, DimError on a dimension mismatch.
ChainOperator chain_operator(const History& y, const Dynamics& dyn);

/// Decoherence functional D(α, β) = Tr[K(Y^α)^† K(Y^β)] of a family, with
/// the consistency verdict and the history weights W(α) = D(α, α).
struct ConsistencyReport {
  Matrix decoherence;
  std::vector<std::string> labels;
  std::vector<bool> excluded;
  /// Diagonal of D; excluded (throwaway) histories are assigned zero.
  std::vector<double> weights;
  /// max |D(α, β)| over α ≠ β.
  double max_offdiag_residual = 0.0;
  /// The pair attaining the largest |D(α, β)| relative to its bound.
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  /// Consistent iff every |D(α, β)| ≤ max(tol.consistency √(D(α,α) D(β,β)), tol.floor).
  bool consistent = true;
  Tolerances tolerances;

  double total_weight() const;
  /// weights / total_weight().
  std::vector<double> probabilities() const;
};

/// Throws GridMismatchError unless the family and the dynamics share a grid.
ConsistencyReport decoherence_functional(const HistoryFamily& fam, const Dynamics& dyn,
                                         const Tolerances& tol = Tolerances{});

/// Two-time weight Tr(Q^k T(t_1, t_0) P^j T(t_0, t_1)) for pd0 at t_0 and
/// pd1 at t_1. Throws GridMismatchError unless `dyn` spans two times.
double born_weight(const PD& pd0, const PD& pd1, const Dynamics& dyn, std::size_t j, std::size_t k);

/// |<φ|ψ(t_1)>|² with ψ(t_1) = T ψ: the weight computed from the evolved
/// initial state.
double born_weight_forward(const Ket& psi, const Ket& phi, const Operator& step);
/// |<ψ|φ_0>|² with φ_0 = T^† φ: the same weight obtained by evolving the
/// final ket backwards, with no reference to the evolved initial state.
double born_weight_backward(const Ket& psi, const Ket& phi, const Operator& step);

/// Pr(target) = Σ_{α ∈ target} W(α) / Σ_α W(α) over non-excluded histories.
/// Throws InconsistentFamilyError if the report is inconsistent.
double probability(const HistoryFamily& fam, const ConsistencyReport& report, const HistoryEvent& target,
                   const Tolerances& tol = Tolerances{});
double probability(const HistoryFamily& fam, const Dynamics& dyn, const HistoryEvent& target,
                   const Tolerances& tol = Tolerances{});

/// Pr(target | given). Throws InconsistentFamilyError on an inconsistent
/// family and ZeroConditionError when the condition has zero weight.
double conditional_probability(const HistoryFamily& fam, const ConsistencyReport& report,
                               const HistoryEvent& target, const HistoryEvent& given,
                               const Tolerances& tol = Tolerances{});
double conditional_probability(const HistoryFamily& fam, const Dynamics& dyn, const HistoryEvent& target,
                               const HistoryEvent& given, const Tolerances& tol = Tolerances{});

/// Draws one history index with probability W(α) / Σ W. The draw is a pure
/// function of `seed`. Throws InconsistentFamilyError.
std::size_t sample_history(const ConsistencyReport& report, std::uint64_t seed);
std::size_t sample_history(const HistoryFamily& fam, const Dynamics& dyn, std::uint64_t seed,
                           const Tolerances& tol = Tolerances{});
/// Counts per history over `draws` samples from one seeded generator.
std::vector<std::size_t> sample_counts(const ConsistencyReport& report, std::size_t draws, std::uint64_t seed);

/// Histories commute pairwise and their common refinement is consistent
/// under `dyn`.
bool family_compatible(const HistoryFamily& f, const HistoryFamily& g, const Dynamics& dyn,
                       const Tolerances& tol = Tolerances{});

}  // namespace chist
