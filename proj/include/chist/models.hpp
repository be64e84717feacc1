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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chist/dynamics.hpp"
#include "chist/framework.hpp"
#include "chist/histories.hpp"
#include "chist/operator.hpp"
#include "chist/timegrid.hpp"

namespace chist {

/// Extends the partial isometry |inputs[i]> -> |outputs[i]> to a unitary on
/// the whole space. Both lists must be orthonormal. The complements are
/// built by Gram-Schmidt over the standard basis in index order, so the
/// completion is deterministic.
Operator complete_unitary(const std::vector<Ket>& inputs, const std::vector<Ket>& outputs,
                          double tol = Tolerances{}.alg);

// ---------------------------------------------------------------------------
// Measurement and preparation

enum class MeasurementMode {
  /// |s^j>|M_1> -> |s^1>|M^j>: the particle always ends in |s^1>.
  destructive,
  /// |s^j>|M_1> -> |s^j>|M^j>: the particle state is left unchanged.
  von_neumann,
};

const char* to_string(MeasurementMode mode);

/// Particle ⊗ apparatus on times t_0 < t_1 < t_2. Between t_0 and t_1 the
/// apparatus goes from |M_0> to the ready state |M_1>; between t_1 and t_2
/// the particle interacts with it.
///
/// The apparatus basis is laid out as |M_0> = e_0, |M_1> = e_1,
/// |M^j> = e_{2+j}; any further dimensions are spare.
struct MeasurementModel {
  MeasurementMode mode = MeasurementMode::destructive;
  std::vector<Ket> system_basis;
  Ket ready0;
  Ket ready1;
  std::vector<Ket> pointers;
  CompositeSpace space;
  Operator prepare;   // T(t_1, t_0)
  Operator interact;  // T(t_2, t_1)
  /// {[M^j]} on the apparatus plus one remainder projector labelled "rest".
  PD pointer_pd;

  std::size_t system_dim() const { return space.factors.at(0); }
  std::size_t apparatus_dim() const { return space.factors.at(1); }
  TimeGrid grid() const { return TimeGrid::uniform(3); }
  Dynamics dynamics() const;
};

/// Throws DimError if the apparatus cannot host orthonormal
/// {M_0, M_1, M^1, ..., M^{d_s}}, NormalizationError if the system basis is
/// not orthonormal. `apparatus_dim` = 0 selects the minimum d_s + 2.
MeasurementModel build_measurement(std::vector<Ket> system_basis, MeasurementMode mode,
                                   std::size_t apparatus_dim = 0);

/// Results on the family [Ψ_0] ⊙ {[s^j]} ⊙ {P^k}.
struct MeasurementAnalysis {
  ConsistencyReport report;
  /// Pr(P^k at t_2), k over pointer positions.
  std::vector<double> pointer_probabilities;
  /// Pr(rest at t_2); zero for a working apparatus.
  double rest_probability = 0.0;
  /// joint[j][k] = Pr(s^j at t_1 AND P^k at t_2).
  std::vector<std::vector<double>> joint;
  /// conditional[j][k] = Pr(s^j at t_1 | P^k at t_2), absent when
  /// Pr(P^k) = 0.
  std::vector<std::vector<std::optional<double>>> conditional;
};

/// Throws NormalizationError unless Σ|c_j|² = 1; InconsistentFamilyError
/// if the family fails the consistency check.
MeasurementAnalysis measurement_analysis(const MeasurementModel& model, const std::vector<Complex>& amplitudes,
                                         const Tolerances& tol = Tolerances{});

/// Single-time analysis at t_2 with the PD {[s^i] ⊗ P^j}. Conditioning on
/// the pointer plays the role usually given to wave-function collapse.
struct PreparationAnalysis {
  ConsistencyReport report;
  std::vector<double> pointer_probabilities;
  /// joint[i][j] = Pr([s^i] AND P^j at t_2).
  std::vector<std::vector<double>> joint;
  /// conditional[i][j] = Pr([s^i] at t_2 | P^j at t_2).
  std::vector<std::vector<std::optional<double>>> conditional;
};

/// Requires a von Neumann model (ModelError otherwise).
PreparationAnalysis preparation_analysis(const MeasurementModel& model, const std::vector<Complex>& amplitudes,
                                         const Tolerances& tol = Tolerances{});

/// Preparation into normalized but not necessarily orthogonal states
/// |r_j>, correlated with orthogonal pointer states:
/// |Ψ_0> -> Σ_j c_j |r_j> ⊗ |M^j>.
struct ContextualAnalysis {
  ConsistencyReport report;
  std::vector<double> pointer_probabilities;
  /// Pr([r_j] at t_1 | P^j at t_1), absent when Pr(P^j) = 0.
  std::vector<std::optional<double>> conditional;
  /// The evolved state Σ_j c_j |r_j> ⊗ |M^j>.
  Ket final_state;
  CompositeSpace space;
};

ContextualAnalysis contextual_preparation(const std::vector<Ket>& states, const std::vector<Complex>& amplitudes,
                                          const Tolerances& tol = Tolerances{});

// ---------------------------------------------------------------------------
// POVMs

/// Positive operators summing to the identity.
struct PovmElementSet {
  std::vector<Operator> elements;
  std::vector<std::string> labels;

  std::size_t size() const { return elements.size(); }
  std::size_t dim() const { return elements.empty() ? 0 : elements.front().dim(); }
};

/// Throws FlavorError for a non-positive element, CompletenessError when
/// the elements do not sum to I.
PovmElementSet make_povm(std::vector<Operator> elements, std::vector<std::string> labels = {},
                         double tol = Tolerances{}.alg);

/// R_j = Tr_A(P^j (I_s ⊗ [a_0])) for a PD on H_s ⊗ H_A.
PovmElementSet povm_from_ancilla(const PD& pd, const CompositeSpace& space, const Ket& ancilla,
                                 double tol = Tolerances{}.alg);

/// Tr(R_j [ψ]).
double povm_probability(const PovmElementSet& povm, std::size_t j, const Ket& psi);

// ---------------------------------------------------------------------------
// Einstein locality

/// Systems A, B, C with A isolated from BC: T_ABC = T_A ⊗ T_BC on every
/// interval. The initial state is |Φ_0>_AB ⊗ |φ_0>_C with |φ_0>_C varied.
struct LocalityExperiment {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::size_t dim_c = 0;
  Ket initial_ab;
  TimeGrid grid;
  /// T_ABC per interval, factor order A, B, C.
  std::vector<Operator> steps;
  /// One PD on H_A per time after t_0.
  std::vector<PD> a_pds;

  CompositeSpace space() const { return {{dim_a, dim_b, dim_c}}; }
};

LocalityExperiment make_locality_experiment(std::size_t dim_a, std::size_t dim_b, std::size_t dim_c,
                                            Ket initial_ab, TimeGrid grid, const std::vector<Operator>& a_steps,
                                            const std::vector<Operator>& bc_steps, std::vector<PD> a_pds);

struct FactorizedStep {
  Operator a;
  Operator rest;
};

/// Splits T on H_A ⊗ H_R into unitaries T_A ⊗ T_R via operator-Schmidt
/// decomposition. Throws FactorizationError if T is not a product within
/// tol.
FactorizedStep factorize(const Operator& t, std::size_t dim_a, std::size_t dim_rest, double tol = Tolerances{}.alg);

struct LocalityReport {
  std::size_t states = 0;
  /// Max |p_c(α) - p_ref(α)| over C-states and histories.
  double max_probability_deviation = 0.0;
  /// Max | |D_c(α,β)| - |D_ref(α,β)| | over C-states and α ≠ β.
  double max_residual_deviation = 0.0;
  bool verdicts_agree = true;
  bool passed = true;
  std::vector<std::string> labels;
  std::vector<double> reference_probabilities;
  bool reference_consistent = true;
};

/// Runs the A-only family [Ψ_0] ⊙ {P_A ⊗ I_BC} ⊙ ... for every C-state and
/// compares the results. Passes iff both deviations are ≤ 1e-10 and the
/// consistency verdict never changes. Throws FactorizationError if a step
/// does not factor as T_A ⊗ T_BC.
LocalityReport einstein_locality_check(const LocalityExperiment& exp, const std::vector<Ket>& c_states,
                                       const Tolerances& tol = Tolerances{});

// ---------------------------------------------------------------------------
// Singlet correlations

/// Born analysis of the singlet with one spin axis per particle. Index 0 is
/// the + outcome, 1 the - outcome.
struct CorrelationTable {
  Axis axis_a = Axis::z;
  Axis axis_b = Axis::z;
  std::array<std::array<double, 2>, 2> joint{};
  /// conditional[i][j] = Pr(b = j | a = i).
  std::array<std::array<double, 2>, 2> conditional{};
};

CorrelationTable singlet_correlation(Axis axis_a, Axis axis_b, const Tolerances& tol = Tolerances{});

}  // namespace chist
