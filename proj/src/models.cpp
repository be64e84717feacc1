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

#include "chist/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chist/errors.hpp"

namespace chist {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_orthonormal(const std::vector<Ket>& kets, const char* what, double tol) {
  for (std::size_t i = 0; i < kets.size(); ++i) {
    for (std::size_t j = i; j < kets.size(); ++j) {
      const Complex g = kets[i].inner(kets[j]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(g - expected) > tol) {
        throw NormalizationError(std::string(what) + " is not orthonormal (entries " + std::to_string(i) + ", " +
                                 std::to_string(j) + ")");
      }
    }
  }
}

// Orthonormal completion of `kets` in dimension dim, scanning e_0, e_1, ...
std::vector<Vector> complement(const std::vector<Ket>& kets, std::size_t dim) {
  std::vector<Vector> basis;
  for (const auto& k : kets) basis.push_back(k.amplitudes());
  std::vector<Vector> added;
  for (std::size_t e = 0; e < dim && basis.size() < dim; ++e) {
    Vector v = Vector::Zero(idx(dim));
    v(idx(e)) = 1.0;
    // Two Gram-Schmidt passes keep the completion orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b.dot(v) * b;
    }
    const double n = v.norm();
    if (n < 1e-6) continue;
    v /= n;
    basis.push_back(v);
    added.push_back(v);
  }
  return added;
}

Ket amplitudes_ket(const std::vector<Complex>& c, std::size_t dim, const Tolerances& tol) {
  if (c.size() != dim) {
    throw DimError("expected " + std::to_string(dim) + " amplitudes, got " + std::to_string(c.size()));
  }
  Vector v(idx(dim));
  for (std::size_t j = 0; j < dim; ++j) v(idx(j)) = c[j];
  Ket k(std::move(v));
  if (std::abs(k.norm() - 1.0) > std::max(tol.norm, 1e-12)) {
    throw NormalizationError("amplitudes must satisfy sum |c_j|^2 = 1 (norm = " + std::to_string(k.norm()) + ")");
  }
  return k;
}

HistoryEvent at(std::size_t time, Operator projector) { return {TimeCondition{time, std::move(projector)}}; }

std::optional<double> conditional_or_empty(const HistoryFamily& fam, const ConsistencyReport& report,
                                           const HistoryEvent& target, const HistoryEvent& given,
                                           const Tolerances& tol) {
  try {
    return conditional_probability(fam, report, target, given, tol);
  } catch (const ZeroConditionError&) {
    return std::nullopt;
  }
}

}  // namespace

Operator complete_unitary(const std::vector<Ket>& inputs, const std::vector<Ket>& outputs, double tol) {
  if (inputs.size() != outputs.size()) throw DimError("complete_unitary: input/output count mismatch");
  if (inputs.empty()) throw DimError("complete_unitary: nothing to complete");
  const std::size_t dim = inputs.front().dim();
  for (const auto& k : inputs) {
    if (k.dim() != dim) throw DimError("complete_unitary: input dimension mismatch");
  }
  for (const auto& k : outputs) {
    if (k.dim() != dim) throw DimError("complete_unitary: output dimension mismatch");
  }
  require_orthonormal(inputs, "complete_unitary inputs", 1e-9);
  require_orthonormal(outputs, "complete_unitary outputs", 1e-9);
  const auto in_rest = complement(inputs, dim);
  const auto out_rest = complement(outputs, dim);
  Matrix u = Matrix::Zero(idx(dim), idx(dim));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    u += outputs[i].amplitudes() * inputs[i].amplitudes().adjoint();
  }
  for (std::size_t i = 0; i < in_rest.size(); ++i) u += out_rest[i] * in_rest[i].adjoint();
  return Operator(std::move(u), Flavor::unitary, std::max(tol, 1e-9));
}

// ---------------------------------------------------------------------------
// Measurement model

const char* to_string(MeasurementMode mode) {
  return mode == MeasurementMode::destructive ? "destructive" : "von-neumann";
}

Dynamics MeasurementModel::dynamics() const { return Dynamics(grid(), {prepare, interact}); }

MeasurementModel build_measurement(std::vector<Ket> system_basis, MeasurementMode mode, std::size_t apparatus_dim) {
  if (system_basis.empty()) throw DimError("measurement model needs a system basis");
  const std::size_t ds = system_basis.front().dim();
  if (system_basis.size() != ds) {
    throw DimError("system basis must have " + std::to_string(ds) + " kets, got " +
                   std::to_string(system_basis.size()));
  }
  for (const auto& k : system_basis) {
    if (k.dim() != ds) throw DimError("system basis kets have mixed dimensions");
  }
  require_orthonormal(system_basis, "system basis", 1e-10);
  const std::size_t dm = apparatus_dim == 0 ? ds + 2 : apparatus_dim;
  if (dm < ds + 2) {
    throw DimError("apparatus dim " + std::to_string(dm) + " cannot host M_0, M_1 and " + std::to_string(ds) +
                   " pointer states");
  }

  MeasurementModel model;
  model.mode = mode;
  model.system_basis = std::move(system_basis);
  model.space = CompositeSpace{{ds, dm}};
  model.ready0 = Ket::basis(dm, 0);
  model.ready1 = Ket::basis(dm, 1);
  for (std::size_t j = 0; j < ds; ++j) model.pointers.push_back(Ket::basis(dm, 2 + j));

  std::vector<Ket> in1, out1, in2, out2;
  for (std::size_t j = 0; j < ds; ++j) {
    const Ket& s = model.system_basis[j];
    in1.push_back(tensor(s, model.ready0));
    out1.push_back(tensor(s, model.ready1));
    in2.push_back(tensor(s, model.ready1));
    const Ket& final_s = mode == MeasurementMode::destructive ? model.system_basis.front() : s;
    out2.push_back(tensor(final_s, model.pointers[j]));
  }
  model.prepare = complete_unitary(in1, out1);
  model.interact = complete_unitary(in2, out2);

  std::vector<Operator> pointer_projectors;
  std::vector<std::string> labels;
  Matrix rest = Matrix::Identity(idx(dm), idx(dm));
  for (std::size_t j = 0; j < ds; ++j) {
    pointer_projectors.push_back(dyad(model.pointers[j]));
    rest -= pointer_projectors.back().matrix();
    labels.push_back("M" + std::to_string(j + 1));
  }
  pointer_projectors.push_back(Operator(std::move(rest), Flavor::projector));
  labels.push_back("rest");
  model.pointer_pd = make_pd(std::move(pointer_projectors), std::move(labels));
  return model;
}

MeasurementAnalysis measurement_analysis(const MeasurementModel& model, const std::vector<Complex>& amplitudes,
                                         const Tolerances& tol) {
  const std::size_t ds = model.system_dim();
  amplitudes_ket(amplitudes, ds, tol);
  Vector coords = Vector::Zero(idx(ds));
  for (std::size_t j = 0; j < ds; ++j) coords += amplitudes[j] * model.system_basis[j].amplitudes();
  const Ket big_psi0 = tensor(Ket(coords), model.ready0);

  std::vector<std::string> s_labels;
  for (std::size_t j = 0; j < ds; ++j) s_labels.push_back("s" + std::to_string(j + 1));
  const PD s_pd = lift(basis_pd(model.system_basis, s_labels), model.space, 0);
  const PD p_pd = lift(model.pointer_pd, model.space, 1);
  const HistoryFamily fam = fixed_initial_family(model.grid(), dyad(big_psi0, 1e-10), {s_pd, p_pd}, tol.alg);

  MeasurementAnalysis out;
  out.report = decoherence_functional(fam, model.dynamics(), tol);
  if (!out.report.consistent) {
    throw InconsistentFamilyError("measurement family failed the consistency check");
  }
  for (std::size_t k = 0; k < ds; ++k) {
    out.pointer_probabilities.push_back(probability(fam, out.report, at(2, p_pd[k]), tol));
  }
  out.rest_probability = probability(fam, out.report, at(2, p_pd[ds]), tol);
  out.joint.assign(ds, std::vector<double>(ds, 0.0));
  out.conditional.assign(ds, std::vector<std::optional<double>>(ds));
  for (std::size_t j = 0; j < ds; ++j) {
    for (std::size_t k = 0; k < ds; ++k) {
      HistoryEvent both{TimeCondition{1, s_pd[j]}, TimeCondition{2, p_pd[k]}};
      out.joint[j][k] = probability(fam, out.report, both, tol);
      out.conditional[j][k] = conditional_or_empty(fam, out.report, at(1, s_pd[j]), at(2, p_pd[k]), tol);
    }
  }
  return out;
}

PreparationAnalysis preparation_analysis(const MeasurementModel& model, const std::vector<Complex>& amplitudes,
                                         const Tolerances& tol) {
  if (model.mode != MeasurementMode::von_neumann) {
    throw ModelError("preparation analysis requires a von Neumann (non-destructive) model");
  }
  const std::size_t ds = model.system_dim();
  amplitudes_ket(amplitudes, ds, tol);
  Vector coords = Vector::Zero(idx(ds));
  for (std::size_t j = 0; j < ds; ++j) coords += amplitudes[j] * model.system_basis[j].amplitudes();
  const Ket big_psi0 = tensor(Ket(coords), model.ready0);

  std::vector<std::string> s_labels;
  for (std::size_t j = 0; j < ds; ++j) s_labels.push_back("s" + std::to_string(j + 1));
  const PD s_pd = lift(basis_pd(model.system_basis, s_labels), model.space, 0);
  const PD p_pd = lift(model.pointer_pd, model.space, 1);
  const PD final_pd = common_refinement(s_pd, p_pd, tol.alg);
  const std::size_t d = model.space.total();
  const HistoryFamily fam =
      fixed_initial_family(model.grid(), dyad(big_psi0, 1e-10), {trivial_pd(d), final_pd}, tol.alg);

  PreparationAnalysis out;
  out.report = decoherence_functional(fam, model.dynamics(), tol);
  for (std::size_t j = 0; j < ds; ++j) {
    out.pointer_probabilities.push_back(probability(fam, out.report, at(2, p_pd[j]), tol));
  }
  out.joint.assign(ds, std::vector<double>(ds, 0.0));
  out.conditional.assign(ds, std::vector<std::optional<double>>(ds));
  for (std::size_t i = 0; i < ds; ++i) {
    for (std::size_t j = 0; j < ds; ++j) {
      const HistoryEvent both{TimeCondition{2, s_pd[i]}, TimeCondition{2, p_pd[j]}};
      out.joint[i][j] = probability(fam, out.report, both, tol);
      out.conditional[i][j] = conditional_or_empty(fam, out.report, at(2, s_pd[i]), at(2, p_pd[j]), tol);
    }
  }
  return out;
}

ContextualAnalysis contextual_preparation(const std::vector<Ket>& states, const std::vector<Complex>& amplitudes,
                                          const Tolerances& tol) {
  if (states.empty()) throw DimError("contextual preparation needs at least one state");
  const std::size_t n = states.size();
  const std::size_t ds = states.front().dim();
  for (const auto& r : states) {
    if (r.dim() != ds) throw DimError("contextual states have mixed dimensions");
    if (!r.is_normalized(1e-10)) throw NormalizationError("contextual states must be normalized");
  }
  amplitudes_ket(amplitudes, n, tol);
  const std::size_t dm = n + 2;
  const CompositeSpace space{{ds, dm}};

  Vector final = Vector::Zero(idx(ds * dm));
  std::vector<Ket> pointers;
  for (std::size_t j = 0; j < n; ++j) {
    pointers.push_back(Ket::basis(dm, 2 + j));
    final += amplitudes[j] * tensor(states[j], pointers[j]).amplitudes();
  }
  const Ket psi0 = tensor(Ket::basis(ds, 0), Ket::basis(dm, 0));
  ContextualAnalysis out;
  out.final_state = Ket(final);
  out.space = space;
  const Operator step = complete_unitary({psi0}, {out.final_state});

  // Contextual PD: for each pointer j, [r_j] and its complement on the
  // system, tensored with that pointer; the remainder carries no pointer.
  std::vector<Operator> elements;
  std::vector<std::string> labels;
  Matrix pointer_sum = Matrix::Zero(idx(dm), idx(dm));
  std::vector<Operator> pointer_projectors;
  for (std::size_t j = 0; j < n; ++j) {
    const Operator pj = dyad(pointers[j]);
    pointer_projectors.push_back(embed(pj, space, 1));
    pointer_sum += pj.matrix();
    const Operator rj = dyad(states[j], 1e-10);
    elements.push_back(tensor(rj, pj));
    labels.push_back("r" + std::to_string(j + 1) + "&M" + std::to_string(j + 1));
    const Matrix not_r = Matrix::Identity(idx(ds), idx(ds)) - rj.matrix();
    if (frobenius_norm(not_r) > tol.alg) {
      elements.push_back(tensor(Operator(not_r, Flavor::projector, 1e-9), pj));
      labels.push_back("~r" + std::to_string(j + 1) + "&M" + std::to_string(j + 1));
    }
  }
  const Operator rest(Matrix::Identity(idx(dm), idx(dm)) - pointer_sum, Flavor::projector);
  elements.push_back(embed(rest, space, 1));
  labels.push_back("rest");
  const PD context_pd = make_pd(std::move(elements), std::move(labels), 1e-9);

  const TimeGrid grid = TimeGrid::uniform(2);
  const HistoryFamily fam = fixed_initial_family(grid, dyad(psi0), {context_pd}, tol.alg);
  out.report = decoherence_functional(fam, Dynamics(grid, {step}), tol);
  for (std::size_t j = 0; j < n; ++j) {
    out.pointer_probabilities.push_back(probability(fam, out.report, at(1, pointer_projectors[j]), tol));
    const std::size_t rj = context_pd.find("r" + std::to_string(j + 1) + "&M" + std::to_string(j + 1));
    out.conditional.push_back(
        conditional_or_empty(fam, out.report, at(1, context_pd[rj]), at(1, pointer_projectors[j]), tol));
  }
  return out;
}

// ---------------------------------------------------------------------------
// POVMs

PovmElementSet make_povm(std::vector<Operator> elements, std::vector<std::string> labels, double tol) {
  if (elements.empty()) throw CompletenessError("a POVM needs at least one element");
  if (labels.empty()) {
    for (std::size_t j = 0; j < elements.size(); ++j) labels.push_back(std::to_string(j));
  }
  if (labels.size() != elements.size()) throw DimError("POVM label count mismatch");
  const std::size_t d = elements.front().dim();
  Matrix sum = Matrix::Zero(idx(d), idx(d));
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (elements[j].dim() != d) throw DimError("POVM elements have mixed dimensions");
    if (!elements[j].is_positive(tol)) {
      throw FlavorError("POVM element " + std::to_string(j) + " '" + labels[j] + "' is not positive");
    }
    elements[j] = elements[j].with_flavor(Flavor::positive, tol);
    sum += elements[j].matrix();
  }
  const double residual = frobenius_norm(sum - Matrix::Identity(idx(d), idx(d)));
  if (residual > tol) {
    throw CompletenessError("POVM elements do not sum to the identity: |sum - I| = " + std::to_string(residual));
  }
  return PovmElementSet{std::move(elements), std::move(labels)};
}

PovmElementSet povm_from_ancilla(const PD& pd, const CompositeSpace& space, const Ket& ancilla, double tol) {
  if (space.size() != 2) throw DimError("povm_from_ancilla expects a system ⊗ ancilla space");
  if (pd.dim() != space.total()) throw DimError("PD does not act on system ⊗ ancilla");
  if (ancilla.dim() != space.factors[1]) throw DimError("ancilla ket has the wrong dimension");
  if (!ancilla.is_normalized()) throw NormalizationError("ancilla state must be normalized");
  const Operator lifted = embed(dyad(ancilla), space, 1);
  std::vector<Operator> elements;
  for (const auto& p : pd.projectors()) {
    Matrix r = partial_trace(p * lifted, space, {0}).matrix();
    r = 0.5 * (r + r.adjoint()).eval();
    elements.push_back(Operator(std::move(r)));
  }
  return make_povm(std::move(elements), pd.labels(), tol);
}

double povm_probability(const PovmElementSet& povm, std::size_t j, const Ket& psi) {
  if (j >= povm.size()) throw DimError("POVM element index out of range");
  return psi.inner(povm.elements[j].apply(psi)).real();
}

// ---------------------------------------------------------------------------
// Einstein locality

LocalityExperiment make_locality_experiment(std::size_t dim_a, std::size_t dim_b, std::size_t dim_c,
                                            Ket initial_ab, TimeGrid grid, const std::vector<Operator>& a_steps,
                                            const std::vector<Operator>& bc_steps, std::vector<PD> a_pds) {
  if (a_steps.size() != grid.steps() || bc_steps.size() != grid.steps()) {
    throw GridMismatchError("locality experiment needs one A step and one BC step per interval");
  }
  LocalityExperiment exp;
  exp.dim_a = dim_a;
  exp.dim_b = dim_b;
  exp.dim_c = dim_c;
  exp.initial_ab = std::move(initial_ab);
  exp.grid = std::move(grid);
  for (std::size_t m = 0; m < a_steps.size(); ++m) exp.steps.push_back(tensor(a_steps[m], bc_steps[m]));
  exp.a_pds = std::move(a_pds);
  return exp;
}

FactorizedStep factorize(const Operator& t, std::size_t dim_a, std::size_t dim_rest, double tol) {
  if (t.dim() != dim_a * dim_rest) throw DimError("factorize: operator does not act on H_A ⊗ H_R");
  // Realignment: R[(i,j),(k,l)] = T[(i,k),(j,l)] has rank one iff T = A ⊗ B.
  const auto na = idx(dim_a), nr = idx(dim_rest);
  Matrix realigned(na * na, nr * nr);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j)
      for (Eigen::Index k = 0; k < nr; ++k)
        for (Eigen::Index l = 0; l < nr; ++l) realigned(i * na + j, k * nr + l) = t.matrix()(i * nr + k, j * nr + l);
  Eigen::JacobiSVD<Matrix> svd(realigned, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s0 = svd.singularValues()(0);
  Matrix a(na, na), b(nr, nr);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) a(i, j) = std::sqrt(s0) * svd.matrixU()(i * na + j, 0);
  for (Eigen::Index k = 0; k < nr; ++k)
    for (Eigen::Index l = 0; l < nr; ++l) b(k, l) = std::sqrt(s0) * std::conj(svd.matrixV()(k * nr + l, 0));
  // Put the scale into B so that A is unitary.
  const double scale = std::sqrt((a.adjoint() * a).trace().real() / static_cast<double>(dim_a));
  a /= scale;
  b *= scale;
  Matrix product(na * nr, na * nr);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) product.block(i * nr, j * nr, nr, nr) = a(i, j) * b;
  const double residual = frobenius_norm(t.matrix() - product);
  if (residual > tol) {
    throw FactorizationError("time development does not factor as T_A ⊗ T_BC (residual " + std::to_string(residual) +
                             ")");
  }
  return FactorizedStep{Operator(std::move(a), Flavor::unitary, 1e-8), Operator(std::move(b), Flavor::unitary, 1e-8)};
}

LocalityReport einstein_locality_check(const LocalityExperiment& exp, const std::vector<Ket>& c_states,
                                       const Tolerances& tol) {
  constexpr double kLocalityBound = 1e-10;
  const CompositeSpace space = exp.space();
  const std::size_t d = space.total();
  if (exp.initial_ab.dim() != exp.dim_a * exp.dim_b) throw DimError("initial AB state has the wrong dimension");
  if (exp.a_pds.size() != exp.grid.steps()) throw GridMismatchError("need one A-framework per later time");
  for (const auto& t : exp.steps) {
    if (t.dim() != d) throw DimError("locality step has the wrong dimension");
    factorize(t, exp.dim_a, exp.dim_b * exp.dim_c, tol.alg);
  }
  if (c_states.empty()) throw DimError("locality check needs at least one C-state");

  std::vector<PD> lifted;
  const CompositeSpace a_rest{{exp.dim_a, exp.dim_b * exp.dim_c}};
  for (const auto& pd : exp.a_pds) lifted.push_back(lift(pd, a_rest, 0));
  const Dynamics dyn(exp.grid, exp.steps);

  LocalityReport out;
  std::optional<ConsistencyReport> reference;
  for (const auto& c : c_states) {
    if (c.dim() != exp.dim_c) throw DimError("C-state has the wrong dimension");
    const Ket psi0 = tensor(exp.initial_ab, c.normalized());
    const HistoryFamily fam = fixed_initial_family(exp.grid, dyad(psi0, 1e-10), lifted, tol.alg);
    ConsistencyReport r = decoherence_functional(fam, dyn, tol);
    ++out.states;
    if (!reference) {
      reference = r;
      out.labels = r.labels;
      out.reference_probabilities = r.probabilities();
      out.reference_consistent = r.consistent;
      continue;
    }
    const auto p = r.probabilities();
    for (std::size_t a = 0; a < p.size(); ++a) {
      out.max_probability_deviation =
          std::max(out.max_probability_deviation, std::abs(p[a] - out.reference_probabilities[a]));
      for (std::size_t b = 0; b < p.size(); ++b) {
        if (a == b) continue;
        const double dev = std::abs(std::abs(r.decoherence(idx(a), idx(b))) -
                                    std::abs(reference->decoherence(idx(a), idx(b))));
        out.max_residual_deviation = std::max(out.max_residual_deviation, dev);
      }
    }
    if (r.consistent != reference->consistent) out.verdicts_agree = false;
  }
  out.passed = out.verdicts_agree && out.max_probability_deviation <= kLocalityBound &&
               out.max_residual_deviation <= kLocalityBound;
  return out;
}

// ---------------------------------------------------------------------------
// Singlet

CorrelationTable singlet_correlation(Axis axis_a, Axis axis_b, const Tolerances& tol) {
  const CompositeSpace space{{2, 2}};
  const PD pa = lift(spin_pd(axis_a), space, 0);
  const PD pb = lift(spin_pd(axis_b), space, 1);
  const PD joint_pd = common_refinement(pa, pb, tol.alg);
  const TimeGrid grid = TimeGrid::uniform(2);
  const HistoryFamily fam = fixed_initial_family(grid, dyad(singlet()), {joint_pd}, tol.alg);
  const ConsistencyReport report = decoherence_functional(fam, Dynamics::trivial(grid, 4), tol);

  CorrelationTable table;
  table.axis_a = axis_a;
  table.axis_b = axis_b;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      table.joint[i][j] = probability(fam, report, HistoryEvent{TimeCondition{1, pa[i]}, TimeCondition{1, pb[j]}}, tol);
      table.conditional[i][j] = conditional_probability(fam, report, at(1, pb[j]), at(1, pa[i]), tol);
    }
  }
  return table;
}

}  // namespace chist
