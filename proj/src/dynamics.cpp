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

#include "chist/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chist/errors.hpp"

namespace chist {

namespace {

void require_shared_grid(const HistoryFamily& fam, const Dynamics& dyn) {
  if (!(fam.grid() == dyn.grid())) {
    throw GridMismatchError("family and dynamics are defined on different time grids");
  }
  if (dyn.dim() != 0 && dyn.dim() != fam.dim()) throw DimError("family and dynamics act on different dimensions");
}

void require_consistent(const ConsistencyReport& report) {
  if (!report.consistent) {
    throw InconsistentFamilyError("family is inconsistent (|D(" + report.labels[report.worst_row] + ", " +
                                  report.labels[report.worst_col] + ")| = " +
                                  std::to_string(std::abs(report.decoherence(
                                      static_cast<Eigen::Index>(report.worst_row),
                                      static_cast<Eigen::Index>(report.worst_col)))) +
                                  "); probabilities are undefined");
  }
}

double event_weight(const HistoryFamily& fam, const ConsistencyReport& report, const HistoryEvent& a,
                    const HistoryEvent* b, double tol) {
  double w = 0.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (report.excluded[i]) continue;
    if (!satisfies(fam[i], a, tol)) continue;
    if (b && !satisfies(fam[i], *b, tol)) continue;
    w += report.weights[i];
  }
  return w;
}

}  // namespace

ChainOperator chain_operator(const History& y, const Dynamics& dyn) {
  if (y.factors.size() != dyn.grid().size()) {
    throw GridMismatchError("history '" + y.label + "' has " + std::to_string(y.factors.size()) +
                            " times but the dynamics grid has " + std::to_string(dyn.grid().size()));
  }
  Matrix k = y.factors.front().matrix();
  for (std::size_t m = 0; m < dyn.steps().size(); ++m) {
    const Matrix& t = dyn.step(m).matrix();
    const Matrix& f = y.factors[m + 1].matrix();
    if (t.rows() != k.rows() || f.rows() != k.rows()) throw DimError("chain operator: dimension mismatch");
    k = (f * (t * k)).eval();
  }
  return ChainOperator{Operator(std::move(k)), y.label};
}

double ConsistencyReport::total_weight() const {
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

std::vector<double> ConsistencyReport::probabilities() const {
  const double total = total_weight();
  std::vector<double> p(weights.size(), 0.0);
  if (total > 0.0) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights[i] / total;
  }
  return p;
}

ConsistencyReport decoherence_functional(const HistoryFamily& fam, const Dynamics& dyn, const Tolerances& tol) {
  require_shared_grid(fam, dyn);
  const std::size_t n = fam.size();
  std::vector<Matrix> chains;
  chains.reserve(n);
  for (const auto& y : fam.histories()) chains.push_back(chain_operator(y, dyn).value.matrix());

  ConsistencyReport r;
  r.tolerances = tol;
  r.decoherence = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      // Tr[K_a^† K_b] = Σ conj(K_a) K_b elementwise.
      const Complex v = (chains[a].conjugate().array() * chains[b].array()).sum();
      r.decoherence(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      r.decoherence(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = std::conj(v);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    r.labels.push_back(fam[a].label);
    r.excluded.push_back(fam[a].excluded);
    const double w = r.decoherence(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)).real();
    r.weights.push_back(fam[a].excluded ? 0.0 : w);
  }
  double worst_ratio = -1.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      const double mag = std::abs(r.decoherence(ia, ib));
      const double scale = std::sqrt(std::max(0.0, r.decoherence(ia, ia).real()) *
                                     std::max(0.0, r.decoherence(ib, ib).real()));
      const double bound = std::max(tol.consistency * scale, tol.floor);
      r.max_offdiag_residual = std::max(r.max_offdiag_residual, mag);
      const double ratio = mag / bound;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        r.worst_row = a;
        r.worst_col = b;
      }
      if (mag > bound) r.consistent = false;
    }
  }
  return r;
}

double born_weight(const PD& pd0, const PD& pd1, const Dynamics& dyn, std::size_t j, std::size_t k) {
  if (dyn.grid().size() != 2) throw GridMismatchError("born_weight needs a two-time grid");
  if (pd0.dim() != dyn.dim() || pd1.dim() != dyn.dim()) throw DimError("born_weight: dimension mismatch");
  if (j >= pd0.size() || k >= pd1.size()) throw DimError("born_weight: element index out of range");
  const Matrix& t = dyn.step(0).matrix();
  return (pd1[k].matrix() * t * pd0[j].matrix() * t.adjoint()).trace().real();
}

double born_weight_forward(const Ket& psi, const Ket& phi, const Operator& step) {
  const Ket evolved = step.apply(psi);
  return std::norm(phi.inner(evolved));
}

double born_weight_backward(const Ket& psi, const Ket& phi, const Operator& step) {
  const Ket phi0 = step.adjoint().apply(phi);
  return std::norm(psi.inner(phi0));
}

double probability(const HistoryFamily& fam, const ConsistencyReport& report, const HistoryEvent& target,
                   const Tolerances& tol) {
  return conditional_probability(fam, report, target, {}, tol);
}

double probability(const HistoryFamily& fam, const Dynamics& dyn, const HistoryEvent& target, const Tolerances& tol) {
  return probability(fam, decoherence_functional(fam, dyn, tol), target, tol);
}

double conditional_probability(const HistoryFamily& fam, const ConsistencyReport& report,
                               const HistoryEvent& target, const HistoryEvent& given, const Tolerances& tol) {
  require_consistent(report);
  if (report.weights.size() != fam.size()) throw DimError("report does not belong to this family");
  const double denom = event_weight(fam, report, given, nullptr, tol.alg);
  if (!(denom > tol.floor)) throw ZeroConditionError("conditioning event has zero probability");
  const double numer = event_weight(fam, report, target, &given, tol.alg);
  return numer / denom;
}

double conditional_probability(const HistoryFamily& fam, const Dynamics& dyn, const HistoryEvent& target,
                               const HistoryEvent& given, const Tolerances& tol) {
  return conditional_probability(fam, decoherence_functional(fam, dyn, tol), target, given, tol);
}

std::vector<std::size_t> sample_counts(const ConsistencyReport& report, std::size_t draws, std::uint64_t seed) {
  require_consistent(report);
  std::vector<double> w(report.weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::max(0.0, report.weights[i]);
  if (!(report.total_weight() > 0.0)) throw ZeroConditionError("family has zero total weight");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::vector<std::size_t> counts(w.size(), 0);
  for (std::size_t i = 0; i < draws; ++i) ++counts[pick(rng)];
  return counts;
}

std::size_t sample_history(const ConsistencyReport& report, std::uint64_t seed) {
  const auto counts = sample_counts(report, 1, seed);
  return static_cast<std::size_t>(std::find(counts.begin(), counts.end(), 1) - counts.begin());
}

std::size_t sample_history(const HistoryFamily& fam, const Dynamics& dyn, std::uint64_t seed, const Tolerances& tol) {
  return sample_history(decoherence_functional(fam, dyn, tol), seed);
}

bool family_compatible(const HistoryFamily& f, const HistoryFamily& g, const Dynamics& dyn, const Tolerances& tol) {
  if (!family_compatible(f, g, tol.alg)) return false;
  return decoherence_functional(family_refinement(f, g, tol.alg), dyn, tol).consistent;
}

}  // namespace chist
