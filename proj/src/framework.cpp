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

#include "chist/framework.hpp"

#include <algorithm>
#include <cmath>

#include "chist/errors.hpp"

namespace chist {

namespace {

std::string pair_name(const std::vector<std::string>& labels, std::size_t j, std::size_t k) {
  return "(" + std::to_string(j) + " '" + labels[j] + "', " + std::to_string(k) + " '" + labels[k] + "')";
}

void require_same_dim(const PD& f, const PD& g, const char* what) {
  if (f.dim() != g.dim()) {
    throw DimError(std::string(what) + ": PDs act on different dimensions (" + std::to_string(f.dim()) + " vs " +
                   std::to_string(g.dim()) + ")");
  }
}

}  // namespace

std::size_t ProjectiveDecomposition::find(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<std::size_t>(it - labels_.begin());
}

ProjectiveDecomposition make_pd(std::vector<Operator> projectors, std::vector<std::string> labels, double tol) {
  if (projectors.empty()) throw CompletenessError("a projective decomposition needs at least one projector");
  if (labels.empty()) {
    for (std::size_t j = 0; j < projectors.size(); ++j) labels.push_back(std::to_string(j));
  }
  if (labels.size() != projectors.size()) {
    throw DimError("PD has " + std::to_string(projectors.size()) + " projectors but " + std::to_string(labels.size()) +
                   " labels");
  }
  const std::size_t d = projectors.front().dim();
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    if (projectors[j].dim() != d) {
      throw DimError("PD element " + std::to_string(j) + " has dim " + std::to_string(projectors[j].dim()) +
                     ", expected " + std::to_string(d));
    }
    if (projectors[j].flavor() != Flavor::projector) {
      if (!projectors[j].is_projector(tol)) {
        throw NotProjectorError("PD element " + std::to_string(j) + " '" + labels[j] + "' is not a projector");
      }
      projectors[j] = projectors[j].with_flavor(Flavor::projector, tol);
    }
    if (projectors[j].is_zero(tol)) {
      throw NotProjectorError("PD element " + std::to_string(j) + " '" + labels[j] + "' is the zero projector");
    }
  }
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    for (std::size_t k = j + 1; k < projectors.size(); ++k) {
      const double overlap = frobenius_norm(projectors[j].matrix() * projectors[k].matrix());
      if (overlap > tol) {
        throw OrthogonalityError("PD elements " + pair_name(labels, j, k) + " are not orthogonal: |P^j P^k| = " +
                                 std::to_string(overlap));
      }
    }
  }
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (const auto& p : projectors) sum += p.matrix();
  const double residual = frobenius_norm(sum - Matrix::Identity(sum.rows(), sum.cols()));
  if (residual > tol) {
    throw CompletenessError("PD elements do not sum to the identity: |sum - I| = " + std::to_string(residual));
  }
  ProjectiveDecomposition pd;
  pd.projectors_ = std::move(projectors);
  pd.labels_ = std::move(labels);
  return pd;
}

ProjectiveDecomposition trivial_pd(std::size_t dim) { return make_pd({Operator::identity(dim)}, {"I"}); }

ProjectiveDecomposition spin_pd(Axis axis) {
  auto [plus, minus] = spin_projectors(axis);
  const std::string a = to_string(axis);
  return make_pd({plus, minus}, {a + "+", a + "-"});
}

ProjectiveDecomposition basis_pd(const std::vector<Ket>& basis, std::vector<std::string> labels) {
  std::vector<Operator> projectors;
  projectors.reserve(basis.size());
  for (const auto& k : basis) projectors.push_back(dyad(k));
  return make_pd(std::move(projectors), std::move(labels));
}

ProjectiveDecomposition lift(const ProjectiveDecomposition& pd, const CompositeSpace& space, std::size_t index) {
  std::vector<Operator> projectors;
  projectors.reserve(pd.size());
  for (const auto& p : pd.projectors()) projectors.push_back(embed(p, space, index));
  return make_pd(std::move(projectors), pd.labels());
}

Event make_event(const ProjectiveDecomposition& pd, std::vector<std::size_t> subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(pd.dim()), static_cast<Eigen::Index>(pd.dim()));
  for (auto j : subset) {
    if (j >= pd.size()) throw DimError("event index " + std::to_string(j) + " out of range");
    sum += pd[j].matrix();
  }
  // Sums of orthogonal projectors are projectors.
  return Event{std::move(subset), Operator::unchecked(std::move(sum), Flavor::projector)};
}

std::vector<Event> event_algebra(const ProjectiveDecomposition& pd) {
  if (pd.size() >= 24) throw DimError("event algebra too large to enumerate");
  std::vector<Event> events;
  const std::size_t count = std::size_t{1} << pd.size();
  events.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t j = 0; j < pd.size(); ++j) {
      if (mask & (std::size_t{1} << j)) subset.push_back(j);
    }
    events.push_back(make_event(pd, std::move(subset)));
  }
  return events;
}

bool compatible(const ProjectiveDecomposition& f, const ProjectiveDecomposition& g, double tol) {
  require_same_dim(f, g, "compatible");
  for (const auto& p : f.projectors()) {
    for (const auto& q : g.projectors()) {
      if (!commutes(p, q, tol)) return false;
    }
  }
  return true;
}

ProjectiveDecomposition common_refinement(const ProjectiveDecomposition& f, const ProjectiveDecomposition& g,
                                          double tol) {
  require_same_dim(f, g, "common_refinement");
  if (!compatible(f, g, tol)) {
    throw IncompatibleFrameworksError("frameworks are incompatible: some projectors do not commute, so no common "
                                      "refinement exists");
  }
  std::vector<Operator> products;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      Matrix m = f[j].matrix() * g[k].matrix();
      if (frobenius_norm(m) <= tol) continue;
      m = 0.5 * (m + m.adjoint()).eval();
      products.push_back(Operator(std::move(m), Flavor::projector, 10 * tol));
      labels.push_back(f.label(j) + "&" + g.label(k));
    }
  }
  return make_pd(std::move(products), std::move(labels), 10 * tol);
}

bool refines(const ProjectiveDecomposition& fine, const ProjectiveDecomposition& coarse, double tol) {
  require_same_dim(fine, coarse, "refines");
  for (const auto& q : coarse.projectors()) {
    Matrix sum = Matrix::Zero(q.matrix().rows(), q.matrix().cols());
    for (const auto& p : fine.projectors()) {
      if (frobenius_norm(q.matrix() * p.matrix() - p.matrix()) <= tol) sum += p.matrix();
    }
    if (frobenius_norm(sum - q.matrix()) > tol) return false;
  }
  return true;
}

double event_probability(const ProjectiveDecomposition& pd, const std::vector<double>& weights, const Event& e,
                         double tol_prob) {
  if (weights.size() != pd.size()) {
    throw WeightError("expected " + std::to_string(pd.size()) + " weights, got " + std::to_string(weights.size()));
  }
  double total = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] >= -tol_prob)) throw WeightError("weight " + std::to_string(j) + " is negative");
    total += weights[j];
  }
  if (std::abs(total - 1.0) > tol_prob) throw WeightError("weights sum to " + std::to_string(total) + ", not 1");
  double p = 0.0;
  for (auto j : e.subset) {
    if (j >= pd.size()) throw DimError("event index " + std::to_string(j) + " out of range");
    p += weights[j];
  }
  return p;
}

}  // namespace chist
