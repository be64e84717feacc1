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
#include <string>
#include <vector>

#include "chist/operator.hpp"

namespace chist {

/// A projective decomposition of the identity: nonzero, mutually orthogonal
/// projectors that sum to I. This is the sample space of a single-time
/// framework; its event algebra is the set of sums of its elements.
class ProjectiveDecomposition {
 public:
  ProjectiveDecomposition() = default;

  std::size_t size() const { return projectors_.size(); }
  std::size_t dim() const { return projectors_.empty() ? 0 : projectors_.front().dim(); }
  const Operator& operator[](std::size_t j) const { return projectors_.at(j); }
  const std::vector<Operator>& projectors() const { return projectors_; }
  const std::string& label(std::size_t j) const { return labels_.at(j); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of the element whose label is `label`, or size() if absent.
  std::size_t find(const std::string& label) const;

 private:
  friend ProjectiveDecomposition make_pd(std::vector<Operator>, std::vector<std::string>, double);
  std::vector<Operator> projectors_;
  std::vector<std::string> labels_;
};

using PD = ProjectiveDecomposition;

/// Validates and builds a PD. Labels default to "0", "1", ... when empty.
///
/// Throws NotProjectorError (element is not a projector, or is zero),
/// DimError, OrthogonalityError naming the offending pair, or
/// CompletenessError when the elements do not sum to I.
ProjectiveDecomposition make_pd(std::vector<Operator> projectors, std::vector<std::string> labels = {},
                                double tol = Tolerances{}.alg);

/// {I}.
ProjectiveDecomposition trivial_pd(std::size_t dim);
/// {[z+], [z-]} and friends, labelled "<axis>+" / "<axis>-".
ProjectiveDecomposition spin_pd(Axis axis);
/// Rank-one PD from an orthonormal basis.
ProjectiveDecomposition basis_pd(const std::vector<Ket>& basis, std::vector<std::string> labels = {});
/// {P ⊗ I} with P acting on factor `index` of `space`.
ProjectiveDecomposition lift(const ProjectiveDecomposition& pd, const CompositeSpace& space, std::size_t index);

/// An element of the Boolean event algebra generated by a PD.
struct Event {
  std::vector<std::size_t> subset;
  Operator projector;
};

/// Σ_{j∈subset} P^j. Throws DimError for an out-of-range index.
Event make_event(const ProjectiveDecomposition& pd, std::vector<std::size_t> subset);
/// All 2^n events, indexed by bitmask over PD elements.
std::vector<Event> event_algebra(const ProjectiveDecomposition& pd);

/// Every projector of `f` commutes with every projector of `g`.
bool compatible(const ProjectiveDecomposition& f, const ProjectiveDecomposition& g, double tol = Tolerances{}.alg);

/// The nonzero products P^j Q^k, labelled "<label_j>&<label_k>".
/// Throws IncompatibleFrameworksError when the inputs do not commute:
/// incompatible frameworks may not be combined.
ProjectiveDecomposition common_refinement(const ProjectiveDecomposition& f, const ProjectiveDecomposition& g,
                                          double tol = Tolerances{}.alg);

/// Every projector of `coarse` is a sum of projectors of `fine`.
bool refines(const ProjectiveDecomposition& fine, const ProjectiveDecomposition& coarse,
             double tol = Tolerances{}.alg);

/// Σ_{j∈e} p_j. Throws WeightError unless `weights` is a probability
/// distribution over the PD's elements.
double event_probability(const ProjectiveDecomposition& pd, const std::vector<double>& weights, const Event& e,
                         double tol_prob = Tolerances{}.prob);

}  // namespace chist
