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

#include "chist/histories.hpp"

#include <algorithm>
#include <cmath>

#include "chist/errors.hpp"

namespace chist {

namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Cartesian product over per-time element lists, first time slowest.
template <typename Fn>
void for_each_index_tuple(const std::vector<std::size_t>& sizes, Fn&& fn) {
  std::vector<std::size_t> idx(sizes.size(), 0);
  if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s == 0; })) return;
  while (true) {
    fn(idx);
    std::size_t k = sizes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (sizes.empty()) return;
  }
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::size_t HistoryFamily::find(const std::string& label) const {
  const auto it = std::find_if(histories_.begin(), histories_.end(), [&](const History& h) { return h.label == label; });
  return static_cast<std::size_t>(it - histories_.begin());
}

HistoryFamily HistoryFamily::reversed() const {
  HistoryFamily out;
  out.grid_ = grid_.reversed();
  out.dim_ = dim_;
  out.unitary_history_ = unitary_history_;
  out.histories_ = histories_;
  for (auto& h : out.histories_) std::reverse(h.factors.begin(), h.factors.end());
  return out;
}

HistoryFamily make_family(TimeGrid grid, std::size_t dim, std::vector<History> histories, double tol) {
  if (histories.empty()) throw FamilyError("a history family needs at least one history");
  for (std::size_t a = 0; a < histories.size(); ++a) {
    auto& h = histories[a];
    if (h.label.empty()) h.label = std::to_string(a);
    if (h.factors.size() != grid.size()) {
      throw GridMismatchError("history '" + h.label + "' has " + std::to_string(h.factors.size()) +
                              " factors but the grid has " + std::to_string(grid.size()) + " times");
    }
    for (std::size_t m = 0; m < h.factors.size(); ++m) {
      auto& f = h.factors[m];
      if (f.dim() != dim) {
        throw DimError("history '" + h.label + "' factor " + std::to_string(m) + " has dim " + std::to_string(f.dim()) +
                       ", expected " + std::to_string(dim));
      }
      if (f.flavor() != Flavor::projector) {
        if (!f.is_projector(tol)) {
          throw NotProjectorError("history '" + h.label + "' factor " + std::to_string(m) + " is not a projector");
        }
        f = f.with_flavor(Flavor::projector, tol);
      }
    }
  }
  // Y^α Y^β = ⊗_m F_m^α F_m^β and the Frobenius norm is multiplicative
  // over Kronecker factors.
  for (std::size_t a = 0; a < histories.size(); ++a) {
    for (std::size_t b = a + 1; b < histories.size(); ++b) {
      double norm = 1.0;
      for (std::size_t m = 0; m < grid.size() && norm > tol; ++m) {
        norm *= frobenius_norm(histories[a].factors[m].matrix() * histories[b].factors[m].matrix());
      }
      if (norm > tol) {
        throw FamilyError("histories '" + histories[a].label + "' and '" + histories[b].label +
                          "' are not mutually exclusive");
      }
    }
  }
  // With orthogonality established the sum of history projectors is itself
  // a projector, so it equals the identity iff its rank is d^(f+1).
  double rank = 0.0;
  for (const auto& h : histories) {
    double r = 1.0;
    for (const auto& f : h.factors) r *= f.trace().real();
    rank += r;
  }
  const double full = std::pow(static_cast<double>(dim), static_cast<double>(grid.size()));
  if (std::abs(full - rank) > 0.5) {
    throw FamilyError("history projectors do not sum to the history identity (rank " + std::to_string(rank) +
                      " of " + std::to_string(full) + ")");
  }
  HistoryFamily fam;
  fam.grid_ = std::move(grid);
  fam.dim_ = dim;
  fam.histories_ = std::move(histories);
  return fam;
}

HistoryFamily product_family(const TimeGrid& grid, const std::vector<PD>& per_time, double tol) {
  if (per_time.size() != grid.size()) {
    throw GridMismatchError("product family needs one PD per grid time (" + std::to_string(grid.size()) + "), got " +
                            std::to_string(per_time.size()));
  }
  const std::size_t d = per_time.front().dim();
  std::vector<std::size_t> sizes;
  for (const auto& pd : per_time) {
    if (pd.dim() != d) throw DimError("product family PDs act on different dimensions");
    sizes.push_back(pd.size());
  }
  std::vector<History> histories;
  for_each_index_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
    History h;
    std::vector<std::string> labels;
    for (std::size_t m = 0; m < idx.size(); ++m) {
      h.factors.push_back(per_time[m][idx[m]]);
      labels.push_back(per_time[m].label(idx[m]));
    }
    h.label = join(labels, ",");
    histories.push_back(std::move(h));
  });
  return make_family(grid, d, std::move(histories), tol);
}

HistoryFamily fixed_initial_family(const TimeGrid& grid, const Operator& initial, const std::vector<PD>& later,
                                   double tol) {
  if (!initial.is_projector(tol)) throw NotProjectorError("initial state of a family must be a projector");
  if (later.size() + 1 != grid.size()) {
    throw GridMismatchError("fixed-initial family needs one PD per later grid time (" +
                            std::to_string(grid.steps()) + "), got " + std::to_string(later.size()));
  }
  const std::size_t d = initial.dim();
  const Operator p0 = initial.with_flavor(Flavor::projector, tol);
  std::vector<std::size_t> sizes;
  for (const auto& pd : later) {
    if (pd.dim() != d) throw DimError("fixed-initial family PDs act on a different dimension than the initial state");
    sizes.push_back(pd.size());
  }
  std::vector<History> histories;
  for_each_index_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
    History h;
    h.factors.push_back(p0);
    std::vector<std::string> labels{"initial"};
    for (std::size_t m = 0; m < idx.size(); ++m) {
      h.factors.push_back(later[m][idx[m]]);
      labels.push_back(later[m].label(idx[m]));
    }
    h.label = join(labels, ",");
    histories.push_back(std::move(h));
  });
  const Matrix rest = symmetrized(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) -
                                  p0.matrix());
  if (frobenius_norm(rest) > tol) {
    History throwaway;
    throwaway.factors.push_back(Operator::unchecked(rest, Flavor::projector));
    for (std::size_t m = 0; m < later.size(); ++m) throwaway.factors.push_back(Operator::identity(d));
    throwaway.label = "~initial";
    throwaway.excluded = true;
    histories.push_back(std::move(throwaway));
  }
  return make_family(grid, d, std::move(histories), tol);
}

HistoryFamily unitary_family(const TimeGrid& grid, const Ket& psi0, const std::vector<Operator>& steps, double tol) {
  if (!psi0.is_normalized()) throw NormalizationError("unitary family requires a normalized initial ket");
  if (steps.size() != grid.steps()) {
    throw GridMismatchError("unitary family needs one step per grid interval (" + std::to_string(grid.steps()) +
                            "), got " + std::to_string(steps.size()));
  }
  const std::size_t d = psi0.dim();
  std::vector<PD> later;
  Ket psi = psi0;
  for (const auto& step : steps) {
    if (!step.is_unitary(tol)) throw FlavorError("unitary family steps must be unitary");
    psi = step.apply(psi).normalized();
    const Operator p = dyad(psi, 1e-9);
    const Matrix rest = symmetrized(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) -
                                    p.matrix());
    if (d == 1) {
      later.push_back(make_pd({p}, {"psi"}, tol));
    } else {
      later.push_back(make_pd({p, Operator::unchecked(rest, Flavor::projector)}, {"psi", "~psi"}, tol));
    }
  }
  HistoryFamily fam = fixed_initial_family(grid, dyad(psi0), later, tol);
  std::vector<std::string> labels{"initial"};
  for (std::size_t m = 0; m < steps.size(); ++m) labels.push_back("psi");
  fam.unitary_history_ = fam.find(join(labels, ","));
  return fam;
}

bool family_compatible(const HistoryFamily& f, const HistoryFamily& g, double tol) {
  if (f.dim() != g.dim()) throw DimError("families act on different single-time dimensions");
  if (!(f.grid() == g.grid())) throw GridMismatchError("families are defined on different time grids");
  for (const auto& y : f.histories()) {
    for (const auto& z : g.histories()) {
      bool some_zero = false;
      bool all_commute = true;
      for (std::size_t m = 0; m < y.factors.size(); ++m) {
        const Matrix ab = y.factors[m].matrix() * z.factors[m].matrix();
        if (frobenius_norm(ab) <= tol) {
          some_zero = true;
          break;
        }
        if (frobenius_norm(ab - z.factors[m].matrix() * y.factors[m].matrix()) > tol) all_commute = false;
      }
      if (!some_zero && !all_commute) return false;
    }
  }
  return true;
}

HistoryFamily family_refinement(const HistoryFamily& f, const HistoryFamily& g, double tol) {
  if (!family_compatible(f, g, tol)) {
    throw IncompatibleFrameworksError("history families are incompatible: some history projectors do not commute");
  }
  std::vector<History> histories;
  for (const auto& y : f.histories()) {
    for (const auto& z : g.histories()) {
      History h;
      bool zero = false;
      for (std::size_t m = 0; m < y.factors.size() && !zero; ++m) {
        Matrix p = y.factors[m].matrix() * z.factors[m].matrix();
        if (frobenius_norm(p) <= tol) {
          zero = true;
          break;
        }
        h.factors.push_back(Operator(symmetrized(p), Flavor::projector, 10 * tol));
      }
      if (zero) continue;
      h.label = y.label + "&" + z.label;
      h.excluded = y.excluded || z.excluded;
      histories.push_back(std::move(h));
    }
  }
  return make_family(f.grid(), f.dim(), std::move(histories), 10 * tol);
}

bool satisfies(const History& y, const HistoryEvent& e, double tol) {
  bool inside = true;
  for (const auto& c : e) {
    if (c.time >= y.factors.size()) {
      throw GridMismatchError("event refers to time index " + std::to_string(c.time) + " outside the grid");
    }
    const Matrix& f = y.factors[c.time].matrix();
    if (c.projector.dim() != static_cast<std::size_t>(f.rows())) throw DimError("event projector has the wrong dimension");
    const Matrix ef = c.projector.matrix() * f;
    if (frobenius_norm(ef - f) <= tol) continue;
    if (frobenius_norm(ef) <= tol) {
      inside = false;
      continue;
    }
    throw EventError("event at time index " + std::to_string(c.time) + " is not in the event algebra of history '" +
                     y.label + "'");
  }
  return inside;
}

Operator dense_projector(const History& y) { return tensor(std::span<const Operator>(y.factors)); }

}  // namespace chist
