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

#include "chist/runner.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "chist/errors.hpp"
#include "chist/models.hpp"

namespace chist::scenario {
namespace {

double clean(double v) { return v == 0.0 ? 0.0 : v; }  // no "-0.0" in output

Json reals(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(clean(x));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(clean(m(r, c).real()));
      ii.push_back(clean(m(r, c).imag()));
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return Json{{"re", re}, {"im", im}};
}

Json table(const std::vector<std::vector<double>>& t) {
  Json out = Json::array();
  for (const auto& row : t) out.push_back(reals(row));
  return out;
}

Json optional_table(const std::vector<std::vector<std::optional<double>>>& t) {
  Json out = Json::array();
  for (const auto& row : t) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v ? Json(clean(*v)) : Json(nullptr));
    out.push_back(r);
  }
  return out;
}

Json event_json(const EventDecl& e) {
  Json out = Json::object();
  for (const auto& [t, p] : e) out[std::to_string(t)] = p;
  return out;
}

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  throw ValidationError("'" + s + "' is not a spin axis (x, y or z)");
}

Ket parse_spin(const std::string& s) {
  if (s.size() != 2 || (s[1] != '+' && s[1] != '-'))
    throw ValidationError("'" + s + "' is not a spin state (like z+ or x-)");
  return spin_ket(parse_axis(s.substr(0, 1)), s[1] == '+' ? +1 : -1);
}

template <typename T>
const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* what) {
  const auto it = m.find(name);
  if (it == m.end()) throw ValidationError(std::string("unknown ") + what + " '" + name + "'");
  return it->second;
}

Flavor parse_flavor(const std::string& s) {
  if (s.empty() || s == "none") return Flavor::none;
  if (s == "hermitian") return Flavor::hermitian;
  if (s == "projector") return Flavor::projector;
  if (s == "unitary") return Flavor::unitary;
  if (s == "positive") return Flavor::positive;
  throw ValidationError("unknown flavor '" + s + "'");
}

void require_dim(std::size_t got, std::size_t want, const std::string& what) {
  if (got != want) {
    throw DimError(what + " has dimension " + std::to_string(got) + ", expected " + std::to_string(want));
  }
}

/// Spells out which of the two projective-decomposition conditions a set of
/// projectors violates.
std::string pd_diagnosis(const std::vector<Operator>& ops, const std::vector<std::string>& names, double tol) {
  std::string out;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!ops[i].is_projector(tol)) return "'" + names[i] + "' is not a projector";
  }
  for (std::size_t i = 0; i < ops.size() && out.empty(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double n = frobenius_norm(ops[i].matrix() * ops[j].matrix());
      if (n > tol) {
        out = "orthogonality fails: |P_" + names[i] + " P_" + names[j] + "| = " + std::to_string(n);
        break;
      }
    }
  }
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(ops[0].dim()), static_cast<Eigen::Index>(ops[0].dim()));
  for (const auto& p : ops) sum += p.matrix();
  const double gap = frobenius_norm(sum - Matrix::Identity(sum.rows(), sum.cols()));
  if (gap > tol) {
    out += std::string(out.empty() ? "" : "; ") + "completeness fails: |Σ P - I| = " + std::to_string(gap);
  }
  return out;
}

class Builder {
 public:
  Builder(const Scenario& s, Workspace& w) : s_(s), w_(w) {}

  void build() {
    for (const auto& d : s_.systems) guard("systems." + d.name, [&] { system(d); });
    for (const auto& d : s_.states) guard("states." + d.name, [&] { state(d); });
    for (const auto& d : s_.operators) guard("operators." + d.name, [&] { op(d); });
    for (const auto& d : s_.pds) guard("pds." + d.name, [&] { pd(d); });
    if (s_.grid) guard("grid", [&] { w_.grid = TimeGrid(s_.grid->times); });
    for (const auto& d : s_.dynamics) guard("dynamics." + d.name, [&] { dynamics(d); });
    for (const auto& d : s_.families) guard("families." + d.name, [&] { family(d); });
    for (std::size_t i = 0; i < s_.queries.size(); ++i) {
      guard("queries." + std::to_string(i + 1), [&] { w_.queries.push_back(query(s_.queries[i])); });
    }
  }

 private:
  template <typename Fn>
  void guard(const std::string& key, Fn fn) {
    try {
      fn();
    } catch (const Error& e) {
      const std::string where = s_.where(key);
      throw ValidationError(key + (where.empty() ? "" : " (" + where + ")") + ": " + e.what());
    }
  }

  const TimeGrid& grid() const {
    if (!w_.grid) throw ValidationError("no grid declared");
    return *w_.grid;
  }

  const CompositeSpace& space(const std::string& name) const { return lookup(w_.systems, name, "system"); }
  const Ket& ket(const std::string& name) const { return lookup(w_.states, name, "state"); }
  const Operator& oper(const std::string& name) const { return lookup(w_.operators, name, "operator"); }
  const PD& framework(const std::string& name) const { return lookup(w_.pds, name, "pd"); }

  std::vector<Ket> kets(const std::vector<std::string>& names) const {
    std::vector<Ket> out;
    for (const auto& n : names) out.push_back(ket(n));
    return out;
  }
  std::vector<Operator> opers(const std::vector<std::string>& names) const {
    std::vector<Operator> out;
    for (const auto& n : names) out.push_back(oper(n));
    return out;
  }
  std::vector<PD> frameworks(const std::vector<std::string>& names) const {
    std::vector<PD> out;
    for (const auto& n : names) out.push_back(framework(n));
    return out;
  }

  void system(const SystemDecl& d) {
    for (auto n : d.dims)
      if (n == 0) throw DimError("a factor of dimension 0");
    w_.systems[d.name] = CompositeSpace{d.dims};
  }

  void state(const StateDecl& d) {
    Ket k;
    if (d.kind == "amplitudes") {
      const std::size_t n = space(d.system).total();
      require_dim(d.amplitudes.size(), n, "amplitude list");
      Vector v(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = d.amplitudes[i];
      k = Ket(v);
      if (d.normalize) {
        k = k.normalized();
      } else if (!k.is_normalized(w_.tol.norm)) {
        throw NormalizationError("state has norm " + std::to_string(k.norm()) + "; add 'normalize: true'");
      }
    } else if (d.kind == "spin") {
      k = parse_spin(d.spin);
    } else if (d.kind == "basis") {
      const std::size_t n = space(d.system).total();
      if (d.index >= n) throw DimError("basis index " + std::to_string(d.index) + " out of range");
      k = Ket::basis(n, d.index);
    } else if (d.kind == "tensor") {
      const auto parts = kets(d.parts);
      k = tensor(std::span<const Ket>(parts));
    } else {
      k = singlet();
    }
    w_.states[d.name] = k;
  }

  void op(const OperatorDecl& d) {
    Operator o;
    if (d.kind == "matrix") {
      const std::size_t n = space(d.system).total();
      require_dim(d.matrix.size(), n, "matrix row count");
      Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t r = 0; r < n; ++r) {
        require_dim(d.matrix[r].size(), n, "matrix row " + std::to_string(r + 1));
        for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d.matrix[r][c];
      }
      o = Operator(m, parse_flavor(d.flavor), w_.tol.alg);
    } else if (d.kind == "spin") {
      o = dyad(parse_spin(d.spin));
    } else if (d.kind == "rotation") {
      // exp(-i θ σ/2)
      const auto [up, down] = spin_projectors(parse_axis(d.axis));
      o = unitary_from_hamiltonian(Operator(0.5 * (up.matrix() - down.matrix()), Flavor::hermitian), d.angle);
    } else if (d.kind == "dyad") {
      o = dyad(ket(d.ref), w_.tol.norm);
    } else if (d.kind == "tensor") {
      const auto parts = opers(d.parts);
      o = tensor(std::span<const Operator>(parts));
    } else if (d.kind == "identity") {
      o = Operator::identity(space(d.system).total());
    } else if (d.kind == "complement") {
      const Operator& p = oper(d.ref);
      const Matrix c = Matrix::Identity(p.matrix().rows(), p.matrix().cols()) - p.matrix();
      o = Operator(c, p.is_projector(w_.tol.alg) ? Flavor::projector : Flavor::none, w_.tol.alg);
    } else if (d.kind == "sum" || d.kind == "product") {
      const auto parts = opers(d.parts);
      if (parts.empty()) throw ValidationError(d.kind + " of nothing");
      o = parts[0];
      for (std::size_t i = 1; i < parts.size(); ++i) {
        require_dim(parts[i].dim(), o.dim(), "operator '" + d.parts[i] + "'");
        o = d.kind == "sum" ? o + parts[i] : o * parts[i];
      }
    } else if (d.kind == "embed") {
      o = embed(oper(d.ref), space(d.system), d.index);
    } else {
      o = interval_projector(d.interval.points, d.interval.lo, d.interval.hi);
    }
    w_.operators[d.name] = o;
  }

  void pd(const PdDecl& d) {
    if (d.kind == "spin") {
      w_.pds[d.name] = spin_pd(parse_axis(d.axis));
    } else if (d.kind == "basis") {
      const auto b = kets(d.parts);
      w_.pds[d.name] = basis_pd(b, d.labels.empty() ? d.parts : d.labels);
    } else if (d.kind == "projectors") {
      const auto ops = opers(d.parts);
      if (ops.empty()) throw ValidationError("a pd needs at least one projector");
      for (std::size_t i = 1; i < ops.size(); ++i) require_dim(ops[i].dim(), ops[0].dim(), "projector '" + d.parts[i] + "'");
      if (!d.labels.empty()) require_dim(d.labels.size(), ops.size(), "label list");
      const std::string diagnosis = pd_diagnosis(ops, d.parts, w_.tol.alg);
      if (!diagnosis.empty()) throw ValidationError("not a projective decomposition: " + diagnosis);
      w_.pds[d.name] = make_pd(ops, d.labels.empty() ? d.parts : d.labels, w_.tol.alg);
    } else if (d.kind == "trivial") {
      w_.pds[d.name] = trivial_pd(space(d.system).total());
    } else if (d.kind == "lift") {
      w_.pds[d.name] = lift(framework(d.ref), space(d.system), d.index);
    } else {
      if (d.parts.size() != 2) throw ValidationError("refinement takes exactly two pds");
      w_.pds[d.name] = common_refinement(framework(d.parts[0]), framework(d.parts[1]), w_.tol.alg);
    }
  }

  void dynamics(const DynamicsDecl& d) {
    const TimeGrid& g = grid();
    if (d.kind == "steps") {
      w_.dynamics[d.name] = Dynamics(g, opers(d.steps), w_.tol.alg);
    } else if (d.kind == "repeat") {
      w_.dynamics[d.name] = Dynamics::repeated(g, oper(d.ref), w_.tol.alg);
    } else if (d.kind == "hamiltonian") {
      w_.dynamics[d.name] = Dynamics::from_hamiltonian(g, oper(d.ref), w_.tol.alg);
    } else {
      w_.dynamics[d.name] = Dynamics::trivial(g, space(d.ref).total());
    }
  }

  void family(const FamilyDecl& d) {
    const TimeGrid& g = grid();
    HistoryFamily f;
    if (d.kind == "product") {
      f = product_family(g, frameworks(d.pds), w_.tol.alg);
    } else if (d.kind == "fixed-initial") {
      f = fixed_initial_family(g, oper(d.initial), frameworks(d.pds), w_.tol.alg);
    } else if (d.kind == "unitary") {
      f = unitary_family(g, ket(d.initial), lookup(w_.dynamics, d.dynamics, "dynamics").steps(), w_.tol.alg);
    } else {
      std::vector<History> hs;
      for (const auto& h : d.histories) hs.push_back(History{opers(h.factors), h.label, h.excluded});
      f = make_family(g, space(d.system).total(), std::move(hs), w_.tol.alg);
    }
    w_.families[d.name] = std::move(f);
  }

  // --- queries --------------------------------------------------------------

  /// The named dynamics, the only declared one, or T = I if none is declared.
  std::pair<std::string, Dynamics> dynamics_for(const QueryDecl& q, std::size_t dim) const {
    if (!q.dynamics.empty()) return {q.dynamics, lookup(w_.dynamics, q.dynamics, "dynamics")};
    if (w_.dynamics.size() == 1) return *w_.dynamics.begin();
    if (w_.dynamics.empty()) return {"trivial", Dynamics::trivial(grid(), dim)};
    throw ValidationError("several dynamics declared; name one with 'dynamics:'");
  }

  HistoryEvent history_event(const EventDecl& e, const HistoryFamily& f) const {
    HistoryEvent out;
    for (const auto& [t, name] : e) {
      if (t >= f.grid().size()) throw ValidationError("event time " + std::to_string(t) + " is off the grid");
      const Operator& p = oper(name);
      require_dim(p.dim(), f.dim(), "event projector '" + name + "'");
      if (!p.is_projector(w_.tol.alg)) throw NotProjectorError("event operator '" + name + "' is not a projector");
      out.push_back(TimeCondition{t, p});
    }
    return out;
  }

  std::vector<Complex> amplitudes(const QueryDecl& q, std::size_t n) const {
    require_dim(q.amplitudes.size(), n, "amplitude list");
    return q.amplitudes;
  }

  std::function<Json()> query(const QueryDecl& q) {
    const Tolerances tol = w_.tol;
    if (q.kind == "consistency" || q.kind == "probability" || q.kind == "conditional" || q.kind == "sample") {
      const HistoryFamily& f = lookup(w_.families, q.family, "family");
      auto [dname, dyn] = dynamics_for(q, f.dim());
      if (!(dyn.grid() == f.grid())) throw GridMismatchError("family and dynamics grids differ");
      require_dim(dyn.dim(), f.dim(), "dynamics '" + dname + "'");
      Json head{{"family", q.family}, {"dynamics", dname}};
      if (q.kind == "consistency") {
        return [f, dyn, tol, head]() {
          const auto r = decoherence_functional(f, dyn, tol);
          Json out = head;
          out["consistent"] = r.consistent;
          out["max_offdiag_residual"] = clean(r.max_offdiag_residual);
          if (r.labels.size() > 1) out["worst_pair"] = {r.labels[r.worst_row], r.labels[r.worst_col]};
          out["labels"] = r.labels;
          out["excluded"] = r.excluded;
          out["weights"] = reals(r.weights);
          out["probabilities"] = r.consistent ? reals(r.probabilities()) : Json(nullptr);
          out["decoherence"] = matrix_json(r.decoherence);
          return out;
        };
      }
      const HistoryEvent target = history_event(q.event, f);
      if (q.kind == "probability") {
        const EventDecl ev = q.event;
        return [f, dyn, tol, head, target, ev]() {
          const auto r = decoherence_functional(f, dyn, tol);
          Json out = head;
          out["event"] = event_json(ev);
          out["probability"] = clean(probability(f, r, target, tol));
          return out;
        };
      }
      if (q.kind == "conditional") {
        const HistoryEvent given = history_event(q.given, f);
        const EventDecl ev = q.event, gv = q.given;
        return [f, dyn, tol, head, target, given, ev, gv]() {
          Json out = head;
          out["event"] = event_json(ev);
          out["given"] = event_json(gv);
          out["probability"] = clean(conditional_probability(f, dyn, target, given, tol));
          return out;
        };
      }
      // sample
      if (q.draws == 0) throw ValidationError("draws must be positive");
      const std::size_t draws = q.draws;
      const std::uint64_t seed = seed_override_ ? *seed_override_ : q.seed;
      return [f, dyn, tol, head, draws, seed]() {
        const auto r = decoherence_functional(f, dyn, tol);
        const auto counts = sample_counts(r, draws, seed);
        Json out = head;
        out["draws"] = draws;
        out["seed"] = seed;
        out["labels"] = r.labels;
        out["probabilities"] = reals(r.probabilities());
        out["counts"] = counts;
        return out;
      };
    }
    if (q.kind == "compatibility" || q.kind == "refinement") {
      if (q.frameworks.size() != 2) throw ValidationError(q.kind + " takes exactly two frameworks");
      const std::string a = q.frameworks[0], b = q.frameworks[1];
      const bool pa = w_.pds.count(a) > 0, pb = w_.pds.count(b) > 0;
      const bool fa = w_.families.count(a) > 0, fb = w_.families.count(b) > 0;
      if ((pa && fa) || (pb && fb)) throw ValidationError("'" + (pa && fa ? a : b) + "' names both a pd and a family");
      if (pa && pb) {
        const PD f = framework(a), g = framework(b);
        require_dim(g.dim(), f.dim(), "pd '" + b + "'");
        Json head{{"frameworks", {a, b}}, {"type", "pd"}};
        if (q.kind == "compatibility") {
          return [f, g, tol, head]() {
            Json out = head;
            out["compatible"] = compatible(f, g, tol.alg);
            Json clash = Json::array();
            for (std::size_t i = 0; i < f.size(); ++i)
              for (std::size_t j = 0; j < g.size(); ++j)
                if (!commutes(f[i], g[j], tol.alg)) clash.push_back({f.label(i), g.label(j)});
            out["noncommuting"] = clash;
            return out;
          };
        }
        return [f, g, tol, head]() {
          const PD r = common_refinement(f, g, tol.alg);
          Json out = head;
          out["labels"] = r.labels();
          out["first_refines_second"] = refines(f, g, tol.alg);
          out["second_refines_first"] = refines(g, f, tol.alg);
          return out;
        };
      }
      if (fa && fb) {
        const HistoryFamily f = w_.families.at(a), g = w_.families.at(b);
        if (!(f.grid() == g.grid())) throw GridMismatchError("families live on different grids");
        require_dim(g.dim(), f.dim(), "family '" + b + "'");
        Json head{{"frameworks", {a, b}}, {"type", "family"}};
        if (q.kind == "compatibility") {
          auto [dname, dyn] = dynamics_for(q, f.dim());
          head["dynamics"] = dname;
          return [f, g, dyn, tol, head]() {
            Json out = head;
            out["commuting"] = family_compatible(f, g, tol.alg);
            out["compatible"] = family_compatible(f, g, dyn, tol);
            return out;
          };
        }
        return [f, g, tol, head]() {
          const HistoryFamily r = family_refinement(f, g, tol.alg);
          Json out = head;
          Json labels = Json::array();
          for (const auto& h : r.histories()) labels.push_back(h.label);
          out["labels"] = labels;
          return out;
        };
      }
      throw ValidationError(q.kind + " needs two pds or two families");
    }
    if (q.kind == "povm") {
      const PD p = framework(q.pd);
      const CompositeSpace sp = space(q.system);
      if (sp.size() != 2) throw ValidationError("povm system must have two factors: system and ancilla");
      require_dim(p.dim(), sp.total(), "pd '" + q.pd + "'");
      const Ket a0 = ket(q.ancilla);
      require_dim(a0.dim(), sp.factors[1], "ancilla '" + q.ancilla + "'");
      const auto psis = kets(q.states);
      for (std::size_t i = 0; i < psis.size(); ++i) require_dim(psis[i].dim(), sp.factors[0], "state '" + q.states[i] + "'");
      const auto names = q.states;
      const std::string pd_name = q.pd, anc = q.ancilla;
      return [p, sp, a0, psis, names, tol, pd_name, anc]() {
        const PovmElementSet povm = povm_from_ancilla(p, sp, a0, tol.alg);
        Json out{{"pd", pd_name}, {"ancilla", anc}, {"labels", povm.labels}};
        Json elements = Json::array();
        std::vector<double> min_eig;
        Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(povm.dim()), static_cast<Eigen::Index>(povm.dim()));
        for (const auto& r : povm.elements) {
          elements.push_back(matrix_json(r.matrix()));
          Eigen::SelfAdjointEigenSolver<Matrix> es(r.matrix(), Eigen::EigenvaluesOnly);
          min_eig.push_back(es.eigenvalues().minCoeff());
          sum += r.matrix();
        }
        out["elements"] = elements;
        out["min_eigenvalues"] = reals(min_eig);
        out["completeness_residual"] = clean(frobenius_norm(sum - Matrix::Identity(sum.rows(), sum.cols())));
        Json rows = Json::array();
        for (std::size_t i = 0; i < psis.size(); ++i) {
          std::vector<double> via_povm, direct;
          const Ket big = tensor(psis[i], a0);
          for (std::size_t j = 0; j < povm.size(); ++j) {
            via_povm.push_back(povm_probability(povm, j, psis[i]));
            direct.push_back(big.inner(p[j].apply(big)).real());
          }
          rows.push_back(Json{{"state", names[i]}, {"povm", reals(via_povm)}, {"direct", reals(direct)}});
        }
        out["states"] = rows;
        return out;
      };
    }
    if (q.kind == "locality-sweep") {
      if (q.dims.size() != 3) throw ValidationError("dims must list A, B and C");
      const TimeGrid g = grid();
      const std::size_t da = q.dims[0], db = q.dims[1], dc = q.dims[2];
      const Ket ab = ket(q.initial);
      require_dim(ab.dim(), da * db, "initial AB state");
      const auto a_steps = opers(q.a_steps), bc_steps = opers(q.bc_steps);
      for (const auto& t : a_steps) require_dim(t.dim(), da, "A step");
      for (const auto& t : bc_steps) require_dim(t.dim(), db * dc, "BC step");
      const auto a_pds = frameworks(q.a_pds);
      for (const auto& p : a_pds) require_dim(p.dim(), da, "A framework");
      const auto cs = kets(q.c_states);
      for (const auto& c : cs) require_dim(c.dim(), dc, "C state");
      const LocalityExperiment exp = make_locality_experiment(da, db, dc, ab, g, a_steps, bc_steps, a_pds);
      return [exp, cs, tol]() {
        const LocalityReport r = einstein_locality_check(exp, cs, tol);
        return Json{{"c_states", r.states},
                    {"passed", r.passed},
                    {"verdicts_agree", r.verdicts_agree},
                    {"reference_consistent", r.reference_consistent},
                    {"max_probability_deviation", clean(r.max_probability_deviation)},
                    {"max_residual_deviation", clean(r.max_residual_deviation)},
                    {"labels", r.labels},
                    {"reference_probabilities", reals(r.reference_probabilities)}};
      };
    }
    if (q.kind == "measurement" || q.kind == "preparation") {
      const auto basis = kets(q.states);
      const auto c = amplitudes(q, basis.size());
      MeasurementMode mode = MeasurementMode::von_neumann;
      if (q.kind == "measurement") {
        if (q.mode == "destructive") {
          mode = MeasurementMode::destructive;
        } else if (q.mode != "von-neumann") {
          throw ValidationError("mode must be destructive or von-neumann");
        }
      }
      const MeasurementModel m = build_measurement(basis, mode, q.apparatus_dim);
      if (q.kind == "measurement") {
        return [m, c, tol]() {
          const auto a = measurement_analysis(m, c, tol);
          return Json{{"mode", to_string(m.mode)},
                      {"consistent", a.report.consistent},
                      {"pointer_probabilities", reals(a.pointer_probabilities)},
                      {"rest_probability", clean(a.rest_probability)},
                      {"joint", table(a.joint)},
                      {"conditional", optional_table(a.conditional)}};
        };
      }
      return [m, c, tol]() {
        const auto a = preparation_analysis(m, c, tol);
        return Json{{"consistent", a.report.consistent},
                    {"pointer_probabilities", reals(a.pointer_probabilities)},
                    {"joint", table(a.joint)},
                    {"conditional", optional_table(a.conditional)}};
      };
    }
    if (q.kind == "contextual-preparation") {
      const auto rs = kets(q.states);
      const auto c = amplitudes(q, rs.size());
      return [rs, c, tol]() {
        const auto a = contextual_preparation(rs, c, tol);
        std::vector<std::vector<double>> overlaps(rs.size(), std::vector<double>(rs.size()));
        for (std::size_t i = 0; i < rs.size(); ++i)
          for (std::size_t j = 0; j < rs.size(); ++j) overlaps[i][j] = std::abs(rs[i].inner(rs[j]));
        Json cond = Json::array();
        for (const auto& v : a.conditional) cond.push_back(v ? Json(clean(*v)) : Json(nullptr));
        return Json{{"consistent", a.report.consistent},
                    {"overlaps", table(overlaps)},
                    {"pointer_probabilities", reals(a.pointer_probabilities)},
                    {"conditional", cond}};
      };
    }
    if (q.kind == "singlet-correlation") {
      if (q.axes.size() != 2) throw ValidationError("axes must name two spin axes");
      const Axis a = parse_axis(q.axes[0]), b = parse_axis(q.axes[1]);
      return [a, b, tol]() {
        const auto t = singlet_correlation(a, b, tol);
        auto arr = [](const std::array<std::array<double, 2>, 2>& m) {
          return table({{m[0][0], m[0][1]}, {m[1][0], m[1][1]}});
        };
        return Json{{"axes", {to_string(a), to_string(b)}}, {"joint", arr(t.joint)}, {"conditional", arr(t.conditional)}};
      };
    }
    throw ValidationError("unknown query kind '" + q.kind + "'");
  }

 public:
  std::optional<std::uint64_t> seed_override_;

 private:
  const Scenario& s_;
  Workspace& w_;
};

// --- human rendering ----------------------------------------------------------

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool flat(const Json& v) {
  if (!v.is_array()) return false;
  return std::all_of(v.begin(), v.end(), [](const Json& x) { return !x.is_structured(); });
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

void render_value(std::ostringstream& os, const std::string& key, const Json& v, const std::string& indent) {
  if (!v.is_structured()) {
    os << indent << key << ": " << scalar_text(v) << "\n";
  } else if (flat(v)) {
    os << indent << key << ":";
    for (const auto& x : v) os << " " << scalar_text(x);
    os << "\n";
  } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& r) { return flat(r); })) {
    os << indent << key << ":\n";
    for (const auto& row : v) {
      os << indent << "  ";
      for (const auto& x : row) os << pad(scalar_text(x), 14);
      os << "\n";
    }
  } else if (v.is_object() && v.contains("re") && v.contains("im")) {
    os << indent << key << ":\n";
    const Json& re = v["re"];
    const Json& im = v["im"];
    for (std::size_t r = 0; r < re.size(); ++r) {
      os << indent << "  ";
      for (std::size_t c = 0; c < re[r].size(); ++c) {
        const double a = re[r][c].get<double>(), b = im[r][c].get<double>();
        std::string z = num6(a);
        if (b != 0.0) z = (a == 0.0 ? "" : z + (b < 0 ? "-" : "+")) + num6(a == 0.0 ? b : std::abs(b)) + "i";
        os << pad(z, 14);
      }
      os << "\n";
    }
  } else if (v.is_object()) {
    os << indent << key << ":\n";
    for (const auto& [k, x] : v.items()) render_value(os, k, x, indent + "  ");
  } else {
    os << indent << key << ":\n";
    for (std::size_t i = 0; i < v.size(); ++i) render_value(os, "[" + std::to_string(i + 1) + "]", v[i], indent + "  ");
  }
}

}  // namespace

Workspace validate(const Scenario& s, const RunOptions& options) {
  Workspace w;
  w.tol = s.tolerances;
  for (const auto& t : options.tolerances) apply_tolerance(w.tol, t);
  Builder b(s, w);
  b.seed_override_ = options.seed;
  b.build();
  return w;
}

int Report::exit_code() const {
  for (const auto& r : results)
    if (!r.ok) return 1;
  return 0;
}

Report run(const Scenario& s, const RunOptions& options) {
  Workspace w = validate(s, options);
  Report rep;
  rep.scenario = s.name;
  rep.description = s.description;
  for (std::size_t i = 0; i < w.queries.size(); ++i) {
    QueryResult r;
    r.index = i + 1;
    r.kind = s.queries[i].kind;
    r.name = s.queries[i].name;
    try {
      r.result = w.queries[i]();
    } catch (const Error& e) {
      r.ok = false;
      r.error_type = e.kind();
      r.error_message = e.what();
    }
    rep.results.push_back(std::move(r));
  }
  return rep;
}

std::string render_machine(const Report& r) {
  std::string out;
  for (const auto& q : r.results) {
    Json rec{{"scenario", r.scenario}, {"query", q.index}, {"kind", q.kind}};
    if (!q.name.empty()) rec["name"] = q.name;
    rec["status"] = q.ok ? "ok" : "error";
    if (q.ok) {
      rec["result"] = q.result;
    } else {
      rec["error"] = Json{{"type", q.error_type}, {"message", q.error_message}};
    }
    out += rec.dump() + "\n";
  }
  return out;
}

std::string render_human(const Report& r) {
  std::ostringstream os;
  os << "scenario " << (r.scenario.empty() ? "(unnamed)" : r.scenario);
  if (!r.description.empty()) os << " - " << r.description;
  os << "\n";
  for (const auto& q : r.results) {
    os << "\n[" << q.index << "] " << q.kind;
    if (!q.name.empty()) os << " '" << q.name << "'";
    if (!q.ok) {
      os << ": ERROR (" << q.error_type << ")\n    " << q.error_message << "\n";
      continue;
    }
    os << "\n";
    const Json& res = q.result;
    // Per-history columns read better side by side.
    const std::vector<std::string> column_keys{"weights", "probabilities", "counts"};
    std::vector<std::string> columns;
    if (res.contains("labels")) {
      for (const auto& c : column_keys)
        if (res.contains(c) && res[c].is_array() && res[c].size() == res["labels"].size()) columns.push_back(c);
    }
    for (const auto& [k, v] : res.items()) {
      if (k == "excluded" || std::find(columns.begin(), columns.end(), k) != columns.end()) continue;
      if (k != "labels" || columns.empty()) {
        render_value(os, k, v, "    ");
        continue;
      }
      os << "    " << pad("history", 30);
      for (const auto& c : columns) os << pad(c, 18);
      os << "\n";
      for (std::size_t a = 0; a < v.size(); ++a) {
        std::string label = v[a].get<std::string>();
        if (res.contains("excluded") && res["excluded"][a].get<bool>()) label += " (excluded)";
        os << "    " << pad(label, 30);
        for (const auto& c : columns) os << pad(scalar_text(res[c][a]), 18);
        os << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace chist::scenario
