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

// Declarative scenario files. A scenario names systems, states, operators,
// frameworks, a time grid, dynamics and history families, then lists the
// queries to run against them. The on-disk form is YAML; complex numbers are
// written as strings like "0.5", "-2i" or "0.5-0.25i".

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chist/operator.hpp"

namespace chist::scenario {

/// A system is one factor or a tensor product of several.
struct SystemDecl {
  std::string name;
  std::vector<std::size_t> dims;
  bool operator==(const SystemDecl&) const = default;
};

struct StateDecl {
  std::string name;
  /// amplitudes | spin | basis | tensor | singlet
  std::string kind;
  std::string system;
  std::vector<Complex> amplitudes;
  bool normalize = false;
  std::string spin;  // "z+", "x-", ...
  std::size_t index = 0;
  std::vector<std::string> parts;
  bool operator==(const StateDecl&) const = default;
};

struct IntervalDecl {
  std::vector<double> points;
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const IntervalDecl&) const = default;
};

struct OperatorDecl {
  std::string name;
  /// matrix | spin | rotation | dyad | tensor | identity | complement | sum
  /// | product | embed | interval
  std::string kind;
  std::string system;
  std::vector<std::vector<Complex>> matrix;
  std::string flavor;  // matrix only; empty means none
  std::string spin;
  std::string axis;
  double angle = 0.0;
  std::string ref;  // dyad state, complement/embed operator
  std::vector<std::string> parts;
  std::size_t index = 0;
  IntervalDecl interval;
  bool operator==(const OperatorDecl&) const = default;
};

struct PdDecl {
  std::string name;
  /// spin | basis | projectors | trivial | lift | refinement
  std::string kind;
  std::string axis;
  std::vector<std::string> parts;
  std::vector<std::string> labels;
  std::string system;
  std::string ref;
  std::size_t index = 0;
  bool operator==(const PdDecl&) const = default;
};

struct GridDecl {
  std::vector<double> times;
  bool operator==(const GridDecl&) const = default;
};

struct DynamicsDecl {
  std::string name;
  /// steps | repeat | hamiltonian | trivial
  std::string kind;
  std::vector<std::string> steps;
  std::string ref;
  bool operator==(const DynamicsDecl&) const = default;
};

struct RawHistoryDecl {
  std::string label;
  std::vector<std::string> factors;
  bool excluded = false;
  bool operator==(const RawHistoryDecl&) const = default;
};

struct FamilyDecl {
  std::string name;
  /// product | fixed-initial | unitary | raw
  std::string kind;
  std::vector<std::string> pds;
  std::string initial;  // operator (fixed-initial) or state (unitary)
  std::string dynamics;
  std::string system;  // raw only
  std::vector<RawHistoryDecl> histories;
  bool operator==(const FamilyDecl&) const = default;
};

/// time index -> projector name
using EventDecl = std::map<std::size_t, std::string>;

struct QueryDecl {
  /// consistency | probability | conditional | compatibility | refinement |
  /// povm | locality-sweep | sample | measurement | preparation |
  /// contextual-preparation | singlet-correlation
  std::string kind;
  std::string name;
  std::string family;
  std::string dynamics;
  EventDecl event;
  EventDecl given;
  std::vector<std::string> frameworks;  // compatibility, refinement
  std::string pd;                       // povm
  std::string system;                   // povm
  std::string ancilla;                  // povm
  std::vector<std::string> states;      // povm, contextual-preparation, measurement basis
  std::vector<Complex> amplitudes;
  std::string mode;
  std::size_t apparatus_dim = 0;
  std::vector<std::size_t> dims;  // locality-sweep: A, B, C
  std::string initial;
  std::vector<std::string> a_steps;
  std::vector<std::string> bc_steps;
  std::vector<std::string> a_pds;
  std::vector<std::string> c_states;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> axes;  // singlet-correlation
  bool operator==(const QueryDecl&) const = default;
};

struct Scenario {
  std::string name;
  std::string description;
  Tolerances tolerances;
  std::vector<SystemDecl> systems;
  std::vector<StateDecl> states;
  std::vector<OperatorDecl> operators;
  std::vector<PdDecl> pds;
  std::optional<GridDecl> grid;
  std::vector<DynamicsDecl> dynamics;
  std::vector<FamilyDecl> families;
  std::vector<QueryDecl> queries;

  /// Source line of each declaration ("states.up", "queries.3", ...), for
  /// diagnostics. Not part of equality.
  std::map<std::string, int> lines;

  bool operator==(const Scenario& o) const;
  /// "line N" for a declaration key, or "" if unknown.
  std::string where(const std::string& key) const;
};

/// Throws ParseError (with a line number) on malformed input. Structural
/// checks only; names are resolved by `validate`.
Scenario parse(const std::string& text);
Scenario parse_file(const std::string& path);

std::string serialize(const Scenario& s);

std::string format_complex(Complex z);
/// Accepts "a", "bi", "a+bi", "a-bi", "i", "-i" (spaces ignored). Throws
/// ParseError on anything else.
Complex parse_complex(const std::string& text);
/// A number, or a multiple/fraction of pi such as "pi/3" or "-2pi/3".
double parse_angle(const std::string& text);

/// Applies a "name=value" override (alg, norm, consistency, floor, prob).
/// Throws ValidationError on an unknown name or a bad value.
void apply_tolerance(Tolerances& tol, const std::string& assignment);

}  // namespace chist::scenario
