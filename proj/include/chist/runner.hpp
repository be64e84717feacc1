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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chist/dynamics.hpp"
#include "chist/framework.hpp"
#include "chist/histories.hpp"
#include "chist/operator.hpp"
#include "chist/scenario.hpp"
#include "chist/timegrid.hpp"

namespace chist::scenario {

using Json = nlohmann::ordered_json;

/// Every declared object, built and checked.
struct Workspace {
  Tolerances tol;
  std::map<std::string, CompositeSpace> systems;
  std::map<std::string, Ket> states;
  std::map<std::string, Operator> operators;
  std::map<std::string, PD> pds;
  std::optional<TimeGrid> grid;
  std::map<std::string, Dynamics> dynamics;
  std::map<std::string, HistoryFamily> families;
  /// One prepared computation per query, in order.
  std::vector<std::function<Json()>> queries;
};

struct RunOptions {
  /// Replaces the seed of every sample query.
  std::optional<std::uint64_t> seed;
  /// "name=value" assignments applied over the scenario's tolerances.
  std::vector<std::string> tolerances;
};

/// Resolves every name and builds every object. Throws ValidationError
/// naming the offending declaration and its line.
Workspace validate(const Scenario& s, const RunOptions& options = {});

struct QueryResult {
  std::size_t index = 0;  // 1-based
  std::string kind;
  std::string name;
  bool ok = true;
  std::string error_type;
  std::string error_message;
  Json result;
};

struct Report {
  std::string scenario;
  std::string description;
  std::vector<QueryResult> results;

  /// 0 if every query succeeded, 1 otherwise.
  int exit_code() const;
};

/// Validates, then runs the queries in order. A failing query is recorded
/// and the rest still run.
Report run(const Scenario& s, const RunOptions& options = {});

/// One JSON object per line, one line per query.
std::string render_machine(const Report& r);
std::string render_human(const Report& r);

}  // namespace chist::scenario
