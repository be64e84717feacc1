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

#include <string>
#include <string_view>
#include <vector>

namespace chist::demos {

/// A built-in scenario, compiled into the binary from demos/*.yaml.
struct Demo {
  std::string_view name;
  std::string_view text;
};

/// In registry order.
const std::vector<Demo>& all();
/// nullptr if there is no demo called `name`.
const Demo* find(std::string_view name);
/// The scenario's one-line description.
std::string description(const Demo& demo);

}  // namespace chist::demos
