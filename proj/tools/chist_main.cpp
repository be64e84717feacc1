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

// Command-line front end: check/run scenario files and the built-in demos.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "chist/demos.hpp"
#include "chist/errors.hpp"
#include "chist/runner.hpp"
#include "chist/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;

struct Flags {
  bool machine = false;
  std::vector<std::string> tolerances;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int emit(const Flags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text << std::flush;
    return kOk;
  }
  std::ofstream f(flags.out, std::ios::binary);
  if (!f) {
    std::cerr << "chist: cannot write " << flags.out << "\n";
    return kInvalid;
  }
  f << text;
  return kOk;
}

int run_scenario(const chist::scenario::Scenario& s, const Flags& flags) {
  chist::scenario::RunOptions opts;
  opts.seed = flags.seed;
  opts.tolerances = flags.tolerances;
  const auto report = chist::scenario::run(s, opts);
  const int written = emit(flags, flags.machine ? chist::scenario::render_machine(report)
                                                : chist::scenario::render_human(report));
  return written != kOk ? written : report.exit_code();
}

int check_scenario(const chist::scenario::Scenario& s, const Flags& flags) {
  chist::scenario::RunOptions opts;
  opts.tolerances = flags.tolerances;
  const auto w = chist::scenario::validate(s, opts);
  if (flags.machine) {
    chist::scenario::Json rec{{"scenario", s.name}, {"status", "ok"}, {"queries", w.queries.size()}};
    return emit(flags, rec.dump() + "\n");
  }
  return emit(flags, "ok: " + (s.name.empty() ? std::string("scenario") : s.name) + " is valid (" +
                         std::to_string(w.queries.size()) + " queries)\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chist - consistent histories for finite-dimensional quantum systems"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  std::uint64_t seed = 0;
  app.add_flag("--machine", flags.machine, "One JSON record per query instead of tables");
  app.add_option("--tolerance", flags.tolerances, "Override a tolerance: alg, norm, consistency, floor or prob")
      ->type_name("NAME=VALUE");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every sample query");
  app.add_option("--out", flags.out, "Write the report to a file");

  std::string file, demo_name;
  auto* check = app.add_subcommand("check", "Parse and validate a scenario file");
  check->add_option("file", file, "Scenario file")->required();
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("file", file, "Scenario file")->required();
  auto* demo = app.add_subcommand("demo", "Run a built-in demo");
  demo->add_option("name", demo_name, "Demo name (see 'demos')")->required();
  auto* demos = app.add_subcommand("demos", "List the built-in demos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  if (*seed_opt) flags.seed = seed;

  try {
    if (*demos) {
      std::string text;
      for (const auto& d : chist::demos::all()) {
        if (flags.machine) {
          text += chist::scenario::Json{{"name", d.name}, {"description", chist::demos::description(d)}}.dump() + "\n";
        } else {
          std::string name(d.name);
          name.resize(std::max<std::size_t>(name.size() + 2, 24), ' ');
          text += name + chist::demos::description(d) + "\n";
        }
      }
      return emit(flags, text);
    }
    if (*demo) {
      const auto* d = chist::demos::find(demo_name);
      if (!d) {
        std::cerr << "chist: no demo named '" << demo_name << "'; try 'chist demos'\n";
        return kInvalid;
      }
      return run_scenario(chist::scenario::parse(std::string(d->text)), flags);
    }
    const auto s = chist::scenario::parse_file(file);
    if (*check) return check_scenario(s, flags);
    return run_scenario(s, flags);
  } catch (const chist::Error& e) {
    std::cerr << "chist: " << e.kind() << ": " << e.what() << "\n";
    return kInvalid;
  }
}
