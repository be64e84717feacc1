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

#include "chist/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "chist/errors.hpp"

namespace chist::scenario {
namespace {

using Keys = std::set<std::string>;

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_of(n)) + ": " + msg);
}

std::string scalar(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) fail(n, what + " must be a scalar");
  return n.Scalar();
}

double real(const YAML::Node& n, const std::string& what) {
  const std::string s = scalar(n, what);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(n, what + ": '" + s + "' is not a number");
  }
  if (used != s.size() || !std::isfinite(v)) fail(n, what + ": '" + s + "' is not a finite number");
  return v;
}

std::uint64_t unsigned_int(const YAML::Node& n, const std::string& what) {
  const std::string s = scalar(n, what);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    fail(n, what + ": '" + s + "' is not a non-negative integer");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(n, what + ": '" + s + "' is out of range");
  }
}

bool boolean(const YAML::Node& n, const std::string& what) {
  const std::string s = scalar(n, what);
  if (s == "true") return true;
  if (s == "false") return false;
  fail(n, what + ": expected true or false");
}

Complex complex_at(const YAML::Node& n, const std::string& what) {
  const std::string s = scalar(n, what);
  try {
    return parse_complex(s);
  } catch (const ParseError& e) {
    fail(n, what + ": " + e.what());
  }
}

std::vector<std::string> names(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) fail(n, what + " must be a list");
  std::vector<std::string> out;
  for (const auto& item : n) out.push_back(scalar(item, what));
  return out;
}

std::vector<Complex> complex_list(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) fail(n, what + " must be a list");
  std::vector<Complex> out;
  for (const auto& item : n) out.push_back(complex_at(item, what));
  return out;
}

std::vector<double> real_list(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) fail(n, what + " must be a list");
  std::vector<double> out;
  for (const auto& item : n) out.push_back(real(item, what));
  return out;
}

std::vector<std::size_t> size_list(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) fail(n, what + " must be a list");
  std::vector<std::size_t> out;
  for (const auto& item : n) out.push_back(static_cast<std::size_t>(unsigned_int(item, what)));
  return out;
}

void require_map(const YAML::Node& n, const std::string& what) {
  if (!n.IsMap()) fail(n, what + " must be a mapping");
}

void check_keys(const YAML::Node& n, const std::string& what, const Keys& allowed) {
  require_map(n, what);
  for (const auto& kv : n) {
    const std::string key = kv.first.Scalar();
    if (!allowed.count(key)) fail(kv.first, what + ": unknown key '" + key + "'");
  }
}

YAML::Node need(const YAML::Node& n, const std::string& key, const std::string& what) {
  const YAML::Node v = n[key];
  if (!v) fail(n, what + ": missing '" + key + "'");
  return v;
}

/// Which of `kinds` is present as a key; exactly one must be.
std::string discriminator(const YAML::Node& n, const std::string& what, const std::vector<std::string>& kinds) {
  require_map(n, what);
  std::string found;
  for (const auto& k : kinds) {
    if (n[k]) {
      if (!found.empty()) fail(n, what + ": both '" + found + "' and '" + k + "' given");
      found = k;
    }
  }
  if (found.empty()) {
    std::string all;
    for (const auto& k : kinds) all += (all.empty() ? "" : ", ") + k;
    fail(n, what + ": expected one of " + all);
  }
  return found;
}

EventDecl event(const YAML::Node& n, const std::string& what) {
  require_map(n, what);
  EventDecl out;
  for (const auto& kv : n) {
    const auto t = static_cast<std::size_t>(unsigned_int(kv.first, what + " time"));
    if (out.count(t)) fail(kv.first, what + ": time " + std::to_string(t) + " given twice");
    out[t] = scalar(kv.second, what + " projector");
  }
  return out;
}

// ---------------------------------------------------------------------------

SystemDecl parse_system(const std::string& name, const YAML::Node& n) {
  SystemDecl d{name, {}};
  if (n.IsScalar()) {
    d.dims.push_back(static_cast<std::size_t>(unsigned_int(n, "system " + name)));
  } else {
    d.dims = size_list(n, "system " + name);
  }
  if (d.dims.empty()) fail(n, "system " + name + " has no factors");
  return d;
}

StateDecl parse_state(const std::string& name, const YAML::Node& n) {
  const std::string what = "state " + name;
  StateDecl d;
  d.name = name;
  d.kind = discriminator(n, what, {"amplitudes", "spin", "basis", "tensor", "singlet"});
  if (d.kind == "amplitudes") {
    check_keys(n, what, {"amplitudes", "system", "normalize"});
    d.system = scalar(need(n, "system", what), what + " system");
    d.amplitudes = complex_list(n["amplitudes"], what + " amplitudes");
    if (n["normalize"]) d.normalize = boolean(n["normalize"], what + " normalize");
  } else if (d.kind == "spin") {
    check_keys(n, what, {"spin"});
    d.spin = scalar(n["spin"], what + " spin");
  } else if (d.kind == "basis") {
    check_keys(n, what, {"basis", "system"});
    d.system = scalar(need(n, "system", what), what + " system");
    d.index = static_cast<std::size_t>(unsigned_int(n["basis"], what + " basis"));
  } else if (d.kind == "tensor") {
    check_keys(n, what, {"tensor"});
    d.parts = names(n["tensor"], what + " tensor");
  } else {
    check_keys(n, what, {"singlet"});
    if (!boolean(n["singlet"], what + " singlet")) fail(n, what + ": singlet must be true");
  }
  return d;
}

OperatorDecl parse_operator(const std::string& name, const YAML::Node& n) {
  const std::string what = "operator " + name;
  OperatorDecl d;
  d.name = name;
  d.kind = discriminator(n, what, {"matrix", "spin", "rotation", "dyad", "tensor", "identity", "complement", "sum",
                                   "product", "embed", "interval"});
  if (d.kind == "matrix") {
    check_keys(n, what, {"matrix", "system", "flavor"});
    d.system = scalar(need(n, "system", what), what + " system");
    const YAML::Node rows = n["matrix"];
    if (!rows.IsSequence()) fail(rows, what + ": matrix must be a list of rows");
    for (const auto& row : rows) d.matrix.push_back(complex_list(row, what + " matrix row"));
    if (n["flavor"]) d.flavor = scalar(n["flavor"], what + " flavor");
  } else if (d.kind == "spin") {
    check_keys(n, what, {"spin"});
    d.spin = scalar(n["spin"], what + " spin");
  } else if (d.kind == "rotation") {
    check_keys(n, what, {"rotation", "angle"});
    d.axis = scalar(n["rotation"], what + " rotation axis");
    const YAML::Node a = need(n, "angle", what);
    try {
      d.angle = parse_angle(scalar(a, what + " angle"));
    } catch (const ParseError& e) {
      fail(a, what + ": " + e.what());
    }
  } else if (d.kind == "dyad") {
    check_keys(n, what, {"dyad"});
    d.ref = scalar(n["dyad"], what + " dyad");
  } else if (d.kind == "tensor" || d.kind == "sum" || d.kind == "product") {
    check_keys(n, what, {d.kind});
    d.parts = names(n[d.kind], what + " " + d.kind);
  } else if (d.kind == "identity") {
    check_keys(n, what, {"identity"});
    d.system = scalar(n["identity"], what + " identity");
  } else if (d.kind == "complement") {
    check_keys(n, what, {"complement"});
    d.ref = scalar(n["complement"], what + " complement");
  } else if (d.kind == "embed") {
    check_keys(n, what, {"embed", "system", "index"});
    d.ref = scalar(n["embed"], what + " embed");
    d.system = scalar(need(n, "system", what), what + " system");
    d.index = static_cast<std::size_t>(unsigned_int(need(n, "index", what), what + " index"));
  } else {
    check_keys(n, what, {"interval"});
    const YAML::Node iv = n["interval"];
    check_keys(iv, what + " interval", {"points", "lo", "hi"});
    d.interval.points = real_list(need(iv, "points", what), what + " points");
    d.interval.lo = real(need(iv, "lo", what), what + " lo");
    d.interval.hi = real(need(iv, "hi", what), what + " hi");
  }
  return d;
}

PdDecl parse_pd(const std::string& name, const YAML::Node& n) {
  const std::string what = "pd " + name;
  PdDecl d;
  d.name = name;
  d.kind = discriminator(n, what, {"spin", "basis", "projectors", "trivial", "lift", "refinement"});
  if (d.kind == "spin") {
    check_keys(n, what, {"spin"});
    d.axis = scalar(n["spin"], what + " spin");
  } else if (d.kind == "basis" || d.kind == "projectors") {
    check_keys(n, what, {d.kind, "labels"});
    d.parts = names(n[d.kind], what + " " + d.kind);
    if (n["labels"]) d.labels = names(n["labels"], what + " labels");
  } else if (d.kind == "trivial") {
    check_keys(n, what, {"trivial"});
    d.system = scalar(n["trivial"], what + " trivial");
  } else if (d.kind == "lift") {
    check_keys(n, what, {"lift", "system", "index"});
    d.ref = scalar(n["lift"], what + " lift");
    d.system = scalar(need(n, "system", what), what + " system");
    d.index = static_cast<std::size_t>(unsigned_int(need(n, "index", what), what + " index"));
  } else {
    check_keys(n, what, {"refinement"});
    d.parts = names(n["refinement"], what + " refinement");
  }
  return d;
}

DynamicsDecl parse_dynamics(const std::string& name, const YAML::Node& n) {
  const std::string what = "dynamics " + name;
  DynamicsDecl d;
  d.name = name;
  d.kind = discriminator(n, what, {"steps", "repeat", "hamiltonian", "trivial"});
  check_keys(n, what, {d.kind});
  if (d.kind == "steps") {
    d.steps = names(n["steps"], what + " steps");
  } else {
    d.ref = scalar(n[d.kind], what + " " + d.kind);
  }
  return d;
}

FamilyDecl parse_family(const std::string& name, const YAML::Node& n) {
  const std::string what = "family " + name;
  FamilyDecl d;
  d.name = name;
  d.kind = discriminator(n, what, {"product", "fixed-initial", "unitary", "raw"});
  if (d.kind == "product") {
    check_keys(n, what, {"product"});
    d.pds = names(n["product"], what + " product");
  } else if (d.kind == "fixed-initial") {
    check_keys(n, what, {"fixed-initial", "later"});
    d.initial = scalar(n["fixed-initial"], what + " fixed-initial");
    d.pds = names(need(n, "later", what), what + " later");
  } else if (d.kind == "unitary") {
    check_keys(n, what, {"unitary", "dynamics"});
    d.initial = scalar(n["unitary"], what + " unitary");
    d.dynamics = scalar(need(n, "dynamics", what), what + " dynamics");
  } else {
    check_keys(n, what, {"raw", "system"});
    d.system = scalar(need(n, "system", what), what + " system");
    const YAML::Node hs = n["raw"];
    if (!hs.IsSequence()) fail(hs, what + ": raw must be a list of histories");
    for (const auto& h : hs) {
      check_keys(h, what + " history", {"label", "factors", "excluded"});
      RawHistoryDecl r;
      r.label = scalar(need(h, "label", what), what + " label");
      r.factors = names(need(h, "factors", what), what + " factors");
      if (h["excluded"]) r.excluded = boolean(h["excluded"], what + " excluded");
      d.histories.push_back(std::move(r));
    }
  }
  return d;
}

const std::map<std::string, Keys>& query_keys() {
  static const std::map<std::string, Keys> keys = {
      {"consistency", {"family", "dynamics"}},
      {"probability", {"family", "dynamics", "event"}},
      {"conditional", {"family", "dynamics", "event", "given"}},
      {"compatibility", {"frameworks", "dynamics"}},
      {"refinement", {"frameworks"}},
      {"povm", {"pd", "system", "ancilla", "states"}},
      {"locality-sweep", {"dims", "initial", "a-steps", "bc-steps", "a-pds", "c-states"}},
      {"sample", {"family", "dynamics", "draws", "seed"}},
      {"measurement", {"states", "mode", "amplitudes", "apparatus-dim"}},
      {"preparation", {"states", "amplitudes", "apparatus-dim"}},
      {"contextual-preparation", {"states", "amplitudes"}},
      {"singlet-correlation", {"axes"}},
  };
  return keys;
}

QueryDecl parse_query(std::size_t index, const YAML::Node& n) {
  std::string what = "query " + std::to_string(index + 1);
  require_map(n, what);
  QueryDecl q;
  q.kind = scalar(need(n, "kind", what), what + " kind");
  const auto it = query_keys().find(q.kind);
  if (it == query_keys().end()) fail(n["kind"], what + ": unknown query kind '" + q.kind + "'");
  Keys allowed = it->second;
  allowed.insert("kind");
  allowed.insert("name");
  check_keys(n, what, allowed);
  what += " (" + q.kind + ")";
  auto req = [&](const char* key) { return need(n, key, what); };
  if (n["name"]) q.name = scalar(n["name"], what + " name");
  if (allowed.count("family")) q.family = scalar(req("family"), what + " family");
  if (n["dynamics"]) q.dynamics = scalar(n["dynamics"], what + " dynamics");
  if (allowed.count("event")) q.event = event(req("event"), what + " event");
  if (allowed.count("given")) q.given = event(req("given"), what + " given");
  if (allowed.count("frameworks")) q.frameworks = names(req("frameworks"), what + " frameworks");
  if (allowed.count("pd")) q.pd = scalar(req("pd"), what + " pd");
  if (allowed.count("system")) q.system = scalar(req("system"), what + " system");
  if (allowed.count("ancilla")) q.ancilla = scalar(req("ancilla"), what + " ancilla");
  if (allowed.count("states")) q.states = names(req("states"), what + " states");
  if (allowed.count("amplitudes")) q.amplitudes = complex_list(req("amplitudes"), what + " amplitudes");
  if (allowed.count("mode")) q.mode = scalar(req("mode"), what + " mode");
  if (n["apparatus-dim"]) q.apparatus_dim = static_cast<std::size_t>(unsigned_int(n["apparatus-dim"], what));
  if (allowed.count("dims")) q.dims = size_list(req("dims"), what + " dims");
  if (allowed.count("initial")) q.initial = scalar(req("initial"), what + " initial");
  if (allowed.count("a-steps")) q.a_steps = names(req("a-steps"), what + " a-steps");
  if (allowed.count("bc-steps")) q.bc_steps = names(req("bc-steps"), what + " bc-steps");
  if (allowed.count("a-pds")) q.a_pds = names(req("a-pds"), what + " a-pds");
  if (allowed.count("c-states")) q.c_states = names(req("c-states"), what + " c-states");
  if (allowed.count("draws")) q.draws = static_cast<std::size_t>(unsigned_int(req("draws"), what + " draws"));
  if (n["seed"]) q.seed = unsigned_int(n["seed"], what + " seed");
  if (allowed.count("axes")) q.axes = names(req("axes"), what + " axes");
  return q;
}

template <typename Decl, typename Fn>
void parse_section(const YAML::Node& root, const char* section, std::vector<Decl>& out,
                   std::map<std::string, int>& lines, Fn fn) {
  const YAML::Node n = root[section];
  if (!n) return;
  require_map(n, section);
  for (const auto& kv : n) {
    const std::string name = scalar(kv.first, std::string(section) + " name");
    const std::string key = std::string(section) + "." + name;
    if (lines.count(key)) fail(kv.first, std::string(section) + ": '" + name + "' declared twice");
    lines[key] = line_of(kv.first);
    out.push_back(fn(name, kv.second));
  }
}

// ---------------------------------------------------------------------------

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_names(YAML::Emitter& e, const std::vector<std::string>& v) {
  e << YAML::Flow << YAML::BeginSeq;
  for (const auto& s : v) e << s;
  e << YAML::EndSeq;
}

void emit_complex(YAML::Emitter& e, const std::vector<Complex>& v) {
  e << YAML::Flow << YAML::BeginSeq;
  for (const auto& z : v) e << format_complex(z);
  e << YAML::EndSeq;
}

void emit_sizes(YAML::Emitter& e, const std::vector<std::size_t>& v) {
  e << YAML::Flow << YAML::BeginSeq;
  for (auto s : v) e << s;
  e << YAML::EndSeq;
}

void emit_event(YAML::Emitter& e, const EventDecl& ev) {
  e << YAML::Flow << YAML::BeginMap;
  for (const auto& [t, p] : ev) e << YAML::Key << t << YAML::Value << p;
  e << YAML::EndMap;
}

void emit_state(YAML::Emitter& e, const StateDecl& d) {
  e << YAML::BeginMap;
  if (d.kind == "amplitudes") {
    e << YAML::Key << "system" << YAML::Value << d.system;
    e << YAML::Key << "amplitudes" << YAML::Value;
    emit_complex(e, d.amplitudes);
    if (d.normalize) e << YAML::Key << "normalize" << YAML::Value << true;
  } else if (d.kind == "spin") {
    e << YAML::Key << "spin" << YAML::Value << d.spin;
  } else if (d.kind == "basis") {
    e << YAML::Key << "system" << YAML::Value << d.system << YAML::Key << "basis" << YAML::Value << d.index;
  } else if (d.kind == "tensor") {
    e << YAML::Key << "tensor" << YAML::Value;
    emit_names(e, d.parts);
  } else {
    e << YAML::Key << "singlet" << YAML::Value << true;
  }
  e << YAML::EndMap;
}

void emit_operator(YAML::Emitter& e, const OperatorDecl& d) {
  e << YAML::BeginMap;
  if (d.kind == "matrix") {
    e << YAML::Key << "system" << YAML::Value << d.system;
    e << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : d.matrix) emit_complex(e, row);
    e << YAML::EndSeq;
    if (!d.flavor.empty()) e << YAML::Key << "flavor" << YAML::Value << d.flavor;
  } else if (d.kind == "spin") {
    e << YAML::Key << "spin" << YAML::Value << d.spin;
  } else if (d.kind == "rotation") {
    e << YAML::Key << "rotation" << YAML::Value << d.axis;
    e << YAML::Key << "angle" << YAML::Value << format_real(d.angle);
  } else if (d.kind == "dyad" || d.kind == "complement") {
    e << YAML::Key << d.kind << YAML::Value << d.ref;
  } else if (d.kind == "tensor" || d.kind == "sum" || d.kind == "product") {
    e << YAML::Key << d.kind << YAML::Value;
    emit_names(e, d.parts);
  } else if (d.kind == "identity") {
    e << YAML::Key << "identity" << YAML::Value << d.system;
  } else if (d.kind == "embed") {
    e << YAML::Key << "embed" << YAML::Value << d.ref << YAML::Key << "system" << YAML::Value << d.system;
    e << YAML::Key << "index" << YAML::Value << d.index;
  } else {
    e << YAML::Key << "interval" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "points" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double p : d.interval.points) e << format_real(p);
    e << YAML::EndSeq;
    e << YAML::Key << "lo" << YAML::Value << format_real(d.interval.lo);
    e << YAML::Key << "hi" << YAML::Value << format_real(d.interval.hi);
    e << YAML::EndMap;
  }
  e << YAML::EndMap;
}

void emit_pd(YAML::Emitter& e, const PdDecl& d) {
  e << YAML::BeginMap;
  if (d.kind == "spin") {
    e << YAML::Key << "spin" << YAML::Value << d.axis;
  } else if (d.kind == "basis" || d.kind == "projectors") {
    e << YAML::Key << d.kind << YAML::Value;
    emit_names(e, d.parts);
    if (!d.labels.empty()) {
      e << YAML::Key << "labels" << YAML::Value;
      emit_names(e, d.labels);
    }
  } else if (d.kind == "trivial") {
    e << YAML::Key << "trivial" << YAML::Value << d.system;
  } else if (d.kind == "lift") {
    e << YAML::Key << "lift" << YAML::Value << d.ref << YAML::Key << "system" << YAML::Value << d.system;
    e << YAML::Key << "index" << YAML::Value << d.index;
  } else {
    e << YAML::Key << "refinement" << YAML::Value;
    emit_names(e, d.parts);
  }
  e << YAML::EndMap;
}

void emit_family(YAML::Emitter& e, const FamilyDecl& d) {
  e << YAML::BeginMap;
  if (d.kind == "product") {
    e << YAML::Key << "product" << YAML::Value;
    emit_names(e, d.pds);
  } else if (d.kind == "fixed-initial") {
    e << YAML::Key << "fixed-initial" << YAML::Value << d.initial << YAML::Key << "later" << YAML::Value;
    emit_names(e, d.pds);
  } else if (d.kind == "unitary") {
    e << YAML::Key << "unitary" << YAML::Value << d.initial;
    e << YAML::Key << "dynamics" << YAML::Value << d.dynamics;
  } else {
    e << YAML::Key << "system" << YAML::Value << d.system;
    e << YAML::Key << "raw" << YAML::Value << YAML::BeginSeq;
    for (const auto& h : d.histories) {
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << h.label;
      e << YAML::Key << "factors" << YAML::Value;
      emit_names(e, h.factors);
      if (h.excluded) e << YAML::Key << "excluded" << YAML::Value << true;
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
}

void emit_query(YAML::Emitter& e, const QueryDecl& q) {
  const Keys& keys = query_keys().at(q.kind);
  auto has = [&](const char* k) { return keys.count(k) > 0; };
  e << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << q.kind;
  if (!q.name.empty()) e << YAML::Key << "name" << YAML::Value << q.name;
  if (has("family")) e << YAML::Key << "family" << YAML::Value << q.family;
  if (!q.dynamics.empty()) e << YAML::Key << "dynamics" << YAML::Value << q.dynamics;
  if (has("event")) {
    e << YAML::Key << "event" << YAML::Value;
    emit_event(e, q.event);
  }
  if (has("given")) {
    e << YAML::Key << "given" << YAML::Value;
    emit_event(e, q.given);
  }
  auto list = [&](const char* key, const std::vector<std::string>& v) {
    if (!has(key)) return;
    e << YAML::Key << key << YAML::Value;
    emit_names(e, v);
  };
  list("frameworks", q.frameworks);
  if (has("pd")) e << YAML::Key << "pd" << YAML::Value << q.pd;
  if (has("system")) e << YAML::Key << "system" << YAML::Value << q.system;
  if (has("ancilla")) e << YAML::Key << "ancilla" << YAML::Value << q.ancilla;
  list("states", q.states);
  if (has("mode")) e << YAML::Key << "mode" << YAML::Value << q.mode;
  if (has("amplitudes")) {
    e << YAML::Key << "amplitudes" << YAML::Value;
    emit_complex(e, q.amplitudes);
  }
  if (q.apparatus_dim != 0) e << YAML::Key << "apparatus-dim" << YAML::Value << q.apparatus_dim;
  if (has("dims")) {
    e << YAML::Key << "dims" << YAML::Value;
    emit_sizes(e, q.dims);
  }
  if (has("initial")) e << YAML::Key << "initial" << YAML::Value << q.initial;
  list("a-steps", q.a_steps);
  list("bc-steps", q.bc_steps);
  list("a-pds", q.a_pds);
  list("c-states", q.c_states);
  if (has("draws")) e << YAML::Key << "draws" << YAML::Value << q.draws;
  if (q.seed != 0) e << YAML::Key << "seed" << YAML::Value << std::to_string(q.seed);
  list("axes", q.axes);
  e << YAML::EndMap;
}

}  // namespace

bool Scenario::operator==(const Scenario& o) const {
  return name == o.name && description == o.description && tolerances == o.tolerances && systems == o.systems &&
         states == o.states && operators == o.operators && pds == o.pds && grid == o.grid &&
         dynamics == o.dynamics && families == o.families && queries == o.queries;
}

std::string Scenario::where(const std::string& key) const {
  const auto it = lines.find(key);
  return it == lines.end() ? std::string() : "line " + std::to_string(it->second);
}

Scenario parse(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ParseError("line 1: a scenario must be a YAML mapping");
  check_keys(root, "scenario",
             {"name", "description", "tolerances", "systems", "states", "operators", "pds", "grid", "dynamics",
              "families", "queries"});
  Scenario s;
  if (root["name"]) s.name = scalar(root["name"], "name");
  if (root["description"]) s.description = scalar(root["description"], "description");
  if (const YAML::Node t = root["tolerances"]) {
    check_keys(t, "tolerances", {"alg", "norm", "consistency", "floor", "prob"});
    for (const auto& kv : t) {
      apply_tolerance(s.tolerances, kv.first.Scalar() + "=" + format_real(real(kv.second, "tolerance")));
    }
  }
  try {
    parse_section(root, "systems", s.systems, s.lines, parse_system);
    parse_section(root, "states", s.states, s.lines, parse_state);
    parse_section(root, "operators", s.operators, s.lines, parse_operator);
    parse_section(root, "pds", s.pds, s.lines, parse_pd);
    if (const YAML::Node g = root["grid"]) {
      const std::string what = "grid";
      const std::string kind = discriminator(g, what, {"times", "uniform"});
      check_keys(g, what, {kind});
      GridDecl grid;
      if (kind == "times") {
        grid.times = real_list(g["times"], "grid times");
      } else {
        const auto n = unsigned_int(g["uniform"], "grid uniform");
        for (std::uint64_t i = 0; i < n; ++i) grid.times.push_back(static_cast<double>(i));
      }
      s.lines["grid"] = line_of(g);
      s.grid = grid;
    }
    parse_section(root, "dynamics", s.dynamics, s.lines, parse_dynamics);
    parse_section(root, "families", s.families, s.lines, parse_family);
    if (const YAML::Node qs = root["queries"]) {
      if (!qs.IsSequence()) fail(qs, "queries must be a list");
      for (std::size_t i = 0; i < qs.size(); ++i) {
        s.lines["queries." + std::to_string(i + 1)] = line_of(qs[i]);
        s.queries.push_back(parse_query(i, qs[i]));
      }
    }
  } catch (const YAML::Exception& e) {
    throw ParseError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return s;
}

Scenario parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string serialize(const Scenario& s) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  if (!s.name.empty()) e << YAML::Key << "name" << YAML::Value << s.name;
  if (!s.description.empty()) e << YAML::Key << "description" << YAML::Value << s.description;
  if (s.tolerances != Tolerances{}) {
    const Tolerances def{};
    e << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
    if (s.tolerances.alg != def.alg) e << YAML::Key << "alg" << YAML::Value << format_real(s.tolerances.alg);
    if (s.tolerances.norm != def.norm) e << YAML::Key << "norm" << YAML::Value << format_real(s.tolerances.norm);
    if (s.tolerances.consistency != def.consistency)
      e << YAML::Key << "consistency" << YAML::Value << format_real(s.tolerances.consistency);
    if (s.tolerances.floor != def.floor) e << YAML::Key << "floor" << YAML::Value << format_real(s.tolerances.floor);
    if (s.tolerances.prob != def.prob) e << YAML::Key << "prob" << YAML::Value << format_real(s.tolerances.prob);
    e << YAML::EndMap;
  }
  if (!s.systems.empty()) {
    e << YAML::Key << "systems" << YAML::Value << YAML::BeginMap;
    for (const auto& d : s.systems) {
      e << YAML::Key << d.name << YAML::Value;
      if (d.dims.size() == 1) {
        e << d.dims[0];
      } else {
        emit_sizes(e, d.dims);
      }
    }
    e << YAML::EndMap;
  }
  auto section = [&](const char* key, const auto& decls, auto emit) {
    if (decls.empty()) return;
    e << YAML::Key << key << YAML::Value << YAML::BeginMap;
    for (const auto& d : decls) {
      e << YAML::Key << d.name << YAML::Value;
      emit(e, d);
    }
    e << YAML::EndMap;
  };
  section("states", s.states, emit_state);
  section("operators", s.operators, emit_operator);
  section("pds", s.pds, emit_pd);
  if (s.grid) {
    e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap << YAML::Key << "times" << YAML::Value << YAML::Flow
      << YAML::BeginSeq;
    for (double t : s.grid->times) e << format_real(t);
    e << YAML::EndSeq << YAML::EndMap;
  }
  section("dynamics", s.dynamics, [](YAML::Emitter& em, const DynamicsDecl& d) {
    em << YAML::BeginMap << YAML::Key << d.kind << YAML::Value;
    if (d.kind == "steps") {
      emit_names(em, d.steps);
    } else {
      em << d.ref;
    }
    em << YAML::EndMap;
  });
  section("families", s.families, emit_family);
  if (!s.queries.empty()) {
    e << YAML::Key << "queries" << YAML::Value << YAML::BeginSeq;
    for (const auto& q : s.queries) emit_query(e, q);
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  if (z.real() == 0.0) return format_real(z.imag()) + "i";
  const std::string im = format_real(z.imag());
  return format_real(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const std::string bad = "'" + text + "' is not a complex number";
  if (s.empty()) throw ParseError(bad);

  // Reads an optionally signed decimal number starting at pos; a bare sign
  // (or nothing) before 'i' means ±1.
  auto number = [&](std::size_t& pos, bool allow_implicit) -> double {
    std::size_t end = pos;
    if (end < s.size() && (s[end] == '+' || s[end] == '-')) ++end;
    const std::size_t digits = end;
    while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.')) ++end;
    if (end < s.size() && (s[end] == 'e' || s[end] == 'E') && end > digits) {
      ++end;
      if (end < s.size() && (s[end] == '+' || s[end] == '-')) ++end;
      while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    }
    if (end == digits) {
      if (!allow_implicit) throw ParseError(bad);
      const double v = (pos < s.size() && s[pos] == '-') ? -1.0 : 1.0;
      pos = end;
      return v;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s.substr(pos, end - pos), &used);
    } catch (const std::exception&) {
      throw ParseError(bad);
    }
    if (used != end - pos || !std::isfinite(v)) throw ParseError(bad);
    pos = end;
    return v;
  };

  std::size_t pos = 0;
  const double first = number(pos, true);
  if (pos == s.size()) {
    if (s.back() == '+' || s.back() == '-') throw ParseError(bad);
    return {first, 0.0};
  }
  if (s[pos] == 'i' && pos + 1 == s.size()) return {0.0, first};
  if (s[pos] != '+' && s[pos] != '-') throw ParseError(bad);
  if (pos == 0 || s[pos - 1] == '+' || s[pos - 1] == '-') throw ParseError(bad);
  const double second = number(pos, true);
  if (pos + 1 != s.size() || s[pos] != 'i') throw ParseError(bad);
  return {first, second};
}

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto pi_at = s.find("pi");
  std::size_t used = 0;
  try {
    if (pi_at == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used == s.size() && std::isfinite(v)) return v;
    } else {
      const std::string head = s.substr(0, pi_at), tail = s.substr(pi_at + 2);
      double k = 1.0;
      if (head == "-") {
        k = -1.0;
      } else if (!head.empty() && head != "+") {
        k = std::stod(head, &used);
        if (used != head.size()) throw ParseError("");
      }
      double den = 1.0;
      if (!tail.empty()) {
        if (tail.front() != '/') throw ParseError("");
        den = std::stod(tail.substr(1), &used);
        if (used != tail.size() - 1 || den == 0.0) throw ParseError("");
      }
      return k * std::numbers::pi / den;
    }
  } catch (const std::exception&) {
  }
  throw ParseError("'" + text + "' is not an angle");
}

void apply_tolerance(Tolerances& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("tolerance override must look like name=value");
  const std::string name = assignment.substr(0, eq), value = assignment.substr(eq + 1);
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v) || v < 0.0)
    throw ValidationError("tolerance " + name + ": '" + value + "' is not a non-negative number");
  if (name == "alg") {
    tol.alg = v;
  } else if (name == "norm") {
    tol.norm = v;
  } else if (name == "consistency") {
    tol.consistency = v;
  } else if (name == "floor") {
    tol.floor = v;
  } else if (name == "prob") {
    tol.prob = v;
  } else {
    throw ValidationError("unknown tolerance '" + name + "' (expected alg, norm, consistency, floor or prob)");
  }
}

}  // namespace chist::scenario
