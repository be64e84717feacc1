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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Tolerances and sizes are fixed by the acceptance criteria.

#include <Eigen/Eigenvalues>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "chist/demos.hpp"
#include "chist/dynamics.hpp"
#include "chist/errors.hpp"
#include "chist/models.hpp"
#include "support.hpp"

using namespace chist;
using chist::testing::Rng;
using chist::testing::random_ket;
using chist::testing::random_unitary;
using chist::testing::random_unitary_matrix;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Records failures without stopping; the first few are kept for the report.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    std::string d = summary;
    for (const auto& n : notes_) d += "; " + n;
    if (failures_ > 3) d += "; +" + std::to_string(failures_ - 3) + " more";
    return {failures_ == 0, d};
  }

 private:
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Haar columns split into `parts` groups, as raw projector matrices.
std::vector<Operator> raw_projectors(std::size_t d, std::size_t parts, Rng& rng) {
  const Matrix u = random_unitary_matrix(d, rng);
  std::vector<Matrix> ms(parts, Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t p = i < parts ? i : std::uniform_int_distribution<std::size_t>(0, parts - 1)(rng);
    const auto c = u.col(static_cast<Eigen::Index>(i));
    ms[p] += c * c.adjoint();
  }
  std::vector<Operator> out;
  for (auto& m : ms) out.push_back(Operator(0.5 * (m + m.adjoint())));
  return out;
}

template <typename E, typename Fn>
bool throws(Fn fn) {
  try {
    fn();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

// 1 -------------------------------------------------------------------------
Outcome pd_suite() {
  Rng rng(101);
  Tally t;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const std::size_t parts = std::uniform_int_distribution<std::size_t>(2, d)(rng);
    const auto ps = raw_projectors(d, parts, rng);
    // independent check of both conditions
    Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < ps.size(); ++i) {
      sum += ps[i].matrix();
      for (std::size_t j = i + 1; j < ps.size(); ++j) worst = std::max(worst, (ps[i].matrix() * ps[j].matrix()).norm());
    }
    worst = std::max(worst, (sum - Matrix::Identity(sum.rows(), sum.cols())).norm());
    t.check(!throws<Error>([&] { make_pd(ps, {}, 1e-10); }), "valid PD rejected");

    // corruptions
    auto dropped = ps;
    dropped.pop_back();
    t.check(throws<CompletenessError>([&] { make_pd(dropped, {}, 1e-10); }), "dropped projector not caught");
    auto tilted = ps;
    const Matrix u = random_unitary_matrix(d, rng);
    tilted[0] = Operator(u * ps[0].matrix() * u.adjoint());
    t.check(throws<OrthogonalityError>([&] { make_pd(tilted, {}, 1e-10); }), "overlapping projector not caught");
    auto scaled = ps;
    scaled[1] = Operator(1.01 * ps[1].matrix());
    t.check(throws<NotProjectorError>([&] { make_pd(scaled, {}, 1e-10); }), "non-projector not caught");
    auto mixed = ps;
    mixed[0] = Operator(Matrix::Identity(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d + 1)));
    t.check(throws<DimError>([&] { make_pd(mixed, {}, 1e-10); }), "dimension mismatch not caught");
  }
  t.check(worst <= 1e-10, "oracle residual " + sci(worst));
  return t.outcome("1000 PDs, worst oracle residual " + sci(worst) + ", 4 corruptions each");
}

// 2 -------------------------------------------------------------------------
Outcome two_time_consistency() {
  Rng rng(202);
  Tally t;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const TimeGrid g = TimeGrid::uniform(2);
    const PD p = chist::testing::random_pd(d, rng), q = chist::testing::random_pd(d, rng);
    const Operator u = random_unitary(d, rng);
    const auto r = decoherence_functional(product_family(g, {p, q}), Dynamics(g, {u}));
    // oracle: K = Q T P by hand
    std::vector<Matrix> ks;
    for (std::size_t j = 0; j < p.size(); ++j)
      for (std::size_t k = 0; k < q.size(); ++k) ks.push_back(q[k].matrix() * u.matrix() * p[j].matrix());
    for (std::size_t a = 0; a < ks.size(); ++a) {
      for (std::size_t b = 0; b < ks.size(); ++b) {
        const Complex oracle = (ks[a].adjoint() * ks[b]).trace();
        const Complex lib = r.decoherence(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        t.check(std::abs(oracle - lib) <= 1e-10, "library and oracle D differ");
        if (a != b) worst = std::max({worst, std::abs(lib), std::abs(oracle)});
      }
    }
    t.check(r.consistent, "two-time family flagged inconsistent");
  }
  t.check(worst <= 1e-10, "off-diagonal " + sci(worst));
  return t.outcome("200 families, max off-diagonal |D| " + sci(worst));
}

// 3 -------------------------------------------------------------------------
Outcome born_symmetry() {
  Rng rng(303);
  Tally t;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const Ket psi = random_ket(d, rng), phi = random_ket(d, rng);
    const Operator u = random_unitary(d, rng);
    const double fwd = born_weight_forward(psi, phi, u);
    const double bwd = born_weight_backward(psi, phi, u);
    // oracle: Tr([φ] T [ψ] T†)
    const Matrix& m = u.matrix();
    const double tr = (phi.amplitudes() * phi.amplitudes().adjoint() * m * psi.amplitudes() *
                       psi.amplitudes().adjoint() * m.adjoint())
                          .trace()
                          .real();
    worst = std::max({worst, std::abs(fwd - bwd), std::abs(fwd - tr)});
    // and through the family machinery with [ψ] at t_0, [φ] at t_1
    const TimeGrid g = TimeGrid::uniform(2);
    const auto pd0 = make_pd({dyad(psi), Operator(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) - dyad(psi).matrix())});
    const auto pd1 = make_pd({dyad(phi), Operator(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) - dyad(phi).matrix())});
    worst = std::max(worst, std::abs(born_weight(pd0, pd1, Dynamics(g, {u}), 0, 0) - tr));
  }
  t.check(worst <= 1e-10, "forward/backward gap " + sci(worst));
  return t.outcome("200 rank-1 cases, max gap " + sci(worst));
}

// 4 -------------------------------------------------------------------------
Outcome unitary_families() {
  Rng rng(404);
  Tally t;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const std::size_t f = 1 + trial % 4;
    const TimeGrid g = TimeGrid::uniform(f + 1);
    std::vector<Operator> steps;
    for (std::size_t m = 0; m < f; ++m) steps.push_back(random_unitary(d, rng));
    const HistoryFamily fam = unitary_family(g, random_ket(d, rng), steps);
    const auto r = decoherence_functional(fam, Dynamics(g, steps));
    t.check(r.consistent, "unitary family inconsistent");
    const std::size_t u = *fam.unitary_history();
    for (std::size_t a = 0; a < fam.size(); ++a) worst = std::max(worst, std::abs(r.weights[a] - (a == u ? 1.0 : 0.0)));
  }
  t.check(worst <= 1e-10, "weight error " + sci(worst));
  return t.outcome("100 families (f = 1..4), max weight error " + sci(worst));
}

std::vector<Ket> random_basis(std::size_t d, Rng& rng) {
  const Matrix u = random_unitary_matrix(d, rng);
  std::vector<Ket> out;
  for (std::size_t j = 0; j < d; ++j) out.emplace_back(u.col(static_cast<Eigen::Index>(j)));
  return out;
}

std::vector<Complex> random_c(std::size_t d, Rng& rng) {
  const Ket k = random_ket(d, rng);
  std::vector<Complex> c;
  for (std::size_t j = 0; j < d; ++j) c.push_back(k[j]);
  return c;
}

// 5 -------------------------------------------------------------------------
Outcome measurement_model() {
  Rng rng(505);
  Tally t;
  double worst = 0.0;
  for (std::size_t ds : {2u, 3u, 4u}) {
    for (auto mode : {MeasurementMode::destructive, MeasurementMode::von_neumann}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto m = build_measurement(random_basis(ds, rng), mode);
        const auto c = random_c(ds, rng);
        const auto a = measurement_analysis(m, c);
        t.check(a.report.consistent, "measurement family inconsistent");
        for (std::size_t j = 0; j < ds; ++j) {
          const double w = std::norm(c[j]);
          worst = std::max(worst, std::abs(a.pointer_probabilities[j] - w));
          for (std::size_t k = 0; k < ds; ++k) {
            worst = std::max(worst, std::abs(a.joint[j][k] - (j == k ? w : 0.0)));
            const auto& cond = a.conditional[j][k];
            if (std::norm(c[k]) > 1e-10) {
              t.check(cond.has_value(), "conditional missing");
              if (cond) worst = std::max(worst, std::abs(*cond - (j == k ? 1.0 : 0.0)));
            }
          }
        }
      }
    }
  }
  t.check(worst <= 1e-10, "table error " + sci(worst));
  return t.outcome("d_s = 2,3,4, both modes, max table error " + sci(worst));
}

/// `n` unit vectors in C^d whose first two have overlap `overlap`.
std::vector<Ket> overlapping(std::size_t d, std::size_t n, double overlap, Rng& rng) {
  const Matrix u = random_unitary_matrix(d, rng);
  std::vector<Ket> out;
  const double th = std::acos(overlap);
  out.emplace_back(Vector(u.col(0)));
  out.emplace_back(Vector(std::cos(th) * u.col(0) + std::sin(th) * u.col(1)));
  for (std::size_t j = 2; j < n; ++j) out.push_back(random_ket(d, rng));
  return out;
}

// 6 -------------------------------------------------------------------------
Outcome preparation_model() {
  Rng rng(606);
  Tally t;
  double worst = 0.0, largest_overlap = 0.0;
  for (std::size_t ds : {2u, 3u, 4u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto m = build_measurement(random_basis(ds, rng), MeasurementMode::von_neumann);
      const auto c = random_c(ds, rng);
      const auto p = preparation_analysis(m, c);
      for (std::size_t i = 0; i < ds; ++i) {
        for (std::size_t j = 0; j < ds; ++j) {
          worst = std::max(worst, std::abs(p.joint[i][j] - (i == j ? std::norm(c[j]) : 0.0)));
          if (p.conditional[i][j]) worst = std::max(worst, std::abs(*p.conditional[i][j] - (i == j ? 1.0 : 0.0)));
        }
      }
    }
  }
  for (double overlap : {0.1, 0.5, 0.75, 0.9}) {
    for (std::size_t d : {2u, 3u}) {
      for (std::size_t n : {2u, 3u}) {
        const auto rs = overlapping(d, n, overlap, rng);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j) largest_overlap = std::max(largest_overlap, std::abs(rs[i].inner(rs[j])));
        const auto a = contextual_preparation(rs, random_c(n, rng));
        t.check(a.report.consistent, "contextual family inconsistent");
        for (const auto& v : a.conditional) {
          t.check(v.has_value(), "contextual conditional missing");
          if (v) worst = std::max(worst, std::abs(*v - 1.0));
        }
      }
    }
  }
  t.check(largest_overlap >= 0.9 - 1e-12, "overlap 0.9 not exercised");
  t.check(worst <= 1e-10, "error " + sci(worst));
  return t.outcome("tables and contextual case (overlaps to " + sci(largest_overlap) + "), max error " + sci(worst));
}

// 7 -------------------------------------------------------------------------
Outcome povm_suite() {
  Rng rng(707);
  Tally t;
  double min_eig = 1.0, completeness = 0.0, ancilla_gap = 0.0;
  for (std::size_t ds : {2u, 3u}) {
    const CompositeSpace space{{ds, 2}};
    for (int trial = 0; trial < 100; ++trial) {
      const PD pd = chist::testing::random_pd(2 * ds, rng);
      const Ket a0 = random_ket(2, rng);
      const auto povm = povm_from_ancilla(pd, space, a0);
      Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(ds), static_cast<Eigen::Index>(ds));
      for (const auto& r : povm.elements) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(r.matrix(), Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        sum += r.matrix();
      }
      completeness = std::max(completeness, (sum - Matrix::Identity(sum.rows(), sum.cols())).norm());
      for (int k = 0; k < 20; ++k) {
        const Ket psi = random_ket(ds, rng);
        const Vector big = tensor(psi, a0).amplitudes();
        for (std::size_t j = 0; j < pd.size(); ++j) {
          const double direct = big.dot(pd[j].matrix() * big).real();
          const double reduced = (povm.elements[j].matrix() * psi.amplitudes() * psi.amplitudes().adjoint()).trace().real();
          ancilla_gap = std::max(ancilla_gap, std::abs(direct - reduced));
        }
      }
    }
  }
  t.check(min_eig >= -1e-10, "negative eigenvalue " + sci(min_eig));
  t.check(completeness <= 1e-10, "completeness " + sci(completeness));
  t.check(ancilla_gap <= 1e-10, "ancilla equivalence " + sci(ancilla_gap));
  return t.outcome("200 POVMs on 2x2 and 3x2, min eigenvalue " + sci(min_eig) + ", |sum - I| " + sci(completeness) +
                   ", ancilla gap " + sci(ancilla_gap));
}

// 8 -------------------------------------------------------------------------
Outcome inconsistency() {
  Tally t;
  const TimeGrid g = TimeGrid::uniform(3);
  const Ket xp = spin_ket(Axis::x, +1);
  const HistoryFamily fam = fixed_initial_family(g, dyad(xp), {spin_pd(Axis::z), spin_pd(Axis::x)});
  const Dynamics dyn = Dynamics::trivial(g, 2);
  const auto r = decoherence_functional(fam, dyn);
  // brute force: chain kets from |x+>
  const Matrix oracle = chist::testing::chain_ket_oracle(fam, dyn, xp);
  double oracle_max = 0.0;
  for (Eigen::Index a = 0; a < oracle.rows(); ++a)
    for (Eigen::Index b = 0; b < oracle.cols(); ++b)
      if (a != b) oracle_max = std::max(oracle_max, std::abs(oracle(a, b)));
  t.check(!r.consistent, "not flagged inconsistent");
  t.check(std::abs(oracle_max - 0.25) <= 1e-10, "oracle off-diagonal " + sci(oracle_max));
  t.check(std::abs(r.max_offdiag_residual - 0.25) <= 1e-10, "library off-diagonal " + sci(r.max_offdiag_residual));
  const HistoryEvent ev{TimeCondition{1, spin_pd(Axis::z)[0]}};
  t.check(throws<InconsistentFamilyError>([&] { probability(fam, r, ev); }), "probability not refused");
  t.check(throws<InconsistentFamilyError>([&] { conditional_probability(fam, dyn, ev, {}); }),
          "conditional not refused");
  t.check(throws<InconsistentFamilyError>([&] { sample_history(r, 1); }), "sampling not refused");
  return t.outcome("max off-diagonal " + sci(r.max_offdiag_residual) + " (oracle " + sci(oracle_max) +
                   "), probability queries refused");
}

// 9 -------------------------------------------------------------------------
Outcome locality() {
  Rng rng(909);
  Tally t;
  double prob = 0.0, resid = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t dc = 2 + trial % 2;
    const TimeGrid g = TimeGrid::uniform(3);
    const auto exp = make_locality_experiment(
        2, 2, dc, singlet(), g, {random_unitary(2, rng), random_unitary(2, rng)},
        {random_unitary(2 * dc, rng), random_unitary(2 * dc, rng)},
        {chist::testing::random_pd(2, 2, rng), chist::testing::random_pd(2, 2, rng)});
    std::vector<Ket> cs;
    for (int i = 0; i < 10; ++i) cs.push_back(random_ket(dc, rng));
    const auto r = einstein_locality_check(exp, cs);
    t.check(r.passed, "sweep failed");
    t.check(r.verdicts_agree, "consistency verdict changed with C");
    prob = std::max(prob, r.max_probability_deviation);
    resid = std::max(resid, r.max_residual_deviation);
  }
  t.check(prob <= 1e-10 && resid <= 1e-10, "deviation");
  return t.outcome("5 dynamics x 10 C-states, max deviations " + sci(prob) + " / " + sci(resid));
}

// 10 ------------------------------------------------------------------------
Outcome singlet_tables() {
  Tally t;
  double worst = 0.0;
  const std::array<Axis, 3> axes{Axis::x, Axis::y, Axis::z};
  for (Axis a : axes) {
    for (Axis b : axes) {
      const auto tab = singlet_correlation(a, b);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const double want = a == b ? (i != j ? 1.0 : 0.0) : 0.5;
          worst = std::max(worst, std::abs(tab.conditional[i][j] - want));
        }
      }
    }
  }
  t.check(worst <= 1e-12, "error " + sci(worst));
  return t.outcome("9 axis pairs, max conditional error " + sci(worst));
}

// 11 ------------------------------------------------------------------------
/// Spin tossed by R_y(θ) three times; before each toss after the first, its z
/// value is copied into a fresh record qubit so the z histories decohere.
struct TossSetup {
  HistoryFamily family;
  Dynamics dynamics;
};

TossSetup three_toss(double theta) {
  const CompositeSpace world{{2, 2, 2}};
  const TimeGrid g = TimeGrid::uniform(4);
  const Operator r = chist::testing::rotation(Axis::y, theta);
  const Operator i2 = Operator::identity(2);
  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  const auto [up, down] = spin_projectors(Axis::z);
  const Operator toss = tensor(std::vector<Operator>{r, i2, i2});
  const Operator copy1 = tensor(std::vector<Operator>{up, i2, i2}) + tensor(std::vector<Operator>{down, Operator(flip), i2});
  const Operator copy2 = tensor(std::vector<Operator>{up, i2, i2}) + tensor(std::vector<Operator>{down, i2, Operator(flip)});
  const Dynamics dyn(g, {toss, toss * copy1, toss * copy2});
  const Ket start = tensor(std::vector<Ket>{spin_ket(Axis::z, +1), Ket::basis(2, 0), Ket::basis(2, 0)});
  const PD z = lift(spin_pd(Axis::z), world, 0);
  return {fixed_initial_family(g, dyad(start), {z, z, z}), dyn};
}

Outcome sampling() {
  Tally t;
  std::string summary;
  for (double theta : {std::numbers::pi / 2, std::numbers::pi / 3}) {
    const auto [fam, dyn] = three_toss(theta);
    const auto r = decoherence_functional(fam, dyn);
    t.check(r.consistent, "three-toss family inconsistent");
    // oracle: product of single-toss Born weights along the path
    const double stay = std::pow(std::cos(theta / 2), 2), move = std::pow(std::sin(theta / 2), 2);
    double weight_err = 0.0;
    for (std::size_t a = 0; a < fam.size(); ++a) {
      if (fam[a].excluded) continue;
      const std::string& label = fam[a].label;  // "initial,z+,z-,z+"
      double w = 1.0;
      char prev = '+';
      for (std::size_t k = 0; k < 3; ++k) {
        const char s = label[8 + 3 * k + 1];
        w *= s == prev ? stay : move;
        prev = s;
      }
      weight_err = std::max(weight_err, std::abs(r.weights[a] - w));
    }
    t.check(weight_err <= 1e-10, "weights differ from the oracle by " + sci(weight_err));

    const std::size_t n = 100000;
    const auto counts = sample_counts(r, n, 20260418);
    const auto p = r.probabilities();
    double worst_sigma = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
      const double mean = static_cast<double>(n) * p[a];
      const double sd = std::sqrt(static_cast<double>(n) * p[a] * (1 - p[a]));
      const double dev = std::abs(static_cast<double>(counts[a]) - mean);
      if (sd > 0) {
        worst_sigma = std::max(worst_sigma, dev / sd);
      } else {
        t.check(counts[a] == 0, "zero-probability history drawn");
      }
    }
    t.check(worst_sigma <= 3.0, "frequency off by " + sci(worst_sigma) + " sigma");
    summary += (summary.empty() ? "" : ", ") + std::string("theta=") + (theta > 1.2 ? "pi/2" : "pi/3") +
               " worst " + sci(worst_sigma) + " sigma";
  }
  return t.outcome("10^5 draws, " + summary);
}

// 12 ------------------------------------------------------------------------
std::pair<int, std::string> capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, out};
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome golden(const std::string& cli) {
  Tally t;
  std::size_t bytes = 0;
  for (const auto& d : demos::all()) {
    const std::string cmd = "'" + cli + "' demo " + std::string(d.name) + " --machine --seed 424242 2>/dev/null";
    const auto first = capture(cmd), second = capture(cmd);
    const int expected = d.name == "inconsistent-triple" ? 1 : 0;
    t.check(first.first == expected && second.first == expected,
            std::string(d.name) + " exited " + std::to_string(first.first));
    t.check(!first.second.empty(), std::string(d.name) + " printed nothing");
    t.check(first.second == second.second, std::string(d.name) + " output differs between runs");
    bytes += first.second.size();
  }
  return t.outcome("10 demos run twice, " + std::to_string(bytes) + " bytes compared");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    const char* name;
    double limit_s;  // 0 = no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"projective decompositions", 5.0, pd_suite},
      {"two-time auto-consistency", 10.0, two_time_consistency},
      {"Born symmetry and backward evolution", 0.0, born_symmetry},
      {"unitary family", 0.0, unitary_families},
      {"measurement model", 0.0, measurement_model},
      {"preparation model", 0.0, preparation_model},
      {"POVM from ancilla", 0.0, povm_suite},
      {"inconsistency detection", 0.0, inconsistency},
      {"Einstein locality", 10.0, locality},
      {"singlet correlations", 0.0, singlet_tables},
      {"sampling", 0.0, sampling},
      {"CLI golden suite", 0.0, [&] {
         if (cli.empty()) return Outcome{false, "no CLI path given"};
         return golden(cli);
       }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += "; took " + sci(secs) + " s, limit " + sci(c.limit_s) + " s";
    }
    if (!o.pass) ++failed;
    char head[96];
    std::snprintf(head, sizeof head, "criterion %2zu %-4s %-38s", i + 1, o.pass ? "PASS" : "FAIL", c.name);
    std::cout << head << " (" << sci(secs) << " s) " << o.detail << "\n";
  }
  std::cout << (failed == 0 ? "all 12 criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
