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

#include <cmath>
#include <vector>

#include "chist/errors.hpp"
#include "chist/models.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chist;
using chist::testing::Rng;

namespace {

bool close(const Vector& a, const Vector& b, double tol = 1e-12) { return (a - b).norm() <= tol; }

std::vector<Ket> standard_basis(std::size_t d) {
  std::vector<Ket> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(Ket::basis(d, i));
  return out;
}

std::vector<Complex> random_amplitudes(std::size_t d, Rng& rng) {
  const Ket k = chist::testing::random_ket(d, rng);
  std::vector<Complex> c;
  for (std::size_t i = 0; i < d; ++i) c.push_back(k[i]);
  return c;
}

Vector product(const Ket& a, const Ket& b) { return tensor(a, b).amplitudes(); }

}  // namespace

TEST_CASE("unitary completion") {
  Rng rng(1);
  const Ket in = chist::testing::random_ket(4, rng), out = chist::testing::random_ket(4, rng);
  const Operator u = complete_unitary({in}, {out});
  CHECK(u.is_unitary());
  CHECK(close(u.apply(in).amplitudes(), out.amplitudes()));
  // deterministic
  CHECK((complete_unitary({in}, {out}).matrix() - u.matrix()).norm() == 0.0);
  CHECK_THROWS(complete_unitary({in, in}, {out, Ket::basis(4, 0)}));
}

TEST_CASE("destructive measurement follows the two-step map ket by ket") {
  for (std::size_t ds : {2u, 3u}) {
    Rng rng(ds);
    const auto basis = chist::testing::random_basis_pd(ds, rng);  // warm the generator
    (void)basis;
    const Matrix u = chist::testing::random_unitary_matrix(ds, rng);
    std::vector<Ket> s;
    for (std::size_t j = 0; j < ds; ++j) s.emplace_back(u.col(static_cast<Eigen::Index>(j)));
    const MeasurementModel m = build_measurement(s, MeasurementMode::destructive);
    CHECK(m.prepare.is_unitary());
    CHECK(m.interact.is_unitary());
    for (std::size_t j = 0; j < ds; ++j) {
      const Ket start = tensor(s[j], m.ready0);
      const Ket mid = m.prepare.apply(start);
      CHECK(close(mid.amplitudes(), product(s[j], m.ready1)));
      CHECK(close(m.interact.apply(mid).amplitudes(), product(s[0], m.pointers[j])));
      // P^j |M^j> = |M^j>
      const auto k = m.pointer_pd.find("M" + std::to_string(j + 1));
      CHECK(close(m.pointer_pd[k].apply(m.pointers[j]).amplitudes(), m.pointers[j].amplitudes()));
    }
  }
}

TEST_CASE("von Neumann measurement keeps the particle state") {
  const auto s = standard_basis(2);
  const MeasurementModel m = build_measurement(s, MeasurementMode::von_neumann);
  for (std::size_t j = 0; j < 2; ++j) {
    const Ket mid = m.prepare.apply(tensor(s[j], m.ready0));
    CHECK(close(mid.amplitudes(), product(s[j], m.ready1)));
    CHECK(close(m.interact.apply(mid).amplitudes(), product(s[j], m.pointers[j])));
  }
}

TEST_CASE("superposed input ends as s^1 times a pointer superposition") {
  Rng rng(3);
  const auto s = standard_basis(3);
  const MeasurementModel m = build_measurement(s, MeasurementMode::destructive);
  const auto c = random_amplitudes(3, rng);
  Vector psi0 = Vector::Zero(3);
  Vector pointer = Vector::Zero(static_cast<Eigen::Index>(m.apparatus_dim()));
  for (std::size_t j = 0; j < 3; ++j) {
    psi0 += c[j] * s[j].amplitudes();
    pointer += c[j] * m.pointers[j].amplitudes();
  }
  const Ket start = tensor(Ket(psi0), m.ready0);
  const Ket end = m.interact.apply(m.prepare.apply(start));
  CHECK(close(end.amplitudes(), product(s[0], Ket(pointer))));
}

TEST_CASE("build_measurement errors") {
  CHECK_THROWS_AS(build_measurement(standard_basis(2), MeasurementMode::destructive, 3), DimError);
  CHECK_NOTHROW(build_measurement(standard_basis(2), MeasurementMode::destructive, 5));
  CHECK_THROWS_AS(build_measurement({Ket::basis(2, 0), Ket::basis(2, 0)}, MeasurementMode::destructive),
                  NormalizationError);
}

TEST_CASE("measurement analysis") {
  const auto s = standard_basis(2);
  for (auto mode : {MeasurementMode::destructive, MeasurementMode::von_neumann}) {
    const MeasurementModel m = build_measurement(s, mode);
    SUBCASE("definite input") {
      const auto a = measurement_analysis(m, {1.0, 0.0});
      CHECK(a.pointer_probabilities[0] == doctest::Approx(1.0));
      CHECK(a.pointer_probabilities[1] == doctest::Approx(0.0));
      CHECK(*a.conditional[0][0] == doctest::Approx(1.0));
      CHECK_FALSE(a.conditional[0][1].has_value());
    }
    SUBCASE("equal superposition") {
      const double h = 1 / std::sqrt(2.0);
      const auto a = measurement_analysis(m, {h, h});
      CHECK(a.report.consistent);
      CHECK(a.pointer_probabilities[0] == doctest::Approx(0.5));
      CHECK(a.pointer_probabilities[1] == doctest::Approx(0.5));
      CHECK(a.rest_probability == doctest::Approx(0.0));
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) CHECK(*a.conditional[j][k] == doctest::Approx(j == k ? 1.0 : 0.0));
    }
    CHECK_THROWS_AS(measurement_analysis(m, {1.0, 1.0}), NormalizationError);
  }
}

TEST_CASE("property: measurement joint table is diagonal |c_j|^2") {
  Rng rng(31);
  const auto s = standard_basis(3);
  const MeasurementModel m = build_measurement(s, MeasurementMode::destructive);
  const TimeGrid g = m.grid();
  const Dynamics dyn = m.dynamics();
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_amplitudes(3, rng);
    const auto a = measurement_analysis(m, c);
    CHECK(a.report.consistent);
    // Oracle: chain kets on [Ψ_0] ⊙ {[s^j] ⊗ I} ⊙ {I ⊗ [M^k]} built by hand.
    Vector psi0 = Vector::Zero(3);
    for (std::size_t j = 0; j < 3; ++j) psi0 += c[j] * s[j].amplitudes();
    const Vector start = product(Ket(psi0), m.ready0);
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        Vector v = dyn.step(0).matrix() * start;
        v = (embed(dyad(s[j]), m.space, 0).matrix() * v).eval();
        v = (dyn.step(1).matrix() * v).eval();
        v = (embed(dyad(m.pointers[k]), m.space, 1).matrix() * v).eval();
        CHECK(std::abs(a.joint[j][k] - v.squaredNorm()) < 1e-10);
        CHECK(std::abs(a.joint[j][k] - (j == k ? std::norm(c[j]) : 0.0)) < 1e-10);
      }
    }
  }
  (void)g;
}

TEST_CASE("preparation analysis") {
  const auto s = standard_basis(2);
  const MeasurementModel vn = build_measurement(s, MeasurementMode::von_neumann);
  SUBCASE("c = (0, 1)") {
    const auto p = preparation_analysis(vn, {0.0, 1.0});
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(p.joint[i][j] == doctest::Approx(i == 1 && j == 1 ? 1.0 : 0.0));
  }
  SUBCASE("uniform") {
    const double h = 1 / std::sqrt(2.0);
    const auto p = preparation_analysis(vn, {h, h});
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(p.joint[i][j] == doctest::Approx(i == j ? 0.5 : 0.0));
        CHECK(*p.conditional[i][j] == doctest::Approx(i == j ? 1.0 : 0.0));
      }
    }
  }
  CHECK_THROWS_AS(preparation_analysis(build_measurement(s, MeasurementMode::destructive), {1.0, 0.0}), ModelError);
}

TEST_CASE("contextual preparation with non-orthogonal states") {
  for (double overlap : {0.0, 0.3, 0.6, 0.9}) {
    const double t = std::acos(overlap);
    const Ket r1 = Ket::basis(2, 0);
    const Ket r2({Complex(std::cos(t)), Complex(std::sin(t))});
    const double h = 1 / std::sqrt(2.0);
    const auto a = contextual_preparation({r1, r2}, {h, h});
    CHECK(a.report.consistent);
    // Oracle: project the evolved state directly.
    const std::vector<Ket> rs{r1, r2};
    for (std::size_t j = 0; j < 2; ++j) {
      const Operator pj = embed(dyad(Ket::basis(4, 2 + j)), a.space, 1);
      const Vector on_pointer = pj.matrix() * a.final_state.amplitudes();
      const Vector on_both = tensor(dyad(rs[j]), dyad(Ket::basis(4, 2 + j))).matrix() * a.final_state.amplitudes();
      CHECK(a.pointer_probabilities[j] == doctest::Approx(on_pointer.squaredNorm()));
      CHECK(*a.conditional[j] == doctest::Approx(on_both.squaredNorm() / on_pointer.squaredNorm()));
      CHECK(*a.conditional[j] == doctest::Approx(1.0));
    }
    CHECK(std::abs(r1.inner(r2)) == doctest::Approx(overlap));
  }
}

TEST_CASE("POVM from an ancilla") {
  Rng rng(41);
  const CompositeSpace space{{2, 2}};
  SUBCASE("product PD gives back the system PD") {
    const PD q = spin_pd(Axis::x);
    const PD lifted = lift(q, space, 0);
    const auto povm = povm_from_ancilla(lifted, space, chist::testing::random_ket(2, rng));
    for (std::size_t j = 0; j < 2; ++j) CHECK((povm.elements[j].matrix() - q[j].matrix()).norm() < 1e-12);
  }
  SUBCASE("random PDs satisfy the axioms and reproduce ancilla probabilities") {
    for (int trial = 0; trial < 10; ++trial) {
      const PD pd = chist::testing::random_pd(4, rng);
      const Ket a0 = chist::testing::random_ket(2, rng);
      const auto povm = povm_from_ancilla(pd, space, a0);
      Matrix sum = Matrix::Zero(2, 2);
      for (const auto& r : povm.elements) {
        sum += r.matrix();
        Eigen::SelfAdjointEigenSolver<Matrix> es(r.matrix());
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
      }
      CHECK((sum - Matrix::Identity(2, 2)).norm() < 1e-10);
      for (int k = 0; k < 20; ++k) {
        const Ket psi = chist::testing::random_ket(2, rng);
        const Vector big = product(psi, a0);
        for (std::size_t j = 0; j < pd.size(); ++j) {
          const double direct = big.dot(pd[j].matrix() * big).real();
          CHECK(std::abs(povm_probability(povm, j, psi) - direct) < 1e-10);
        }
      }
    }
  }
  CHECK_THROWS_AS(povm_from_ancilla(trivial_pd(4), space, Ket(Vector::Zero(2))), NormalizationError);
}

TEST_CASE("make_povm validates") {
  Matrix half = 0.5 * Matrix::Identity(2, 2);
  CHECK_NOTHROW(make_povm({Operator(half), Operator(half)}));
  CHECK_THROWS_AS(make_povm({Operator(half)}), CompletenessError);
  Matrix neg(2, 2);
  neg << 1.5, 0, 0, 1;
  Matrix comp(2, 2);
  comp << -0.5, 0, 0, 0;
  CHECK_THROWS_AS(make_povm({Operator(neg), Operator(comp)}), FlavorError);
}

TEST_CASE("factorize") {
  Rng rng(51);
  const Operator a = chist::testing::random_unitary(2, rng), b = chist::testing::random_unitary(3, rng);
  const auto f = factorize(tensor(a, b), 2, 3);
  CHECK((tensor(f.a, f.rest).matrix() - tensor(a, b).matrix()).norm() < 1e-10);
  CHECK(f.a.is_unitary());
  CHECK(f.rest.is_unitary());
  CHECK_THROWS_AS(factorize(chist::testing::random_unitary(6, rng), 2, 3), FactorizationError);
}

TEST_CASE("Einstein locality") {
  Rng rng(61);
  const TimeGrid g = TimeGrid::uniform(3);
  const std::vector<PD> a_pds{spin_pd(Axis::z), spin_pd(Axis::x)};
  std::vector<Ket> cs;
  for (int i = 0; i < 10; ++i) cs.push_back(chist::testing::random_ket(2, rng));

  SUBCASE("trivial BC dynamics") {
    const auto exp = make_locality_experiment(2, 2, 2, singlet(), g, {Operator::identity(2), Operator::identity(2)},
                                              {Operator::identity(4), Operator::identity(4)}, a_pds);
    const auto r = einstein_locality_check(exp, cs);
    CHECK(r.passed);
    CHECK(r.max_probability_deviation == 0.0);
    CHECK(r.max_residual_deviation <= 1e-14);  // C amplitudes enter the traces; rounding only
  }
  SUBCASE("entangling BC dynamics") {
    const auto exp = make_locality_experiment(
        2, 2, 2, singlet(), g, {chist::testing::random_unitary(2, rng), chist::testing::random_unitary(2, rng)},
        {chist::testing::random_unitary(4, rng), chist::testing::random_unitary(4, rng)}, a_pds);
    const auto r = einstein_locality_check(exp, cs);
    CHECK(r.passed);
    CHECK(r.verdicts_agree);
    CHECK(r.max_probability_deviation <= 1e-10);
    CHECK(r.max_residual_deviation <= 1e-10);
  }
  SUBCASE("non-factorized dynamics") {
    LocalityExperiment exp = make_locality_experiment(2, 2, 2, singlet(), g,
                                                      {Operator::identity(2), Operator::identity(2)},
                                                      {Operator::identity(4), Operator::identity(4)}, a_pds);
    exp.steps[1] = chist::testing::random_unitary(8, rng);
    CHECK_THROWS_AS(einstein_locality_check(exp, cs), FactorizationError);
  }
}

TEST_CASE("singlet correlations") {
  const auto xx = singlet_correlation(Axis::x, Axis::x);
  CHECK(xx.conditional[0][1] == doctest::Approx(1.0));
  CHECK(xx.conditional[1][0] == doctest::Approx(1.0));
  for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
    const auto t = singlet_correlation(ax, ax);
    CHECK(t.conditional[0][0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.conditional[0][1] == doctest::Approx(1.0));
  }
  // Born oracle on the 4-dim singlet.
  const auto zx = singlet_correlation(Axis::z, Axis::x);
  const Ket s = singlet();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Ket a = spin_ket(Axis::z, i == 0 ? +1 : -1), b = spin_ket(Axis::x, j == 0 ? +1 : -1);
      const double born = std::norm(tensor(a, b).inner(s));
      CHECK(zx.joint[i][j] == doctest::Approx(born));
      CHECK(zx.conditional[i][j] == doctest::Approx(0.5));
    }
  }
}
