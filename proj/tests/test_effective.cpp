// Copyright 2026 The catqudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catqudit/effective.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "catqudit/model.hpp"
#include "catqudit/units.hpp"
#include "oracles/oracles.hpp"

namespace catqudit {
namespace {

const SpaceSpec kSpace{4, 6};
const oracle::Space kOracle{4, 6};

double rel(const DenseMatrix& a, const DenseMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

TEST(Commutator, StarkPairForCavityOneOnFg) {
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, kSpace);
  const OperatorMatrix hd = a1.adjoint() * transition(Level::f, Level::g, kSpace);
  const DenseMatrix got = commutator(hd, hd.adjoint()).dense();
  const DenseMatrix A = kOracle.a1();
  const DenseMatrix expected = A.adjoint() * A * kOracle.s(0, 0) -
                               A * A.adjoint() * kOracle.s(2, 2);
  EXPECT_LT((got - expected).norm(), 1e-13);
}

TEST(Commutator, TwoPhotonPair) {
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, kSpace);
  const OperatorMatrix a2 = cavity_lowering(Slot::kCavity2, kSpace);
  const OperatorMatrix hd = a1.adjoint() * a2 * transition(Level::e, Level::g, kSpace);
  const DenseMatrix got = commutator(hd, hd.adjoint()).dense();
  const DenseMatrix A = kOracle.a1(), B = kOracle.a2();
  const DenseMatrix expected = A.adjoint() * A * B * B.adjoint() * kOracle.s(0, 0) -
                               A * A.adjoint() * B.adjoint() * B * kOracle.s(1, 1);
  EXPECT_LT((got - expected).norm(), 1e-12);
}

TEST(Commutator, SelfCommutatorVanishes) {
  const OperatorMatrix a = cavity_lowering(Slot::kCavity2, kSpace);
  EXPECT_TRUE(commutator(a, a).is_zero());
}

TEST(TimeAverage, SingleTermGivesScaledCommutator) {
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, kSpace);
  const OperatorMatrix hd = a1.adjoint() * transition(Level::f, Level::g, kSpace);
  HamiltonianSpec spec{kSpace, {}, {{2.0, 50.0, hd.adjoint(), "x"}}};
  const EffectiveSpec eff = time_average(spec);
  EXPECT_TRUE(eff.oscillating_terms.empty());
  const DenseMatrix expected = (4.0 / 50.0) * commutator(hd, hd.adjoint()).dense();
  EXPECT_LT((eff.static_part().dense() - expected).norm(), 1e-13);
}

TEST(TimeAverage, KeepsStaticTermsAndFoldsEqualFrequencies) {
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, kSpace);
  const OperatorMatrix a2 = cavity_lowering(Slot::kCavity2, kSpace);
  const OperatorMatrix n1 = a1.adjoint() * a1;
  HamiltonianSpec spec{kSpace,
                       {{0.3, n1, "n1"}},
                       {{1.0, 10.0, a1, "a1+"}, {2.0, 10.0, a2, "a2+"}}};
  const EffectiveSpec eff = time_average(spec);
  EXPECT_TRUE(eff.oscillating_terms.empty());
  // Cross pairs vanish since [a1+, a2] = 0; the truncated ladders break
  // [a, a+] = 1 on the top level, so compare against exact commutators.
  const DenseMatrix exact = 0.3 * n1.dense() + 0.1 * commutator(a1.adjoint(), a1).dense() +
                            0.4 * commutator(a2.adjoint(), a2).dense();
  EXPECT_LT((eff.static_part().dense() - exact).norm(), 1e-13);
}

// Random draws around the two-mode parameter scale: the engine reproduces the
// averaged Hamiltonian and, averaged again, the dispersive one.
TEST(TimeAverage, ReproducesAveragedAndDispersiveForms) {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> coupling(150.0, 300.0), det(1.5, 4.0),
      gap(0.5, 1.5);
  for (int draw = 0; draw < 20; ++draw) {
    SystemParams p = table1_params();
    p.g1 = mhz(coupling(rng));
    p.g2 = mhz(coupling(rng));
    const double d2 = ghz(det(rng));
    const double d1 = d2 + ghz(gap(rng));
    p.omega_c1 = p.omega_fg + d1;
    p.omega_c2 = p.omega_fe + d2;
    const DerivedParams r = derived_params(p);

    const EffectiveSpec first = time_average(build_step1(p, kSpace, Terms::kIdeal));
    const oracle::Averaged avg = oracle::averaged_step1(kOracle, r.lambda1, r.lambda2, r.lambda);
    EXPECT_LT(rel(first.static_part().dense(), avg.stat), 1e-10);
    ASSERT_EQ(first.oscillating_terms.size(), 2u);
    for (const auto& term : first.oscillating_terms) {
      const DenseMatrix m = (term.coefficient * term.op).dense();
      if (term.beat > 0) {
        EXPECT_NEAR(term.beat, r.delta, 1e-6 * r.delta);
        EXPECT_LT(rel(m, avg.raising), 1e-10);
      } else {
        EXPECT_NEAR(term.beat, -r.delta, 1e-6 * r.delta);
        EXPECT_LT(rel(m, avg.raising.adjoint()), 1e-10);
      }
    }

    const EffectiveSpec second = time_average(to_hamiltonian_spec(first));
    EXPECT_TRUE(second.oscillating_terms.empty());
    const DenseMatrix disp = oracle::dispersive_step1(kOracle, r.lambda1, r.lambda2, r.chi);
    EXPECT_LT(rel(second.static_part().dense(), disp), 1e-10);
    EXPECT_LT(rel(build_effective(1, p, kSpace).full.static_part().dense(), disp), 1e-10);
  }
}

TEST(TimeAverage, ValidityReportListsRatiosAndBeats) {
  const SystemParams p = table1_params();
  const EffectiveSpec eff = time_average(build_step1(p, kSpace, Terms::kIdeal));
  ASSERT_EQ(eff.validity.coupling_ratios.size(), 2u);
  EXPECT_NEAR(eff.validity.coupling_ratios[0].ratio, 236.0 / 3000.0, 1e-9);
  ASSERT_EQ(eff.validity.pair_beats.size(), 1u);
  EXPECT_NEAR(std::abs(eff.validity.pair_beats[0].beat), ghz(1.0), 1.0);
  EXPECT_GT(eff.validity.max_ratio, 0.1);
}

TEST(Realize, StaticSpecIsTimeIndependent) {
  const SystemParams p = table1_params();
  const EffectiveSpec eff = build_effective(1, p, kSpace).full;
  EXPECT_LT(frobenius_distance(realize(eff, 0.0), realize(eff, 1.234e-7)), 1e-20);
}

TEST(Realize, IdealStepOneAtTimeZero) {
  const SystemParams p = table1_params();
  const DenseMatrix A = kOracle.a1(), B = kOracle.a2();
  const DenseMatrix x1 = A.adjoint() * kOracle.s(0, 2);
  const DenseMatrix x2 = B.adjoint() * kOracle.s(1, 2);
  const DenseMatrix expected = p.g1 * (x1 + x1.adjoint()) + p.g2 * (x2 + x2.adjoint());
  EXPECT_LT(rel(realize(build_step1(p, kSpace, Terms::kIdeal), 0.0).dense(), expected),
            1e-14);
}

TEST(Realize, HermitianAtRandomTimes) {
  const SystemParams p = table1_params();
  const HamiltonianSpec full = build_step1(p, kSpace, Terms::kFull);
  const EffectiveSpec avg = time_average(build_step1(p, kSpace, Terms::kIdeal));
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> t(0.0, 1e-6);
  for (int k = 0; k < 10; ++k) {
    const double s = t(rng);
    const OperatorMatrix h = realize(full, s);
    EXPECT_LT((h - h.adjoint()).frobenius_norm(), 1e-12 * h.frobenius_norm());
    const OperatorMatrix e = realize(avg, s);
    EXPECT_LT((e - e.adjoint()).frobenius_norm(), 1e-12 * e.frobenius_norm());
  }
}

TEST(ToHamiltonianSpec, RejectsUnpairedTerms) {
  EffectiveSpec eff;
  eff.space = kSpace;
  eff.oscillating_terms.push_back(
      {Complex(1.0), cavity_lowering(Slot::kCavity1, kSpace), 5.0, "a1"});
  EXPECT_THROW(to_hamiltonian_spec(eff), std::invalid_argument);
}

TEST(Describe, ListsEveryTerm) {
  const SystemParams p = table1_params();
  const EffectiveSpec avg = time_average(build_step1(p, kSpace, Terms::kIdeal));
  const std::string text = describe(avg);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'),
            static_cast<long>(1 + avg.static_terms.size() + avg.oscillating_terms.size()));
  const std::string full = describe(build_step1(p, kSpace, Terms::kFull));
  EXPECT_EQ(std::count(full.begin(), full.end(), '\n'), 1 + 7);
  EXPECT_NE(full.find("harmonic "), std::string::npos);
}

TEST(HamiltonianSpec, ValidateRejectsNonPositiveFrequency) {
  HamiltonianSpec spec{kSpace, {}, {{1.0, 0.0, cavity_lowering(Slot::kCavity1, kSpace), "a"}}};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  EXPECT_THROW(time_average(spec), std::invalid_argument);
}

}  // namespace
}  // namespace catqudit
