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

#include "catqudit/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "catqudit/cat_algebra.hpp"
#include "catqudit/units.hpp"
#include "oracles/oracles.hpp"

namespace catqudit {
namespace {

const SpaceSpec kSmall{4, 3};

// Fine enough for 1e-9 agreement with the eigenbasis oracle; the default
// resolution targets ~1e-6 per period.
IntegratorConfig precise() {
  IntegratorConfig cfg;
  cfg.steps_per_fastest_period = 1000;
  return cfg;
}

TimeDependentHamiltonian static_hamiltonian(const OperatorMatrix& h) {
  HamiltonianSpec spec{h.space(), {{1.0, h, "h"}}, {}};
  return TimeDependentHamiltonian::from(spec);
}

TEST(Master, CavityDecayIsExponential) {
  const double kappa = 1.0 / 10e-6;
  const StateVector psi = product_state(Level::g, fock_vector(1, 4), fock_vector(0, 3), kSmall);
  IntegratorConfig cfg;
  cfg.samples = 5;
  const auto c_ops = collapse_ops(NoiseParams::from_times(10e-6, 0.0), kSmall);
  const EvolutionResult r = evolve_master(DensityMatrix::from_pure(psi),
                                          TimeDependentHamiltonian(kSmall), c_ops, 0.0,
                                          5e-6, cfg);
  ASSERT_TRUE(r.rho.has_value());
  ASSERT_EQ(r.trajectory.size(), 5u);
  for (const Sample& s : r.trajectory) {
    EXPECT_NEAR(s.cav1_n, std::exp(-kappa * s.t), 1e-9) << s.t;
    EXPECT_NEAR(s.trace, 1.0, 1e-12);
  }
  EXPECT_NEAR(r.rho->entries(kSmall.index(0, 0, 0), kSmall.index(0, 0, 0)).real(),
              1.0 - std::exp(-0.5), 1e-9);
  EXPECT_GE(r.diagnostics.min_eigenvalue, -1e-12);
  EXPECT_FALSE(r.diagnostics.flagged);
}

TEST(Master, QutritRelaxationRate) {
  const NoiseParams noise = NoiseParams::from_times(0.0, 5e-6);
  const StateVector psi = product_state(Level::e, fock_vector(0, 4), fock_vector(0, 3), kSmall);
  IntegratorConfig cfg;
  const EvolutionResult r =
      evolve_master(DensityMatrix::from_pure(psi), TimeDependentHamiltonian(kSmall),
                    collapse_ops(noise, kSmall), 0.0, 20e-6, cfg);
  const int e = kSmall.index(1, 0, 0);
  EXPECT_NEAR(r.rho->entries(e, e).real(), std::exp(-noise.gamma_eg() * 20e-6), 1e-9);
}

TEST(Master, PurityConservedWithoutDissipation) {
  const SpaceSpec sp{3, 3};
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, sp);
  const OperatorMatrix x = a1.adjoint() * transition(Level::f, Level::g, sp);
  const OperatorMatrix h = mhz(5.0) * (x + x.adjoint()) + mhz(1.0) * (a1.adjoint() * a1);
  DenseVector c1(3);
  c1 << 0.6, Complex(0.0, 0.8), 0.0;
  const StateVector psi = product_state(Level::f, c1, fock_vector(1, 3), sp);
  IntegratorConfig cfg = precise();
  const EvolutionResult r =
      evolve_master(DensityMatrix::from_pure(psi), static_hamiltonian(h), {}, 0.0, 0.3e-6, cfg);
  const DenseMatrix& rho = r.rho->entries;
  EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-9);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_LT(r.diagnostics.max_hermiticity_defect, 1e-12);
  // Same evolution on the state vector, and against the eigenbasis oracle.
  const EvolutionResult u = evolve_unitary(psi, static_hamiltonian(h), 0.0, 0.3e-6, cfg);
  const DenseVector exact = oracle::evolve(h.dense(), psi.amplitudes, 0.3e-6);
  EXPECT_LT((u.psi->amplitudes - exact).norm(), 1e-9);
  EXPECT_LT((rho - exact * exact.adjoint()).norm(), 1e-8);
}

TEST(Unitary, EigenstateOnlyPicksUpPhase) {
  const OperatorMatrix a2 = cavity_lowering(Slot::kCavity2, kSmall);
  const double w = mhz(30.0);
  const StateVector psi = product_state(Level::g, fock_vector(0, 4), fock_vector(2, 3), kSmall);
  IntegratorConfig cfg;
  const double t = 0.123e-6;
  const EvolutionResult r = evolve_unitary(psi, static_hamiltonian(w * (a2.adjoint() * a2)),
                                           0.0, t, cfg);
  const Complex amp = r.psi->amplitudes(kSmall.index(0, 0, 2));
  EXPECT_NEAR(std::abs(amp), 1.0, 1e-12);
  EXPECT_NEAR(std::arg(amp * std::polar(1.0, 2.0 * w * t)), 0.0, 1e-9);
  EXPECT_NEAR(fidelity(*r.psi, psi), 1.0, 1e-12);
}

TEST(Unitary, RabiTransferAtQuarterPeriod) {
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, kSmall);
  const OperatorMatrix x = a1.adjoint() * transition(Level::f, Level::g, kSmall);
  const double g = mhz(20.0);
  const StateVector psi = product_state(Level::f, fock_vector(0, 4), fock_vector(0, 3), kSmall);
  IntegratorConfig cfg = precise();
  cfg.samples = 3;
  const double t = kPi / (2.0 * g);
  const EvolutionResult r = evolve_unitary(psi, static_hamiltonian(g * (x + x.adjoint())), 0.0,
                                           t, cfg);
  EXPECT_NEAR(std::norm(r.psi->amplitudes(kSmall.index(0, 1, 0))), 1.0, 1e-9);
  EXPECT_NEAR(r.trajectory.back().qutrit_g_pop, 1.0, 1e-9);
  EXPECT_NEAR(r.trajectory[1].qutrit_f_pop, 0.5, 1e-9);
  EXPECT_NEAR(r.diagnostics.max_excited_population, 1.0, 1e-12);
}

TEST(Unitary, HarmonicDriveMatchesRotatingFrameOracle) {
  // G (h e^{-i w t} + h.c.) with h = a1 |f><g|.
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, kSmall);
  const OperatorMatrix x = a1.adjoint() * transition(Level::f, Level::g, kSmall);
  const double g = mhz(10.0), w = mhz(200.0), t = 0.05e-6;
  HamiltonianSpec spec{kSmall, {}, {{g, w, x.adjoint(), "x"}}};
  const StateVector psi = product_state(Level::f, fock_vector(0, 4), fock_vector(0, 3), kSmall);
  IntegratorConfig cfg = precise();
  const EvolutionResult r =
      evolve_unitary(psi, TimeDependentHamiltonian::from(spec), 0.0, t, cfg);
  // With R = exp(-i w t P_f) the drive is static in the rotating frame:
  // psi(t) = R(t) exp(-i (g (x + x+) - w P_f) t) psi(0).
  const DenseMatrix pf = projector(Level::f, kSmall).dense();
  const DenseMatrix h0 = g * (x + x.adjoint()).dense() - w * pf;
  DenseVector v = oracle::evolve(h0, psi.amplitudes, t);
  v = oracle::evolve(w * pf, v, t);
  EXPECT_LT((r.psi->amplitudes - v).norm(), 1e-8);
}

TEST(Unitary, AdaptiveAgreesWithRk4) {
  const SystemParams p = table1_params();
  const SpaceSpec sp{3, 3};
  const HamiltonianSpec spec = build_step1(p, sp, Terms::kFull);
  DenseVector c1(3), c2(3);
  c1 << 0.6, 0.8, 0.0;
  c2 << 0.0, 1.0, 0.0;
  const StateVector psi = product_state(Level::g, c1, c2, sp);
  IntegratorConfig rk4;
  IntegratorConfig dp;
  dp.method = Method::kAdaptive;
  dp.rel_tol = 1e-10;
  dp.abs_tol = 1e-12;
  const auto h = TimeDependentHamiltonian::from(spec);
  const EvolutionResult a = evolve_unitary(psi, h, 0.0, 2e-9, rk4);
  const EvolutionResult b = evolve_unitary(psi, h, 0.0, 2e-9, dp);
  EXPECT_GT(fidelity(*a.psi, *b.psi), 1.0 - 1e-8);
  EXPECT_GT(a.diagnostics.steps, 0);
  EXPECT_GT(b.diagnostics.steps, 0);
}

TEST(Integrator, ValidatesConfig) {
  IntegratorConfig cfg;
  cfg.steps_per_fastest_period = 5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = IntegratorConfig{};
  cfg.max_step = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  const StateVector psi = product_state(Level::g, fock_vector(0, 4), fock_vector(0, 3), kSmall);
  EXPECT_THROW(evolve_unitary(psi, TimeDependentHamiltonian(SpaceSpec{3, 3}), 0.0, 1e-9,
                              IntegratorConfig{}),
               std::invalid_argument);
}

TEST(Integrator, ReductionIsExact) {
  const SystemParams p = table1_params();
  const SpaceSpec sp{4, 4};
  const auto h = TimeDependentHamiltonian::from(build_step1(p, sp, Terms::kFull));
  const StateVector psi = product_state(Level::g, fock_vector(1, 4), fock_vector(1, 4), sp);
  IntegratorConfig on, off;
  off.reduce_to_reachable = false;
  const EvolutionResult a = evolve_unitary(psi, h, 0.0, 1e-9, on);
  const EvolutionResult b = evolve_unitary(psi, h, 0.0, 1e-9, off);
  EXPECT_LE(a.diagnostics.integrated_dim, b.diagnostics.integrated_dim);
  EXPECT_EQ(b.diagnostics.integrated_dim, sp.dim());
  EXPECT_LT((a.psi->amplitudes - b.psi->amplitudes).norm(), 1e-12);
}

class ClosedForm : public ::testing::Test {
 protected:
  void SetUp() override {
    params_ = table1_params();
    r_ = derived_params(params_);
    cat_ = choose_parameters(3, 1.0);
    space_ = SpaceSpec{4, fock_truncation(std::abs(cat_.alpha))};
    weights_ = DenseVector::Zero(4);
    weights_.head(3).setConstant(1.0 / std::sqrt(3.0));
    initial_ = closed_form_step1(weights_, cat_.alpha, 0.0, 0.0, 0.0, space_).normalized();
  }

  SystemParams params_;
  DerivedParams r_;
  CatParams cat_;
  SpaceSpec space_;
  DenseVector weights_;
  StateVector initial_;
};

TEST_F(ClosedForm, InitialStateIsProductOfSuperpositionAndCat) {
  const StateVector expected =
      product_state(Level::g, weights_, oracle::cat(cat_.alpha, 0, 0.0, space_.n2), space_)
          .normalized();
  EXPECT_GT(fidelity(initial_, expected), 1.0 - 1e-14);
}

TEST_F(ClosedForm, StepOneIntegrationMatches) {
  const EffectiveModel m = build_effective(1, params_, space_);
  IntegratorConfig cfg;
  const EvolutionResult r = evolve_unitary(
      initial_, TimeDependentHamiltonian::from(m.ground), 0.0, r_.tau, cfg);
  const StateVector expected =
      closed_form_step1(weights_, cat_.alpha, r_.lambda1, r_.chi, r_.tau, space_).normalized();
  EXPECT_LT(1.0 - std::pow(fidelity(*r.psi, expected), 2), 1e-8);
  EXPECT_LT(r.diagnostics.max_excited_population, 1e-15);
}

TEST_F(ClosedForm, StepTwoIntegrationMatches) {
  const StateVector mid =
      closed_form_step1(weights_, cat_.alpha, r_.lambda1, r_.chi, r_.tau, space_).normalized();
  const EffectiveModel m = build_effective(2, params_, space_);
  IntegratorConfig cfg;
  const EvolutionResult r =
      evolve_unitary(mid, TimeDependentHamiltonian::from(m.ground), r_.tau, 2 * r_.tau, cfg);
  const StateVector expected = closed_form_step2(mid, r_.lambda1_tilde, r_.tau).normalized();
  EXPECT_LT(1.0 - std::pow(fidelity(*r.psi, expected), 2), 1e-8);
}

TEST_F(ClosedForm, FockPhaseCancelsWhenMatched) {
  const StateVector mid =
      closed_form_step1(weights_, cat_.alpha, r_.lambda1, r_.chi, r_.tau, space_);
  const StateVector out = closed_form_step2(mid, r_.lambda1_tilde, r_.tau).normalized();
  // With exact matching, |n> carries the cat rotated by -chi n tau = -pi n / 3.
  DenseVector expected = DenseVector::Zero(space_.dim());
  for (int n = 0; n < 3; ++n) {
    const DenseVector cat = oracle::cat(cat_.alpha, n, -kPi / 3.0, space_.n2);
    for (int k = 0; k < space_.n2; ++k) expected(space_.index(0, n, k)) = cat(k) / std::sqrt(3.0);
  }
  EXPECT_GT(fidelity(out, StateVector{space_, expected}.normalized()), 1.0 - 1e-12);
}

TEST(Fidelity, Examples) {
  const SpaceSpec sp{2, 2};
  const StateVector g0 = product_state(Level::g, fock_vector(0, 2), fock_vector(0, 2), sp);
  const StateVector g1 = product_state(Level::g, fock_vector(1, 2), fock_vector(0, 2), sp);
  EXPECT_DOUBLE_EQ(fidelity(g0, g0), 1.0);
  EXPECT_DOUBLE_EQ(fidelity(g0, g1), 0.0);
  StateVector plus{sp, (g0.amplitudes + g1.amplitudes) / std::sqrt(2.0)};
  EXPECT_NEAR(fidelity(plus, g0), 1.0 / std::sqrt(2.0), 1e-15);
  // Maximally mixed over {g0, g1}: <g0|rho|g0> = 1/2.
  DensityMatrix mixed{sp, 0.5 * (g0.amplitudes * g0.amplitudes.adjoint() +
                                 g1.amplitudes * g1.amplitudes.adjoint())};
  EXPECT_NEAR(fidelity(mixed, g0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(fidelity(DensityMatrix::from_pure(plus), plus), 1.0, 1e-15);
}

TEST(Diagnostics, MergeKeepsWorstValues) {
  Diagnostics a, b;
  a.min_trace = 0.99;
  a.steps = 10;
  a.integrated_dim = 20;
  b.min_trace = 0.98;
  b.max_trace_error = 0.02;
  b.steps = 5;
  b.integrated_dim = 30;
  b.flagged = true;
  b.message = "trace drift";
  a.merge(b);
  EXPECT_DOUBLE_EQ(a.min_trace, 0.98);
  EXPECT_DOUBLE_EQ(a.max_trace_error, 0.02);
  EXPECT_EQ(a.steps, 15);
  EXPECT_EQ(a.integrated_dim, 30);
  EXPECT_TRUE(a.flagged);
  EXPECT_NE(a.message.find("trace drift"), std::string::npos);
}

TEST(TimeDependentHamiltonian, MatchesRealize) {
  const SystemParams p = table1_params();
  const SpaceSpec sp{3, 3};
  const HamiltonianSpec full = build_step1(p, sp, Terms::kFull);
  const EffectiveSpec avg = time_average(build_step1(p, sp, Terms::kIdeal));
  const auto a = TimeDependentHamiltonian::from(full);
  const auto b = TimeDependentHamiltonian::from(avg);
  for (double t : {0.0, 3.3e-10, 4.1e-8}) {
    EXPECT_LT(frobenius_distance(a.at(t), realize(full, t)), 1e-3);
    EXPECT_LT(frobenius_distance(b.at(t), realize(avg, t)), 1e-3);
  }
  auto c = a;
  c.append(b);
  EXPECT_LT(frobenius_distance(c.at(1e-9), realize(full, 1e-9) + realize(avg, 1e-9)), 1e-3);
}

}  // namespace
}  // namespace catqudit
