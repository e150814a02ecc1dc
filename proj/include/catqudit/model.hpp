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

#ifndef CATQUDIT_MODEL_HPP
#define CATQUDIT_MODEL_HPP

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catqudit/effective.hpp"
#include "catqudit/hilbert.hpp"

namespace catqudit {

// All frequencies and couplings are angular (rad/s); times are seconds.

/// How the second-step cavity frequency and coupling are obtained.
enum class Matching {
  /// Solve lambda_1 + chi = lambda~_1 for omega~_c1 with the coupling
  /// following the sqrt(omega) scaling rule.
  kExact,
  /// Use the configured omega~_c1 and mu_1 as given, even if they do not
  /// satisfy the matching condition.
  kAsPrinted,
};

/// Parasitic couplings as fractions of the principal ones.
struct CouplingRatios {
  double g1_tilde = 1.0;   // cav1 on f-e, relative to g1
  double g1_prime = 0.1;   // cav1 on e-g, relative to g1
  double g2_tilde = 1.0;   // cav2 on f-g, relative to g2
  double g2_prime = 0.1;   // cav2 on e-g, relative to g2
  double mu1_tilde = 1.0;  // retuned cav1 on f-e, relative to mu1
  double mu1_prime = 0.1;  // retuned cav1 on e-g, relative to mu1
  double mu2 = 1.0;        // retuned cav2 on f-e, relative to the scaling rule
  double mu2_tilde = 1.0;  // retuned cav2 on f-g, relative to mu2
  double mu2_prime = 0.1;  // retuned cav2 on e-g, relative to mu2

  static CouplingRatios none();
};

struct SystemParams {
  double omega_fg = 0.0;
  double omega_fe = 0.0;
  double omega_eg = 0.0;
  double omega_c1 = 0.0;
  double omega_c2 = 0.0;
  /// Retuned cavity 1. Required for Matching::kAsPrinted, ignored otherwise.
  std::optional<double> omega_c1_tilde;
  double omega_c2_tilde = 0.0;

  double g1 = 0.0;
  double g2 = 0.0;
  /// Step-two couplings. When absent they follow mu = sqrt(omega~/omega) g.
  /// mu1 is only honored in Matching::kAsPrinted.
  std::optional<double> mu1;
  std::optional<double> mu2;

  CouplingRatios ratios;
  /// Cavity-cavity crosstalk during step one and step two.
  double g12 = 0.0;
  double g12_tilde = 0.0;

  int d = 3;
  double s = 1.0;
  Matching matching = Matching::kExact;

  /// Tabulated reference values (e.g. "Delta1", "delta1", "mu1"), compared
  /// against recomputation in DerivedParams::printed_mismatch. Never used in
  /// the physics.
  std::map<std::string, double> printed;

  /// omega_fg = omega_fe + omega_eg within 1e-9 relative, d >= 2, s >= 1,
  /// positive frequencies. Throws std::invalid_argument.
  void validate() const;
};

/// The reference two-cavity parameter set (d = 3, s = 1, exact matching).
SystemParams table1_params();

struct NoiseParams {
  double kappa1 = 0.0;  // 1/s
  double kappa2 = 0.0;
  /// Qutrit decoherence scale in seconds; infinity disables qutrit noise.
  double T = std::numeric_limits<double>::infinity();

  double gamma_eg() const { return 1.0 / (10.0 * T); }
  double gamma_fe() const { return 1.0 / T; }
  double gamma_fg() const { return 1.0 / T; }
  double gamma_phi_e() const { return 2.0 / T; }
  double gamma_phi_f() const { return 2.0 / T; }

  /// kappa1 = kappa2 = 1/kappa_inv; non-positive or infinite inputs mean
  /// no loss on that channel.
  static NoiseParams from_times(double kappa_inv, double T);
  void validate() const;
};

struct ValidityRatios {
  double g1_over_delta1 = 0.0;
  double g2_over_delta2 = 0.0;
  double lambda_over_delta = 0.0;
  double max_shift_over_delta = 0.0;  // max(lambda1, lambda2, lambda) / delta
  double mu1_over_delta1 = 0.0;
};

struct PrintedComparison {
  std::string name;
  double computed = 0.0;
  double printed = 0.0;
  double relative_difference = 0.0;
};

struct DerivedParams {
  // Step-one detunings.
  double Delta1 = 0.0, Delta2 = 0.0, delta = 0.0;
  double Delta1_tilde = 0.0, Delta1_prime = 0.0;
  double Delta2_tilde = 0.0, Delta2_prime = 0.0;
  double Delta12 = 0.0;
  // Step-two detunings.
  double Delta12_tilde = 0.0;
  double delta1 = 0.0, delta1_tilde = 0.0, delta1_prime = 0.0;
  double delta2 = 0.0, delta2_tilde = 0.0, delta2_prime = 0.0;

  double omega_c1_tilde = 0.0;  // value in use
  double mu1 = 0.0;
  double mu2 = 0.0;

  double lambda1 = 0.0, lambda2 = 0.0, lambda = 0.0, chi = 0.0;
  double lambda1_tilde = 0.0;
  double tau = 0.0;

  /// |lambda1 + chi - lambda~1| / lambda~1 for the couplings in use.
  double matching_residual = 0.0;
  ValidityRatios validity;

  // omega * kappa^{-1} for each cavity frequency (infinite when lossless).
  double Q1 = 0.0, Q2 = 0.0, Q1_tilde = 0.0, Q2_tilde = 0.0;

  std::vector<PrintedComparison> printed_mismatch;
};

/// Throws std::invalid_argument if any detuning is non-positive.
DerivedParams derived_params(const SystemParams& p,
                             const NoiseParams& noise = {});

enum class MatchScaling {
  /// mu1^2 = g1^2 omega~/omega_c1 (coupling follows the cavity frequency).
  kScaled,
  /// mu1 held at SystemParams::mu1 (or g1 when unset).
  kFixedCoupling,
};

/// omega~_c1 that makes mu1^2 / (omega_fg - omega~_c1) equal lambda1 + chi.
/// Throws std::domain_error when no solution has omega~_c1 < omega_fg.
double matched_cavity_frequency(const SystemParams& p,
                                MatchScaling scaling = MatchScaling::kScaled);

/// |lambda1 + chi - mu1^2/delta1| / (mu1^2/delta1) with delta1 from the
/// supplied cavity frequency.
double matching_residual(const SystemParams& p, double omega_c1_tilde,
                         double mu1);

/// max{g1, g2, g~1, g~2, mu1, mu2, mu~1, mu~2}.
double g_max(const SystemParams& p);

enum class Terms { kIdeal, kFull };

/// Interaction-picture step-one Hamiltonian: two harmonic terms, or seven
/// with the parasitic couplings and crosstalk.
HamiltonianSpec build_step1(const SystemParams& p, const SpaceSpec& space,
                            Terms terms);
/// Step-two counterpart: one harmonic term, or seven.
HamiltonianSpec build_step2(const SystemParams& p, const SpaceSpec& space,
                            Terms terms);

struct EffectiveModel {
  /// Static dispersive Hamiltonian on all qutrit levels.
  EffectiveSpec full;
  /// Its restriction to the qutrit ground manifold.
  EffectiveSpec ground;
};

/// Closed-form second-order Hamiltonians for step 1 or 2, written out term
/// by term (not produced by time_average).
EffectiveModel build_effective(int step, const SystemParams& p,
                               const SpaceSpec& space);

struct CollapseOperator {
  double rate = 0.0;
  OperatorMatrix op;
  std::string label;
};

/// rate * D[op] for cavity loss, qutrit relaxation and dephasing. Zero rates
/// are omitted.
std::vector<CollapseOperator> collapse_ops(const NoiseParams& noise,
                                           const SpaceSpec& space);

}  // namespace catqudit

#endif  // CATQUDIT_MODEL_HPP
