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

#ifndef CATQUDIT_PROTOCOL_HPP
#define CATQUDIT_PROTOCOL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "catqudit/dynamics.hpp"
#include "catqudit/model.hpp"

namespace catqudit {

enum class ModelLevel {
  /// All seven harmonic terms per step, GHz oscillations.
  kFull,
  /// Stark shifts plus the two-photon term at its MHz-GHz beat; crosstalk
  /// kept as an explicit oscillating term.
  kIntermediate,
  /// Static dispersive Hamiltonians; crosstalk enters through its averaged
  /// frequency shift.
  kEffective,
};

std::string to_string(ModelLevel level);
/// "full", "intermediate" or "effective"; throws std::invalid_argument.
ModelLevel parse_model_level(const std::string& text);

struct ProtocolConfig {
  SystemParams params = table1_params();
  NoiseParams noise;
  ModelLevel level = ModelLevel::kEffective;
  /// Skew of the d = 3 Fock superposition; |x| < 1/sqrt(3).
  double x = 0.0;
  /// Step one runs for tau (1 + dtau_frac), step two for tau (1 - dtau_frac).
  double dtau_frac = 0.0;
  /// g12 = g~12 = gcr_frac * g_max.
  double gcr_frac = 0.0;
  /// Replaces the cat amplitude chosen from (d, s).
  std::optional<Complex> alpha_override;
  std::optional<int> n1;
  std::optional<int> n2;
  IntegratorConfig integrator;

  void validate() const;
};

/// Truncations used by run(): n1 = d + 3 and the cat-tail rule for n2 unless
/// overridden.
SpaceSpec protocol_space(const ProtocolConfig& cfg);

/// Amplitude used by run().
Complex protocol_alpha(const ProtocolConfig& cfg);

/// Normalized (weighted Fock superposition) (x) (|alpha> + |-alpha>) (x) |g>.
/// Weights are 1/sqrt(d), or (1/sqrt3 + x, 1/sqrt3, 1/sqrt3 - x)/sqrt(1+2x^2)
/// for d = 3.
StateVector initial_state(int d, Complex alpha, double x,
                          const SpaceSpec& space);

/// Normalized d^{-1/2} sum_n |n>|C_n>|g> with C_n built on alpha e^{i n phi}.
StateVector ideal_target(int d, Complex alpha, double phi,
                         const SpaceSpec& space);

struct FidelityResult {
  ProtocolConfig config;
  double F = 0.0;
  double runtime_s = 0.0;
  double tau = 0.0;
  int integrated_dim = 0;
  Diagnostics diagnostics;
  std::vector<Sample> trajectory;
  bool ok = true;
  std::string error;
};

/// Hamiltonians of both steps at the configured level, with crosstalk.
struct ProtocolHamiltonians {
  TimeDependentHamiltonian step1;
  TimeDependentHamiltonian step2;
};
ProtocolHamiltonians protocol_hamiltonians(const ProtocolConfig& cfg,
                                           const SpaceSpec& space);

/// Runs both steps and scores the final state against ideal_target with
/// phi = -pi/(s d). Integration failures propagate as exceptions.
FidelityResult run(const ProtocolConfig& cfg, const Observers& observers = {});

enum class SweepAxis { kT, kKappaInv, kX, kDtauFrac, kGcr };

std::string to_string(SweepAxis axis);
/// "T", "kappa_inv", "x", "dtau_frac" or "gcr".
SweepAxis parse_sweep_axis(const std::string& text);

/// Copy of `base` with the axis set to `value` (T and kappa_inv in us).
ProtocolConfig with_axis_value(const ProtocolConfig& base, SweepAxis axis,
                               double value);

/// One run per point on `jobs` worker threads, results in input order.
/// A failing point is recorded (ok = false) without stopping the others.
std::vector<FidelityResult> sweep(
    const ProtocolConfig& base, SweepAxis axis,
    const std::vector<double>& points, int jobs = 1,
    const std::function<void(std::size_t, const FidelityResult&)>& on_done =
        {});

}  // namespace catqudit

#endif  // CATQUDIT_PROTOCOL_HPP
