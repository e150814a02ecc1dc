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

#ifndef CATQUDIT_DYNAMICS_HPP
#define CATQUDIT_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catqudit/effective.hpp"
#include "catqudit/hilbert.hpp"
#include "catqudit/model.hpp"

namespace catqudit {

enum class Method {
  /// Classical RK4 in the frame of the diagonal static energies.
  kRk4,
  /// Dormand-Prince 5(4) with error control, same frame.
  kAdaptive,
};

struct IntegratorConfig {
  Method method = Method::kRk4;
  /// Upper bound on the step in seconds.
  double max_step = 1e-8;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// RK4 takes this many steps per period of the fastest residual
  /// oscillation. Must be >= 20.
  int steps_per_fastest_period = 80;
  /// Integrate only on basis states reachable from the initial support.
  /// Exact: the dropped amplitudes stay identically zero.
  bool reduce_to_reachable = true;
  /// Trajectory samples per evolution, including both endpoints; 0 keeps
  /// only the final state.
  int samples = 0;
  /// Compute the minimum eigenvalue of rho at every sample and at the end.
  bool check_positivity = true;

  void validate() const;
};

/// static + sum_k (c_k X_k e^{i w_k t} + h.c.).
struct RotatingTerm {
  Complex coefficient;
  OperatorMatrix op;
  double frequency = 0.0;
  std::string label;
};

class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(const SpaceSpec& space);
  static TimeDependentHamiltonian from(const HamiltonianSpec& spec);
  static TimeDependentHamiltonian from(const EffectiveSpec& spec);

  TimeDependentHamiltonian& append(const TimeDependentHamiltonian& other);

  const SpaceSpec& space() const { return space_; }
  const OperatorMatrix& static_part() const { return static_; }
  const std::vector<RotatingTerm>& rotating_terms() const { return rotating_; }
  OperatorMatrix at(double t) const;

 private:
  SpaceSpec space_;
  OperatorMatrix static_;
  std::vector<RotatingTerm> rotating_;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sample {
  double t = 0.0;
  double trace = 1.0;
  /// NaN when no target was supplied.
  double fidelity = 0.0;
  double qutrit_g_pop = 0.0;
  double qutrit_e_pop = 0.0;
  double qutrit_f_pop = 0.0;
  double cav1_n = 0.0;
  double cav2_n = 0.0;
};

struct Diagnostics {
  double min_trace = 1.0;
  double max_trace_error = 0.0;
  double max_hermiticity_defect = 0.0;
  /// NaN when positivity was not checked (pure states, or disabled).
  double min_eigenvalue = 0.0;
  double max_excited_population = 0.0;
  long steps = 0;
  double last_step = 0.0;
  int integrated_dim = 0;
  bool flagged = false;
  std::string message;

  void merge(const Diagnostics& other);
};

struct EvolutionResult {
  std::optional<DensityMatrix> rho;
  std::optional<StateVector> psi;
  std::vector<Sample> trajectory;
  Diagnostics diagnostics;
};

/// Optional hooks for an evolution.
struct Observers {
  /// Normalized target for the fidelity column of the trajectory.
  const StateVector* target = nullptr;
  /// Added to the sample times.
  double time_offset = 0.0;
  /// Called with the completed fraction, roughly every percent.
  std::function<void(double)> progress;
};

/// Lindblad evolution of rho0 from t0 to t1 (H evaluated at the absolute
/// times). Each collapse operator contributes rate * D[op].
EvolutionResult evolve_master(const DensityMatrix& rho0,
                              const TimeDependentHamiltonian& h,
                              const std::vector<CollapseOperator>& c_ops,
                              double t0, double t1,
                              const IntegratorConfig& cfg,
                              const Observers& observers = {});

EvolutionResult evolve_unitary(const StateVector& psi0,
                               const TimeDependentHamiltonian& h, double t0,
                               double t1, const IntegratorConfig& cfg,
                               const Observers& observers = {});

/// After the step-one dispersive evolution for time tau, starting from
/// sum_n weights[n] |n>(|alpha> + |-alpha>)|g>: phase e^{-i(lambda1+chi) n tau}
/// on |n> and the cat rotated to alpha e^{-i chi n tau}. Cats unnormalized;
/// qutrit in |g>.
StateVector closed_form_step1(const DenseVector& weights, Complex alpha,
                              double lambda1, double chi, double tau,
                              const SpaceSpec& space);

/// Multiplies the |n> (qutrit g) components by e^{+i lambda1_tilde n tau}.
StateVector closed_form_step2(const StateVector& state, double lambda1_tilde,
                              double tau);

/// sqrt(<psi|rho|psi>) clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const StateVector& psi);
/// |<psi|phi>| for pure states.
double fidelity(const StateVector& phi, const StateVector& psi);

}  // namespace catqudit

#endif  // CATQUDIT_DYNAMICS_HPP
