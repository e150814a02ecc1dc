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

#include "catqudit/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "catqudit/cat_algebra.hpp"
#include "catqudit/units.hpp"

namespace catqudit {

namespace {

// Averaged or explicit crosstalk term a1+ a2 at the given cavity detuning.
HamiltonianSpec crosstalk_spec(double coupling, double detuning,
                               const SpaceSpec& space) {
  HamiltonianSpec spec;
  spec.space = space;
  if (coupling == 0.0) return spec;
  const OperatorMatrix a1 = cavity_lowering(Slot::kCavity1, space);
  const OperatorMatrix a2 = cavity_lowering(Slot::kCavity2, space);
  spec.harmonic_terms.push_back(
      {coupling, detuning, (a1.adjoint() * a2).adjoint(), "a1+ a2"});
  return spec;
}

SystemParams with_crosstalk(const ProtocolConfig& cfg) {
  SystemParams p = cfg.params;
  const double g = cfg.gcr_frac * g_max(p);
  p.g12 = g;
  p.g12_tilde = g;
  return p;
}

}  // namespace

std::string to_string(ModelLevel level) {
  switch (level) {
    case ModelLevel::kFull:
      return "full";
    case ModelLevel::kIntermediate:
      return "intermediate";
    case ModelLevel::kEffective:
      return "effective";
  }
  return "?";
}

ModelLevel parse_model_level(const std::string& text) {
  if (text == "full") return ModelLevel::kFull;
  if (text == "intermediate") return ModelLevel::kIntermediate;
  if (text == "effective") return ModelLevel::kEffective;
  throw std::invalid_argument("unknown model level '" + text +
                              "' (full, intermediate, effective)");
}

void ProtocolConfig::validate() const {
  params.validate();
  noise.validate();
  integrator.validate();
  if (x != 0.0 && params.d != 3) {
    throw std::invalid_argument("x is only defined for d = 3");
  }
  if (!(std::abs(x) < 1.0 / std::sqrt(3.0))) {
    throw std::invalid_argument("|x| must be below 1/sqrt(3)");
  }
  if (!(std::abs(dtau_frac) < 1.0)) {
    throw std::invalid_argument("|dtau_frac| must be below 1");
  }
  if (!(gcr_frac >= 0.0)) throw std::invalid_argument("gcr_frac must be >= 0");
  if (n1 && *n1 < params.d) {
    throw std::invalid_argument("n1 must be at least d");
  }
  if (n2 && *n2 < 2) throw std::invalid_argument("n2 must be >= 2");
}

Complex protocol_alpha(const ProtocolConfig& cfg) {
  if (cfg.alpha_override) return *cfg.alpha_override;
  return choose_parameters(cfg.params.d, cfg.params.s).alpha;
}

SpaceSpec protocol_space(const ProtocolConfig& cfg) {
  SpaceSpec s;
  s.n1 = cfg.n1.value_or(cfg.params.d + 3);
  s.n2 = cfg.n2.value_or(fock_truncation(std::abs(protocol_alpha(cfg))));
  return s;
}

StateVector initial_state(int d, Complex alpha, double x,
                          const SpaceSpec& space) {
  if (d < 1) throw std::invalid_argument("initial_state: d must be >= 1");
  if (x != 0.0 && d != 3) {
    throw std::invalid_argument("initial_state: x is only defined for d = 3");
  }
  if (d > space.n1) {
    throw std::invalid_argument("initial_state: cavity 1 truncation below d");
  }
  DenseVector weights = DenseVector::Zero(space.n1);
  if (d == 3) {
    const double c = 1.0 / std::sqrt(3.0);
    const double norm = std::sqrt(1.0 + 2.0 * x * x);
    weights(0) = (c + x) / norm;
    weights(1) = c / norm;
    weights(2) = (c - x) / norm;
  } else {
    for (int n = 0; n < d; ++n) weights(n) = 1.0 / std::sqrt(double(d));
  }
  const DenseVector cat = cat_fock<double>(alpha, 0, 0.0, space.n2);
  return product_state(Level::g, weights, cat, space).normalized();
}

StateVector ideal_target(int d, Complex alpha, double phi,
                         const SpaceSpec& space) {
  if (d < 1) throw std::invalid_argument("ideal_target: d must be >= 1");
  if (d > space.n1) {
    throw std::invalid_argument("ideal_target: cavity 1 truncation below d");
  }
  StateVector out{space, DenseVector::Zero(space.dim())};
  for (int n = 0; n < d; ++n) {
    const DenseVector cat = cat_fock<double>(alpha, n, phi, space.n2);
    out.amplitudes +=
        product_state(Level::g, fock_vector(n, space.n1), cat, space).amplitudes;
  }
  return out.normalized();
}

ProtocolHamiltonians protocol_hamiltonians(const ProtocolConfig& cfg,
                                           const SpaceSpec& space) {
  const SystemParams p = with_crosstalk(cfg);
  const DerivedParams r = derived_params(p);
  switch (cfg.level) {
    case ModelLevel::kFull:
      return {TimeDependentHamiltonian::from(build_step1(p, space, Terms::kFull)),
              TimeDependentHamiltonian::from(build_step2(p, space, Terms::kFull))};
    case ModelLevel::kIntermediate: {
      auto h1 = TimeDependentHamiltonian::from(
          time_average(build_step1(p, space, Terms::kIdeal)));
      h1.append(TimeDependentHamiltonian::from(
          crosstalk_spec(p.g12, r.Delta12, space)));
      auto h2 = TimeDependentHamiltonian::from(
          time_average(build_step2(p, space, Terms::kIdeal)));
      h2.append(TimeDependentHamiltonian::from(
          crosstalk_spec(p.g12_tilde, r.Delta12_tilde, space)));
      return {std::move(h1), std::move(h2)};
    }
    case ModelLevel::kEffective: {
      auto h1 = TimeDependentHamiltonian::from(build_effective(1, p, space).full);
      h1.append(TimeDependentHamiltonian::from(
          time_average(crosstalk_spec(p.g12, r.Delta12, space))));
      auto h2 = TimeDependentHamiltonian::from(build_effective(2, p, space).full);
      h2.append(TimeDependentHamiltonian::from(
          time_average(crosstalk_spec(p.g12_tilde, r.Delta12_tilde, space))));
      return {std::move(h1), std::move(h2)};
    }
  }
  throw std::logic_error("unhandled model level");
}

FidelityResult run(const ProtocolConfig& cfg, const Observers& observers) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  FidelityResult result;
  result.config = cfg;

  const SpaceSpec space = protocol_space(cfg);
  const Complex alpha = protocol_alpha(cfg);
  const DerivedParams derived = derived_params(cfg.params);
  result.tau = derived.tau;
  const double phi = -kPi / (cfg.params.s * cfg.params.d);

  const StateVector psi0 = initial_state(cfg.params.d, alpha, cfg.x, space);
  const StateVector target = ideal_target(cfg.params.d, alpha, phi, space);
  const ProtocolHamiltonians h = protocol_hamiltonians(cfg, space);
  const auto c_ops = collapse_ops(cfg.noise, space);

  const double t1 = derived.tau * (1.0 + cfg.dtau_frac);
  const double t2 = derived.tau * (1.0 - cfg.dtau_frac);

  Observers first = observers;
  first.target = &target;
  if (observers.progress) {
    first.progress = [&](double f) { observers.progress(0.5 * f); };
  }
  Observers second = first;
  second.time_offset = observers.time_offset + t1;
  if (observers.progress) {
    second.progress = [&](double f) { observers.progress(0.5 + 0.5 * f); };
  }

  EvolutionResult r1, r2;
  if (c_ops.empty()) {
    r1 = evolve_unitary(psi0, h.step1, 0.0, t1, cfg.integrator, first);
    r2 = evolve_unitary(*r1.psi, h.step2, 0.0, t2, cfg.integrator, second);
    result.F = fidelity(*r2.psi, target);
  } else {
    const DensityMatrix rho0 = DensityMatrix::from_pure(psi0);
    r1 = evolve_master(rho0, h.step1, c_ops, 0.0, t1, cfg.integrator, first);
    r2 = evolve_master(*r1.rho, h.step2, c_ops, 0.0, t2, cfg.integrator, second);
    result.F = fidelity(*r2.rho, target);
  }

  result.diagnostics = r1.diagnostics;
  result.diagnostics.merge(r2.diagnostics);
  result.integrated_dim = result.diagnostics.integrated_dim;
  result.trajectory = std::move(r1.trajectory);
  // The step-two trajectory repeats the boundary sample; keep one copy.
  if (!result.trajectory.empty() && !r2.trajectory.empty()) {
    result.trajectory.pop_back();
  }
  result.trajectory.insert(result.trajectory.end(), r2.trajectory.begin(),
                           r2.trajectory.end());
  result.runtime_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kT:
      return "T";
    case SweepAxis::kKappaInv:
      return "kappa_inv";
    case SweepAxis::kX:
      return "x";
    case SweepAxis::kDtauFrac:
      return "dtau_frac";
    case SweepAxis::kGcr:
      return "gcr";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "T") return SweepAxis::kT;
  if (text == "kappa_inv") return SweepAxis::kKappaInv;
  if (text == "x") return SweepAxis::kX;
  if (text == "dtau_frac") return SweepAxis::kDtauFrac;
  if (text == "gcr") return SweepAxis::kGcr;
  throw std::invalid_argument("unknown sweep axis '" + text +
                              "' (T, kappa_inv, x, dtau_frac, gcr)");
}

ProtocolConfig with_axis_value(const ProtocolConfig& base, SweepAxis axis,
                               double value) {
  ProtocolConfig cfg = base;
  switch (axis) {
    case SweepAxis::kT:
      cfg.noise.T = (value > 0.0) ? microseconds(value)
                                  : std::numeric_limits<double>::infinity();
      break;
    case SweepAxis::kKappaInv: {
      const double kappa =
          (value > 0.0 && std::isfinite(value)) ? 1.0 / microseconds(value) : 0.0;
      cfg.noise.kappa1 = cfg.noise.kappa2 = kappa;
      break;
    }
    case SweepAxis::kX:
      cfg.x = value;
      break;
    case SweepAxis::kDtauFrac:
      cfg.dtau_frac = value;
      break;
    case SweepAxis::kGcr:
      cfg.gcr_frac = value;
      break;
  }
  return cfg;
}

std::vector<FidelityResult> sweep(
    const ProtocolConfig& base, SweepAxis axis,
    const std::vector<double>& points, int jobs,
    const std::function<void(std::size_t, const FidelityResult&)>& on_done) {
  if (points.empty()) throw std::invalid_argument("sweep: no points");
  std::vector<FidelityResult> results(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex done_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      const ProtocolConfig cfg = with_axis_value(base, axis, points[i]);
      FidelityResult r;
      try {
        r = run(cfg);
      } catch (const std::exception& e) {
        r.config = cfg;
        r.ok = false;
        r.error = e.what();
        r.F = std::numeric_limits<double>::quiet_NaN();
      }
      results[i] = std::move(r);
      if (on_done) {
        std::lock_guard<std::mutex> lock(done_mutex);
        on_done(i, results[i]);
      }
    }
  };

  const int n = std::clamp(jobs, 1, static_cast<int>(points.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int k = 0; k < n; ++k) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return results;
}

}  // namespace catqudit
