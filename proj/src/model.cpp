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

#include "catqudit/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "catqudit/units.hpp"

namespace catqudit {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

struct Operators {
  OperatorMatrix a1, a2, a1d, a2d;
  OperatorMatrix s_fg, s_fe, s_eg;  // lowering |lower><upper|
  OperatorMatrix p_g, p_e, p_f;

  explicit Operators(const SpaceSpec& space)
      : a1(cavity_lowering(Slot::kCavity1, space)),
        a2(cavity_lowering(Slot::kCavity2, space)),
        a1d(a1.adjoint()),
        a2d(a2.adjoint()),
        s_fg(transition(Level::f, Level::g, space)),
        s_fe(transition(Level::f, Level::e, space)),
        s_eg(transition(Level::e, Level::g, space)),
        p_g(projector(Level::g, space)),
        p_e(projector(Level::e, space)),
        p_f(projector(Level::f, space)) {}
};

// Term printed as G (e^{+i w t} X + h.c.): X is the raising side.
HarmonicTerm raising_form(double coupling, double omega, const OperatorMatrix& x,
                          std::string label) {
  return {coupling, omega, x.adjoint(), std::move(label)};
}

// Term printed as G (e^{-i w t} X + h.c.): X is the lowering side.
HarmonicTerm lowering_form(double coupling, double omega,
                           const OperatorMatrix& x, std::string label) {
  return {coupling, omega, x, std::move(label)};
}

double lambda_shift(double g1, double g2, double d1, double d2) {
  return 0.5 * g1 * g2 * (1.0 / d1 + 1.0 / d2);
}

double scaled_coupling(double g, double omega_new, double omega_old) {
  return std::sqrt(omega_new / omega_old) * g;
}

double q_factor(double omega, double kappa) {
  return kappa > 0.0 ? omega / kappa : std::numeric_limits<double>::infinity();
}

}  // namespace

CouplingRatios CouplingRatios::none() {
  CouplingRatios r;
  r.g1_tilde = r.g1_prime = r.g2_tilde = r.g2_prime = 0.0;
  r.mu1_tilde = r.mu1_prime = r.mu2 = r.mu2_tilde = r.mu2_prime = 0.0;
  return r;
}

void SystemParams::validate() const {
  require_positive(omega_fg, "omega_fg");
  require_positive(omega_fe, "omega_fe");
  require_positive(omega_eg, "omega_eg");
  require_positive(omega_c1, "omega_c1");
  require_positive(omega_c2, "omega_c2");
  require_positive(omega_c2_tilde, "omega_c2_tilde");
  if (std::abs(omega_fg - (omega_fe + omega_eg)) > 1e-9 * omega_fg) {
    throw std::invalid_argument(
        "qutrit frequencies are inconsistent: omega_fg != omega_fe + omega_eg");
  }
  if (g1 < 0.0 || g2 < 0.0) {
    throw std::invalid_argument("couplings must be non-negative");
  }
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (!(s >= 1.0)) throw std::invalid_argument("s must be >= 1");
  if (matching == Matching::kAsPrinted && !omega_c1_tilde) {
    throw std::invalid_argument(
        "as-printed matching needs an explicit omega_c1_tilde");
  }
}

SystemParams table1_params() {
  SystemParams p;
  p.omega_fg = ghz(12.0);
  p.omega_fe = ghz(7.0);
  p.omega_eg = ghz(5.0);
  p.omega_c1 = ghz(15.0);
  p.omega_c2 = ghz(9.0);
  p.omega_c1_tilde = ghz(9.96);
  p.omega_c2_tilde = ghz(4.0);
  p.g1 = mhz(236.0);
  p.g2 = mhz(223.0);
  p.mu1 = mhz(192.1);
  p.mu2 = mhz(148.7);
  p.d = 3;
  p.s = 1.0;
  p.matching = Matching::kExact;
  p.printed = {
      {"omega_c1_tilde", ghz(9.96)}, {"Delta1", ghz(3.0)},
      {"Delta2", ghz(2.0)},          {"Delta1_tilde", ghz(8.0)},
      {"Delta2_tilde", ghz(3.0)},    {"Delta1_prime", ghz(10.0)},
      {"Delta2_prime", ghz(4.0)},    {"Delta12", ghz(6.0)},
      {"Delta12_tilde", ghz(5.96)},  {"delta", ghz(1.0)},
      {"delta1", ghz(2.04)},         {"delta1_tilde", ghz(2.96)},
      {"delta1_prime", ghz(4.96)},   {"delta2", ghz(3.0)},
      {"delta2_tilde", ghz(8.0)},    {"delta2_prime", ghz(1.0)},
      {"mu1", mhz(192.1)},           {"mu2", mhz(148.7)},
  };
  return p;
}

NoiseParams NoiseParams::from_times(double kappa_inv, double T) {
  NoiseParams n;
  const double kappa =
      (kappa_inv > 0.0 && std::isfinite(kappa_inv)) ? 1.0 / kappa_inv : 0.0;
  n.kappa1 = n.kappa2 = kappa;
  n.T = (T > 0.0) ? T : std::numeric_limits<double>::infinity();
  return n;
}

void NoiseParams::validate() const {
  if (kappa1 < 0.0 || kappa2 < 0.0) {
    throw std::invalid_argument("cavity decay rates must be >= 0");
  }
  if (!(T > 0.0)) throw std::invalid_argument("T must be > 0");
}

double matched_cavity_frequency(const SystemParams& p, MatchScaling scaling) {
  const double Delta1 = p.omega_c1 - p.omega_fg;
  const double Delta2 = p.omega_c2 - p.omega_fe;
  const double delta = p.omega_c1 - p.omega_c2 - p.omega_eg;
  require_positive(Delta1, "Delta1");
  require_positive(Delta2, "Delta2");
  require_positive(delta, "delta");
  const double lambda = lambda_shift(p.g1, p.g2, Delta1, Delta2);
  const double target = p.g1 * p.g1 / Delta1 + lambda * lambda / delta;
  if (!(target > 0.0)) {
    throw std::domain_error("matching target lambda1 + chi is not positive");
  }
  double omega = 0.0;
  if (scaling == MatchScaling::kScaled) {
    // g1^2 w / (omega_c1 (omega_fg - w)) = target, linear in w.
    omega = p.omega_fg / (1.0 + p.g1 * p.g1 / (p.omega_c1 * target));
  } else {
    const double mu = p.mu1.value_or(p.g1);
    omega = p.omega_fg - mu * mu / target;
  }
  if (!(omega > 0.0 && omega < p.omega_fg)) {
    throw std::domain_error("no matched cavity frequency below omega_fg");
  }
  return omega;
}

double matching_residual(const SystemParams& p, double omega_c1_tilde,
                         double mu1) {
  const double Delta1 = p.omega_c1 - p.omega_fg;
  const double Delta2 = p.omega_c2 - p.omega_fe;
  const double delta = p.omega_c1 - p.omega_c2 - p.omega_eg;
  const double lambda = lambda_shift(p.g1, p.g2, Delta1, Delta2);
  const double target = p.g1 * p.g1 / Delta1 + lambda * lambda / delta;
  const double shift = mu1 * mu1 / (p.omega_fg - omega_c1_tilde);
  return std::abs(target - shift) / shift;
}

DerivedParams derived_params(const SystemParams& p, const NoiseParams& noise) {
  p.validate();
  DerivedParams r;
  r.Delta1 = p.omega_c1 - p.omega_fg;
  r.Delta2 = p.omega_c2 - p.omega_fe;
  r.delta = p.omega_c1 - p.omega_c2 - p.omega_eg;
  r.Delta1_tilde = p.omega_c1 - p.omega_fe;
  r.Delta1_prime = p.omega_c1 - p.omega_eg;
  r.Delta2_tilde = p.omega_fg - p.omega_c2;
  r.Delta2_prime = p.omega_c2 - p.omega_eg;
  r.Delta12 = p.omega_c1 - p.omega_c2;

  if (p.matching == Matching::kExact) {
    r.omega_c1_tilde = matched_cavity_frequency(p, MatchScaling::kScaled);
    r.mu1 = scaled_coupling(p.g1, r.omega_c1_tilde, p.omega_c1);
    r.mu2 = p.ratios.mu2 * scaled_coupling(p.g2, p.omega_c2_tilde, p.omega_c2);
  } else {
    r.omega_c1_tilde = *p.omega_c1_tilde;
    r.mu1 = p.mu1.value_or(scaled_coupling(p.g1, r.omega_c1_tilde, p.omega_c1));
    r.mu2 = p.ratios.mu2 *
            p.mu2.value_or(scaled_coupling(p.g2, p.omega_c2_tilde, p.omega_c2));
  }

  r.Delta12_tilde = r.omega_c1_tilde - p.omega_c2_tilde;
  r.delta1 = p.omega_fg - r.omega_c1_tilde;
  r.delta1_tilde = r.omega_c1_tilde - p.omega_fe;
  r.delta1_prime = r.omega_c1_tilde - p.omega_eg;
  r.delta2 = p.omega_fe - p.omega_c2_tilde;
  r.delta2_tilde = p.omega_fg - p.omega_c2_tilde;
  r.delta2_prime = p.omega_eg - p.omega_c2_tilde;

  const std::pair<const char*, double> detunings[] = {
      {"Delta1", r.Delta1},
      {"Delta2", r.Delta2},
      {"delta", r.delta},
      {"Delta1_tilde", r.Delta1_tilde},
      {"Delta1_prime", r.Delta1_prime},
      {"Delta2_tilde", r.Delta2_tilde},
      {"Delta2_prime", r.Delta2_prime},
      {"Delta12", r.Delta12},
      {"Delta12_tilde", r.Delta12_tilde},
      {"delta1", r.delta1},
      {"delta1_tilde", r.delta1_tilde},
      {"delta1_prime", r.delta1_prime},
      {"delta2", r.delta2},
      {"delta2_tilde", r.delta2_tilde},
      {"delta2_prime", r.delta2_prime},
  };
  for (const auto& [name, value] : detunings) require_positive(value, name);

  r.lambda1 = p.g1 * p.g1 / r.Delta1;
  r.lambda2 = p.g2 * p.g2 / r.Delta2;
  r.lambda = lambda_shift(p.g1, p.g2, r.Delta1, r.Delta2);
  r.chi = r.lambda * r.lambda / r.delta;
  r.lambda1_tilde = r.mu1 * r.mu1 / r.delta1;
  r.tau = r.chi > 0.0 ? kPi / (p.s * p.d * r.chi)
                      : std::numeric_limits<double>::infinity();
  r.matching_residual =
      std::abs(r.lambda1 + r.chi - r.lambda1_tilde) / r.lambda1_tilde;

  r.validity.g1_over_delta1 = p.g1 / r.Delta1;
  r.validity.g2_over_delta2 = p.g2 / r.Delta2;
  r.validity.lambda_over_delta = r.lambda / r.delta;
  r.validity.max_shift_over_delta =
      std::max({r.lambda1, r.lambda2, r.lambda}) / r.delta;
  r.validity.mu1_over_delta1 = r.mu1 / r.delta1;

  r.Q1 = q_factor(p.omega_c1, noise.kappa1);
  r.Q2 = q_factor(p.omega_c2, noise.kappa2);
  r.Q1_tilde = q_factor(r.omega_c1_tilde, noise.kappa1);
  r.Q2_tilde = q_factor(p.omega_c2_tilde, noise.kappa2);

  std::map<std::string, double> computed(std::begin(detunings),
                                         std::end(detunings));
  computed["omega_c1_tilde"] = r.omega_c1_tilde;
  computed["mu1"] = r.mu1;
  computed["mu2"] = r.mu2;
  for (const auto& [name, printed] : p.printed) {
    const auto it = computed.find(name);
    if (it == computed.end()) continue;
    r.printed_mismatch.push_back(
        {name, it->second, printed,
         std::abs(it->second - printed) / std::abs(printed)});
  }
  return r;
}

double g_max(const SystemParams& p) {
  const DerivedParams r = derived_params(p);
  const auto& k = p.ratios;
  return std::max({p.g1, p.g2, k.g1_tilde * p.g1, k.g2_tilde * p.g2, r.mu1,
                   r.mu2, k.mu1_tilde * r.mu1, k.mu2_tilde * r.mu2});
}

HamiltonianSpec build_step1(const SystemParams& p, const SpaceSpec& space,
                            Terms terms) {
  const DerivedParams r = derived_params(p);
  const Operators o(space);
  const auto& k = p.ratios;
  HamiltonianSpec spec;
  spec.space = space;
  auto& h = spec.harmonic_terms;
  h.push_back(raising_form(p.g1, r.Delta1, o.a1d * o.s_fg, "a1+ s-_fg"));
  h.push_back(raising_form(p.g2, r.Delta2, o.a2d * o.s_fe, "a2+ s-_fe"));
  if (terms == Terms::kFull) {
    h.push_back(raising_form(k.g1_tilde * p.g1, r.Delta1_tilde, o.a1d * o.s_fe,
                             "a1+ s-_fe"));
    h.push_back(raising_form(k.g1_prime * p.g1, r.Delta1_prime, o.a1d * o.s_eg,
                             "a1+ s-_eg"));
    // Cavity 2 sits below the f-g transition, so this one rotates the other
    // way: the printed operator a2+ s-_fg carries e^{-i w t}.
    h.push_back(lowering_form(k.g2_tilde * p.g2, r.Delta2_tilde,
                              o.a2d * o.s_fg, "a2 s+_fg"));
    h.push_back(raising_form(k.g2_prime * p.g2, r.Delta2_prime, o.a2d * o.s_eg,
                             "a2+ s-_eg"));
    h.push_back(raising_form(p.g12, r.Delta12, o.a1d * o.a2, "a1+ a2"));
  }
  return spec;
}

HamiltonianSpec build_step2(const SystemParams& p, const SpaceSpec& space,
                            Terms terms) {
  const DerivedParams r = derived_params(p);
  const Operators o(space);
  const auto& k = p.ratios;
  HamiltonianSpec spec;
  spec.space = space;
  auto& h = spec.harmonic_terms;
  h.push_back(lowering_form(r.mu1, r.delta1, o.a1d * o.s_fg, "a1 s+_fg"));
  if (terms == Terms::kFull) {
    h.push_back(raising_form(k.mu1_tilde * r.mu1, r.delta1_tilde,
                             o.a1d * o.s_fe, "a1+ s-_fe"));
    h.push_back(raising_form(k.mu1_prime * r.mu1, r.delta1_prime,
                             o.a1d * o.s_eg, "a1+ s-_eg"));
    h.push_back(lowering_form(r.mu2, r.delta2, o.a2d * o.s_fe, "a2 s+_fe"));
    h.push_back(lowering_form(k.mu2_tilde * r.mu2, r.delta2_tilde,
                              o.a2d * o.s_fg, "a2 s+_fg"));
    h.push_back(lowering_form(k.mu2_prime * r.mu2, r.delta2_prime,
                              o.a2d * o.s_eg, "a2 s+_eg"));
    h.push_back(raising_form(p.g12_tilde, r.Delta12_tilde, o.a1d * o.a2,
                             "a1+ a2"));
  }
  return spec;
}

EffectiveModel build_effective(int step, const SystemParams& p,
                               const SpaceSpec& space) {
  if (step != 1 && step != 2) {
    throw std::invalid_argument("build_effective: step must be 1 or 2");
  }
  const DerivedParams r = derived_params(p);
  const Operators o(space);
  const OperatorMatrix n1 = o.a1d * o.a1;
  const OperatorMatrix n1_up = o.a1 * o.a1d;
  const OperatorMatrix n2 = o.a2d * o.a2;
  const OperatorMatrix n2_up = o.a2 * o.a2d;

  EffectiveModel m;
  m.full.space = m.ground.space = space;
  if (step == 1) {
    m.full.static_terms = {
        {r.lambda1, n1 * o.p_g, "a1+ a1 s_gg"},
        {-r.lambda1, n1_up * o.p_f, "a1 a1+ s_ff"},
        {r.lambda2, n2 * o.p_e, "a2+ a2 s_ee"},
        {-r.lambda2, n2_up * o.p_f, "a2 a2+ s_ff"},
        {r.chi, n1 * n2_up * o.p_g, "a1+ a1 a2 a2+ s_gg"},
        {-r.chi, n1_up * n2 * o.p_e, "a1 a1+ a2+ a2 s_ee"},
    };
    m.ground.static_terms = {
        {r.lambda1 + r.chi, n1 * o.p_g, "a1+ a1 s_gg"},
        {r.chi, n1 * n2 * o.p_g, "a1+ a1 a2+ a2 s_gg"},
    };
  } else {
    m.full.static_terms = {
        {-r.lambda1_tilde, n1 * o.p_g, "a1+ a1 s_gg"},
        {r.lambda1_tilde, n1_up * o.p_f, "a1 a1+ s_ff"},
    };
    m.ground.static_terms = {
        {-r.lambda1_tilde, n1 * o.p_g, "a1+ a1 s_gg"},
    };
  }
  return m;
}

std::vector<CollapseOperator> collapse_ops(const NoiseParams& noise,
                                           const SpaceSpec& space) {
  noise.validate();
  std::vector<CollapseOperator> out;
  auto add = [&](double rate, OperatorMatrix op, const char* label) {
    if (rate > 0.0) out.push_back({rate, std::move(op), label});
  };
  add(noise.kappa1, cavity_lowering(Slot::kCavity1, space), "a1");
  add(noise.kappa2, cavity_lowering(Slot::kCavity2, space), "a2");
  if (std::isfinite(noise.T)) {
    add(noise.gamma_eg(), transition(Level::e, Level::g, space), "s-_eg");
    add(noise.gamma_fe(), transition(Level::f, Level::e, space), "s-_fe");
    add(noise.gamma_fg(), transition(Level::f, Level::g, space), "s-_fg");
    add(noise.gamma_phi_e(), projector(Level::e, space), "s_ee");
    add(noise.gamma_phi_f(), projector(Level::f, space), "s_ff");
  }
  return out;
}

}  // namespace catqudit
