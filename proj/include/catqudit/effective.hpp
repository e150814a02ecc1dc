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

#ifndef CATQUDIT_EFFECTIVE_HPP
#define CATQUDIT_EFFECTIVE_HPP

#include <string>
#include <vector>

#include "catqudit/hilbert.hpp"

namespace catqudit {

/// coefficient * op. The op is expected to be Hermitian; realize() enforces it.
struct StaticTerm {
  double coefficient = 0.0;
  OperatorMatrix op;
  std::string label;
};

/// coupling * (h e^{-i omega t} + h^dag e^{+i omega t}), omega > 0.
/// `label` names h^dag, the raising-side operator that carries e^{+i omega t}.
struct HarmonicTerm {
  double coupling = 0.0;
  double omega = 0.0;
  OperatorMatrix h;
  std::string label;
};

struct HamiltonianSpec {
  SpaceSpec space;
  std::vector<StaticTerm> static_terms;
  std::vector<HarmonicTerm> harmonic_terms;

  /// Throws std::invalid_argument on space mismatch or omega <= 0.
  void validate() const;
};

/// coefficient * op * e^{i beat t}. Appears together with its conjugate
/// partner (conj(coefficient), op^dag, -beat).
struct OscillatingTerm {
  Complex coefficient;
  OperatorMatrix op;
  double beat = 0.0;
  std::string label;
};

struct CouplingRatio {
  std::string label;
  double ratio = 0.0;
};

struct PairBeat {
  std::string label;
  double beat = 0.0;
  /// |beat| / mean frequency of the pair; small values mean the pair is
  /// near-resonant and its oscillating term must be kept.
  double relative_beat = 0.0;
};

/// Perturbative-regime diagnostics. Nothing here is enforced.
struct ValidityReport {
  std::vector<CouplingRatio> coupling_ratios;  // G_n / omega_n
  std::vector<CouplingRatio> static_ratios;    // |lambda| / min omega
  std::vector<PairBeat> pair_beats;            // m < n
  double max_ratio = 0.0;
};

struct EffectiveSpec {
  SpaceSpec space;
  std::vector<StaticTerm> static_terms;
  std::vector<OscillatingTerm> oscillating_terms;
  ValidityReport validity;

  OperatorMatrix static_part() const;
};

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Second-order time average. Diagonal (m = n) and equal-frequency pairs are
/// folded into the static part; vanishing commutators are dropped.
EffectiveSpec time_average(const HamiltonianSpec& spec,
                           double zero_tol = 1e-14);

/// Hermitian H(t).
OperatorMatrix realize(const HamiltonianSpec& spec, double t);
OperatorMatrix realize(const EffectiveSpec& spec, double t);

/// Rewrites an effective spec as static + harmonic terms so it can be
/// averaged again. Each positive-beat term and its partner become one
/// harmonic term; throws if a partner is missing.
HamiltonianSpec to_hamiltonian_spec(const EffectiveSpec& spec);

/// One line per term: kind, coefficient/2pi [MHz], beat/2pi [MHz], label.
std::string describe(const EffectiveSpec& spec);
std::string describe(const HamiltonianSpec& spec);

}  // namespace catqudit

#endif  // CATQUDIT_EFFECTIVE_HPP
