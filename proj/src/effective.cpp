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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "catqudit/text.hpp"
#include "catqudit/units.hpp"

namespace catqudit {

namespace {

bool same_frequency(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

std::string dagger_label(const std::string& label) {
  return "(" + label + ")^dag";
}

OperatorMatrix hermitian_part(const OperatorMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace

void HamiltonianSpec::validate() const {
  space.validate();
  for (const auto& t : static_terms) {
    if (!(t.op.space() == space)) {
      throw std::invalid_argument("static term '" + t.label +
                                  "' lives on a different space");
    }
  }
  for (const auto& t : harmonic_terms) {
    if (!(t.h.space() == space)) {
      throw std::invalid_argument("harmonic term '" + t.label +
                                  "' lives on a different space");
    }
    if (!(t.omega > 0.0)) {
      throw std::invalid_argument("harmonic term '" + t.label +
                                  "' needs omega > 0");
    }
  }
}

OperatorMatrix EffectiveSpec::static_part() const {
  OperatorMatrix out = OperatorMatrix::zero(space);
  for (const auto& t : static_terms) out += t.coefficient * t.op;
  return out;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a * b - b * a;
}

EffectiveSpec time_average(const HamiltonianSpec& spec, double zero_tol) {
  spec.validate();
  EffectiveSpec out;
  out.space = spec.space;
  out.static_terms = spec.static_terms;

  const auto& terms = spec.harmonic_terms;
  const std::size_t n = terms.size();

  double min_omega = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    min_omega = std::min(min_omega, t.omega);
    const double r = std::abs(t.coupling) / t.omega;
    out.validity.coupling_ratios.push_back({t.label, r});
    out.validity.max_ratio = std::max(out.validity.max_ratio, r);
  }
  if (n > 0) {
    for (const auto& t : spec.static_terms) {
      const double r = std::abs(t.coefficient) / min_omega;
      out.validity.static_ratios.push_back({t.label, r});
      out.validity.max_ratio = std::max(out.validity.max_ratio, r);
    }
  }

  // h_m^dag is the stored raising side; h_m itself is its adjoint.
  std::vector<OperatorMatrix> lowering;
  lowering.reserve(n);
  for (const auto& t : terms) lowering.push_back(t.h);
  std::vector<OperatorMatrix> raising;
  raising.reserve(n);
  for (const auto& t : terms) raising.push_back(t.h.adjoint());

  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& tm = terms[m];
      const auto& tk = terms[k];
      const double inv_mean = 0.5 * (1.0 / tm.omega + 1.0 / tk.omega);
      const double coef = tm.coupling * tk.coupling * inv_mean;
      if (coef == 0.0) continue;
      const std::string label =
          "[" + tm.label + ", " + dagger_label(tk.label) + "]";
      if (m < k) {
        const double beat = tm.omega - tk.omega;
        out.validity.pair_beats.push_back(
            {tm.label + " / " + tk.label, beat, std::abs(beat) * inv_mean});
      }

      if (m == k) {
        OperatorMatrix c = commutator(raising[m], lowering[m]);
        if (c.is_zero(zero_tol)) continue;
        out.static_terms.push_back({coef, std::move(c), label});
        continue;
      }
      if (same_frequency(tm.omega, tk.omega)) {
        // Fold the pair with its partner so the static term is Hermitian.
        if (m > k) continue;
        OperatorMatrix c = commutator(raising[m], lowering[k]);
        if (c.is_zero(zero_tol)) continue;
        OperatorMatrix both = c + c.adjoint();
        out.static_terms.push_back(
            {coef, std::move(both), label + " + h.c."});
        continue;
      }
      OperatorMatrix c = commutator(raising[m], lowering[k]);
      if (c.is_zero(zero_tol)) continue;
      out.oscillating_terms.push_back(
          {Complex(coef), std::move(c), tm.omega - tk.omega, label});
    }
  }
  return out;
}

OperatorMatrix realize(const HamiltonianSpec& spec, double t) {
  OperatorMatrix h = OperatorMatrix::zero(spec.space);
  for (const auto& term : spec.static_terms) h += term.coefficient * term.op;
  for (const auto& term : spec.harmonic_terms) {
    const Complex phase = std::polar(1.0, -term.omega * t);
    h += (term.coupling * phase) * term.h;
    h += (term.coupling * std::conj(phase)) * term.h.adjoint();
  }
  return hermitian_part(h);
}

OperatorMatrix realize(const EffectiveSpec& spec, double t) {
  OperatorMatrix h = spec.static_part();
  for (const auto& term : spec.oscillating_terms) {
    h += (term.coefficient * std::polar(1.0, term.beat * t)) * term.op;
  }
  return hermitian_part(h);
}

HamiltonianSpec to_hamiltonian_spec(const EffectiveSpec& spec) {
  HamiltonianSpec out;
  out.space = spec.space;
  out.static_terms = spec.static_terms;
  const auto& osc = spec.oscillating_terms;
  for (const auto& term : osc) {
    if (term.beat <= 0.0) continue;
    const bool has_partner = std::any_of(osc.begin(), osc.end(), [&](const auto& p) {
      if (!same_frequency(p.beat, -term.beat)) return false;
      if (std::abs(p.coefficient - std::conj(term.coefficient)) >
          1e-12 * std::abs(term.coefficient)) {
        return false;
      }
      return frobenius_distance(p.op, term.op.adjoint()) <=
             1e-12 * std::max(1.0, term.op.frobenius_norm());
    });
    if (!has_partner) {
      throw std::invalid_argument("oscillating term '" + term.label +
                                  "' has no conjugate partner");
    }
    const double g = std::abs(term.coefficient);
    if (g == 0.0) continue;
    const Complex phase = term.coefficient / g;
    out.harmonic_terms.push_back(
        {g, term.beat, (phase * term.op).adjoint(), term.label});
  }
  return out;
}

std::string describe(const EffectiveSpec& spec) {
  std::ostringstream out;
  out << "# kind coefficient_MHz beat_MHz label\n";
  for (const auto& t : spec.static_terms) {
    out << "static " << format_double(to_mhz(t.coefficient), 8) << " 0 "
        << t.label << '\n';
  }
  for (const auto& t : spec.oscillating_terms) {
    out << "oscillating ";
    if (t.coefficient.imag() == 0.0) {
      out << format_double(to_mhz(t.coefficient.real()), 8);
    } else {
      out << format_double(to_mhz(t.coefficient.real()), 8) << '+'
          << format_double(to_mhz(t.coefficient.imag()), 8) << 'i';
    }
    out << ' ' << format_double(to_mhz(t.beat), 8) << ' ' << t.label << '\n';
  }
  return out.str();
}

std::string describe(const HamiltonianSpec& spec) {
  std::ostringstream out;
  out << "# kind coefficient_MHz frequency_MHz label\n";
  for (const auto& t : spec.static_terms) {
    out << "static " << format_double(to_mhz(t.coefficient), 8) << " 0 "
        << t.label << '\n';
  }
  for (const auto& t : spec.harmonic_terms) {
    out << "harmonic " << format_double(to_mhz(t.coupling), 8) << ' '
        << format_double(to_mhz(t.omega), 8) << ' ' << t.label << '\n';
  }
  return out.str();
}

}  // namespace catqudit
