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

#include "catqudit/cat_algebra.hpp"

#include <algorithm>
#include <sstream>

#include "catqudit/text.hpp"
#include "catqudit/units.hpp"

namespace catqudit {

namespace {

// Inequality checks compare quantities that are equal by construction for
// the s = 1 family, so allow for rounding in arcsin(sin(x)).
constexpr double kInequalitySlack = 1e-12;

const double kSqrt10 = std::sqrt(10.0);

}  // namespace

void CatParams::validate() const {
  if (d < 2) throw std::invalid_argument("CatParams: d must be >= 2");
  if (!(s >= 1.0)) throw std::invalid_argument("CatParams: s must be >= 1");
  if (!(std::abs(alpha) > 0.0)) {
    throw std::invalid_argument("CatParams: |alpha| must be > 0");
  }
}

int fock_truncation(double abs_alpha) {
  return static_cast<int>(
      std::ceil(abs_alpha * abs_alpha + 8.0 * abs_alpha + 10.0));
}

double poisson_tail(double mean, int truncation) {
  if (truncation <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  // Sum p_k for k >= truncation in log space; terms decay geometrically once
  // k exceeds the mean.
  const double log_mean = std::log(mean);
  double tail = 0.0;
  for (int k = truncation;; ++k) {
    const double term = std::exp(-mean + k * log_mean - std::lgamma(k + 1.0));
    tail += term;
    if (k > mean && term < 1e-30 * std::max(tail, 1e-300)) break;
    if (k > truncation + 100000) break;
  }
  return tail;
}

void require_truncation(double abs_beta, int truncation) {
  const double tail = poisson_tail(abs_beta * abs_beta, truncation);
  if (tail > kFockTailTolerance) {
    const int suggested = fock_truncation(abs_beta);
    throw TruncationError(
        "truncation " + std::to_string(truncation) +
            " leaves Poisson tail " + format_double(tail, 3) +
            " for |beta| = " + format_double(abs_beta, 6) + "; use N >= " +
            std::to_string(suggested),
        suggested);
  }
}

CatParams choose_parameters(int d, double s) {
  if (d < 2) throw std::invalid_argument("choose_parameters: d must be >= 2");
  if (!(s >= 1.0)) {
    throw std::invalid_argument("choose_parameters: s must be >= 1");
  }
  const double step = kPi / (s * d);
  CatParams p;
  p.alpha = kSqrt10 / std::sin(step);
  p.phi = step;
  p.d = d;
  p.s = s;
  return p;
}

OverlapReport certify_quasiorthogonality(const CatParams& params,
                                         double threshold) {
  params.validate();
  OverlapReport report;
  report.params = params;
  report.threshold = threshold;

  for (int m = 0; m < params.d; ++m) {
    for (int n = m + 1; n < params.d; ++n) {
      const double value = cat_overlap_sq(m, n, params.alpha, params.phi);
      report.pair_overlaps[{m, n}] = value;
      report.max_offdiag = std::max(report.max_offdiag, value);
    }
  }
  report.passed = report.max_offdiag < threshold;

  const double abs_alpha = std::abs(params.alpha);
  const double bound = kSqrt10 / std::sin(kPi / params.d);
  report.amplitude_condition = abs_alpha >= bound * (1.0 - kInequalitySlack);
  if (abs_alpha >= kSqrt10) {
    const double theta = std::asin(std::min(1.0, kSqrt10 / abs_alpha));
    report.theta = theta;
    const double abs_phi = std::abs(params.phi);
    const double upper = (kPi - theta) / (params.d - 1);
    report.phase_condition = theta <= abs_phi + kInequalitySlack &&
                             abs_phi <= upper + kInequalitySlack;
  }
  return report;
}

std::string to_key_value(const OverlapReport& report) {
  std::ostringstream out;
  out << "d = " << report.params.d << '\n';
  out << "s = " << format_double(report.params.s) << '\n';
  out << "alpha_re = " << format_double(report.params.alpha.real()) << '\n';
  out << "alpha_im = " << format_double(report.params.alpha.imag()) << '\n';
  out << "phi = " << format_double(report.params.phi) << '\n';
  out << "threshold = " << format_double(report.threshold) << '\n';
  out << "max_offdiag = " << format_double(report.max_offdiag) << '\n';
  out << "passed = " << (report.passed ? "true" : "false") << '\n';
  out << "amplitude_condition = "
      << (report.amplitude_condition ? "true" : "false") << '\n';
  out << "phase_condition = " << (report.phase_condition ? "true" : "false")
      << '\n';
  out << "theta = "
      << (report.theta ? format_double(*report.theta) : std::string("undefined"))
      << '\n';
  return out.str();
}

std::string to_csv(const OverlapReport& report) {
  std::ostringstream out;
  out << "m,n,overlap_sq,threshold,passed\n";
  for (const auto& [key, value] : report.pair_overlaps) {
    out << key.first << ',' << key.second << ',' << format_double(value) << ','
        << format_double(report.threshold) << ','
        << (value < report.threshold ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace catqudit
