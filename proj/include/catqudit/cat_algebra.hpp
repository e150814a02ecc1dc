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

#ifndef CATQUDIT_CAT_ALGEBRA_HPP
#define CATQUDIT_CAT_ALGEBRA_HPP

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace catqudit {

template <typename Scalar>
using FockVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Thrown when a Fock truncation cannot hold a coherent amplitude to the
/// required tail accuracy. Carries the truncation that would.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_(suggested) {}
  int suggested_truncation() const { return suggested_; }

 private:
  int suggested_;
};

/// Poisson tail mass allowed beyond a cat/coherent-state truncation.
inline constexpr double kFockTailTolerance = 1e-12;

/// Default working threshold on pairwise squared cat overlaps.
inline constexpr double kQuasiorthogonalityThreshold = 4e-4;

/// Amplitude, phase step and qudit shape of a cat-state qudit
/// |C_n> = |alpha e^{i n phi}> + |-alpha e^{i n phi}>, n = 0..d-1.
struct CatParams {
  std::complex<double> alpha;
  double phi = 0.0;
  int d = 2;
  double s = 1.0;

  void validate() const;
};

/// <beta|gamma> for coherent states.
template <typename Scalar>
std::complex<Scalar> coherent_overlap(std::complex<Scalar> beta,
                                      std::complex<Scalar> gamma) {
  return std::exp(-std::norm(beta) / Scalar(2) - std::norm(gamma) / Scalar(2) +
                  std::conj(beta) * gamma);
}

/// Closed-form |<C_m|C_n>|^2 for the unnormalized cats.
template <typename Scalar>
Scalar cat_overlap_sq(int m, int n, std::complex<Scalar> alpha, Scalar phi) {
  if (m < 0 || n < 0) {
    throw std::invalid_argument("cat_overlap_sq: indices must be non-negative");
  }
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar x = std::norm(alpha);
  const Scalar theta = Scalar(n - m) * phi;
  const Scalar a = Scalar(2) - Scalar(2) * cos(theta);
  const Scalar b = Scalar(2) + Scalar(2) * cos(theta);
  return Scalar(4) * (exp(-a * x) + exp(-b * x) +
                      Scalar(2) * exp(-Scalar(2) * x) *
                          cos(Scalar(2) * x * sin(theta)));
}

/// ceil(|alpha|^2 + 8|alpha| + 10); keeps the Poisson tail below 1e-12.
int fock_truncation(double abs_alpha);

/// P(K >= truncation) for K ~ Poisson(mean).
double poisson_tail(double mean, int truncation);

/// Throws TruncationError if `truncation` levels leave more than
/// kFockTailTolerance of |beta|'s photon distribution outside.
void require_truncation(double abs_beta, int truncation);

/// Fock coefficients of the coherent state |beta> on `truncation` levels.
template <typename Scalar>
FockVector<Scalar> coherent_fock(std::complex<Scalar> beta, int truncation) {
  FockVector<Scalar> out = FockVector<Scalar>::Zero(truncation);
  const Scalar r = std::abs(beta);
  if (r == Scalar(0)) {
    out(0) = Scalar(1);
    return out;
  }
  using std::exp;
  using std::lgamma;
  using std::log;
  const Scalar log_r = log(r);
  const Scalar arg = std::arg(beta);
  for (int k = 0; k < truncation; ++k) {
    const Scalar mag = exp(-r * r / Scalar(2) + Scalar(k) * log_r -
                           lgamma(Scalar(k + 1)) / Scalar(2));
    out(k) = std::polar(mag, Scalar(k) * arg);
  }
  return out;
}

/// Unnormalized |C_n> = |beta> + |-beta>, beta = alpha e^{i n phi}.
/// Odd coefficients cancel exactly.
template <typename Scalar>
FockVector<Scalar> cat_fock(std::complex<Scalar> alpha, int phase_index,
                            Scalar phi, int truncation) {
  const std::complex<Scalar> beta =
      alpha * std::polar(Scalar(1), Scalar(phase_index) * phi);
  require_truncation(static_cast<double>(std::abs(beta)), truncation);
  FockVector<Scalar> out = coherent_fock(beta, truncation);
  for (int k = 1; k < truncation; k += 2) out(k) = Scalar(0);
  out *= Scalar(2);
  return out;
}

/// cat_fock scaled to unit norm.
template <typename Scalar>
FockVector<Scalar> cat_fock_normalized(std::complex<Scalar> alpha,
                                       int phase_index, Scalar phi,
                                       int truncation) {
  FockVector<Scalar> out = cat_fock(alpha, phase_index, phi, truncation);
  out.normalize();
  return out;
}

/// alpha = sqrt(10) / sin(pi / (s d)), phi = pi / (s d).
CatParams choose_parameters(int d, double s);

struct OverlapReport {
  CatParams params;
  /// Keyed by (m, n) with m < n.
  std::map<std::pair<int, int>, double> pair_overlaps;
  double max_offdiag = 0.0;
  double threshold = kQuasiorthogonalityThreshold;
  bool passed = false;

  /// |alpha| >= sqrt(10) / sin(pi / d).
  bool amplitude_condition = false;
  /// theta <= |phi| <= (pi - theta) / (d - 1); false when theta is undefined.
  bool phase_condition = false;
  /// arcsin(sqrt(10) / |alpha|); empty when |alpha| < sqrt(10).
  std::optional<double> theta;
};

OverlapReport certify_quasiorthogonality(
    const CatParams& params, double threshold = kQuasiorthogonalityThreshold);

/// Flat `key = value` block, one entry per line.
std::string to_key_value(const OverlapReport& report);

/// Header `m,n,overlap_sq,threshold,passed` then one row per pair.
std::string to_csv(const OverlapReport& report);

}  // namespace catqudit

#endif  // CATQUDIT_CAT_ALGEBRA_HPP
