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

#ifndef CATQUDIT_HILBERT_HPP
#define CATQUDIT_HILBERT_HPP

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace catqudit {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class Slot { kQutrit = 0, kCavity1 = 1, kCavity2 = 2 };

enum class Level { g = 0, e = 1, f = 2 };

/// 'g', 'e' or 'f'; throws std::invalid_argument otherwise.
Level parse_level(char label);
char level_label(Level level);

/// Qutrit (x) cavity 1 (x) cavity 2. Basis index is (q * n1 + k1) * n2 + k2,
/// i.e. the qutrit is the slowest index and cavity 2 the fastest. Every
/// matrix, state and serialized file in the library uses this ordering.
struct SpaceSpec {
  static constexpr int kQutritLevels = 3;
  int n1 = 2;
  int n2 = 2;

  int dim() const { return kQutritLevels * n1 * n2; }
  int slot_dim(Slot slot) const;
  int index(int q, int k1, int k2) const { return (q * n1 + k1) * n2 + k2; }
  int qutrit_of(int i) const { return i / (n1 * n2); }
  int cav1_of(int i) const { return (i / n2) % n1; }
  int cav2_of(int i) const { return i % n2; }

  void validate() const;
  bool operator==(const SpaceSpec&) const = default;
};

/// Operator on the full space. Entries are stored sparse because every
/// operator in the model is a product of ladder and transition factors.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(SpaceSpec space, SparseMatrix entries);

  static OperatorMatrix zero(const SpaceSpec& space);
  static OperatorMatrix identity(const SpaceSpec& space);

  const SpaceSpec& space() const { return space_; }
  const SparseMatrix& entries() const { return entries_; }
  DenseMatrix dense() const { return DenseMatrix(entries_); }
  int dim() const { return static_cast<int>(entries_.rows()); }

  OperatorMatrix adjoint() const;
  double frobenius_norm() const { return entries_.norm(); }
  bool is_zero(double tol = 0.0) const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(Complex scale);

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) {
    return a += b;
  }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) {
    return a -= b;
  }
  friend OperatorMatrix operator*(Complex s, OperatorMatrix a) {
    return a *= s;
  }
  friend OperatorMatrix operator*(OperatorMatrix a, Complex s) {
    return a *= s;
  }
  friend OperatorMatrix operator*(const OperatorMatrix& a,
                                  const OperatorMatrix& b);

 private:
  void require_same_space(const OperatorMatrix& other) const;

  SpaceSpec space_;
  SparseMatrix entries_;
};

/// ||a - b||_F.
double frobenius_distance(const OperatorMatrix& a, const OperatorMatrix& b);

/// Single-mode lowering operator with <n-1|a|n> = sqrt(n).
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
annihilation(int truncation) {
  if (truncation < 2) {
    throw std::invalid_argument("annihilation: truncation must be >= 2");
  }
  using Matrix =
      Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix a = Matrix::Zero(truncation, truncation);
  for (int n = 1; n < truncation; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<Scalar>(n));
  }
  return a;
}

/// 3x3 factor |to><from|; from == to gives the projector.
DenseMatrix qutrit_transfer(Level from, Level to);

/// factor (x) identity on the other slots. `slots` lists the slots the factor
/// acts on, first entry slowest; the factor dimension must equal the product
/// of their dimensions.
OperatorMatrix embed(const DenseMatrix& factor, const std::vector<Slot>& slots,
                     const SpaceSpec& space);
OperatorMatrix embed(const DenseMatrix& factor, Slot slot,
                     const SpaceSpec& space);

// Shorthands for the operators every model term is built from.
OperatorMatrix cavity_lowering(Slot cavity, const SpaceSpec& space);
OperatorMatrix transition(Level from, Level to, const SpaceSpec& space);
OperatorMatrix projector(Level level, const SpaceSpec& space);

struct StateVector {
  SpaceSpec space;
  DenseVector amplitudes;

  double norm() const { return amplitudes.norm(); }
  StateVector normalized() const;
};

struct DensityMatrix {
  SpaceSpec space;
  DenseMatrix entries;

  static DensityMatrix from_pure(const StateVector& psi);
  Complex trace() const { return entries.trace(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;
};

/// Tolerances a normalized density matrix must meet.
struct DensityCheck {
  double trace_error = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool valid = false;
};
DensityCheck check_density(const DensityMatrix& rho, double herm_tol = 1e-10,
                           double trace_tol = 1e-8, double eig_tol = 1e-8);

/// |q> (x) cav1 (x) cav2 from single-mode coefficient vectors.
StateVector product_state(Level qutrit, const DenseVector& cav1,
                          const DenseVector& cav2, const SpaceSpec& space);

DenseVector fock_vector(int n, int truncation);

double expectation(const OperatorMatrix& op, const StateVector& psi);
double expectation(const OperatorMatrix& op, const DensityMatrix& rho);

/// Reduced density matrix of one slot.
DenseMatrix reduced_density(const StateVector& psi, Slot keep);
DenseMatrix reduced_density(const DensityMatrix& rho, Slot keep);

/// Plain-text matrix format: a `rows cols` header line, then one line per
/// row of `re im` pairs, round-trip precision, '.' decimal separator.
void write_matrix(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& in);

}  // namespace catqudit

#endif  // CATQUDIT_HILBERT_HPP
