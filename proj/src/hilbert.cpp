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

#include "catqudit/hilbert.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "catqudit/text.hpp"

namespace catqudit {

namespace {

std::array<int, 3> digits_of(const SpaceSpec& space, int i) {
  return {space.qutrit_of(i), space.cav1_of(i), space.cav2_of(i)};
}

int index_of(const SpaceSpec& space, const std::array<int, 3>& digits) {
  return space.index(digits[0], digits[1], digits[2]);
}

}  // namespace

Level parse_level(char label) {
  switch (label) {
    case 'g':
      return Level::g;
    case 'e':
      return Level::e;
    case 'f':
      return Level::f;
    default:
      throw std::invalid_argument(std::string("unknown qutrit level '") +
                                  label + "'");
  }
}

char level_label(Level level) {
  constexpr std::array<char, 3> kLabels{'g', 'e', 'f'};
  return kLabels[static_cast<int>(level)];
}

int SpaceSpec::slot_dim(Slot slot) const {
  switch (slot) {
    case Slot::kQutrit:
      return kQutritLevels;
    case Slot::kCavity1:
      return n1;
    case Slot::kCavity2:
      return n2;
  }
  return 0;
}

void SpaceSpec::validate() const {
  if (n1 < 2 || n2 < 2) {
    throw std::invalid_argument("SpaceSpec: cavity truncations must be >= 2");
  }
}

OperatorMatrix::OperatorMatrix(SpaceSpec space, SparseMatrix entries)
    : space_(space), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
    throw std::invalid_argument("OperatorMatrix: dimension does not match space");
  }
  entries_.makeCompressed();
}

OperatorMatrix OperatorMatrix::zero(const SpaceSpec& space) {
  return OperatorMatrix(space, SparseMatrix(space.dim(), space.dim()));
}

OperatorMatrix OperatorMatrix::identity(const SpaceSpec& space) {
  SparseMatrix id(space.dim(), space.dim());
  id.setIdentity();
  return OperatorMatrix(space, std::move(id));
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(space_, SparseMatrix(entries_.adjoint()));
}

bool OperatorMatrix::is_zero(double tol) const {
  for (int k = 0; k < entries_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(entries_, k); it; ++it) {
      if (std::abs(it.value()) > tol) return false;
    }
  }
  return true;
}

void OperatorMatrix::require_same_space(const OperatorMatrix& other) const {
  if (!(space_ == other.space_)) {
    throw std::invalid_argument("operators live on different spaces");
  }
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  require_same_space(other);
  entries_ = entries_ + other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  require_same_space(other);
  entries_ = entries_ - other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex scale) {
  entries_ *= scale;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  a.require_same_space(b);
  return OperatorMatrix(a.space_, SparseMatrix(a.entries_ * b.entries_));
}

double frobenius_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.space() == b.space())) {
    throw std::invalid_argument("frobenius_distance: different spaces");
  }
  return SparseMatrix(a.entries() - b.entries()).norm();
}

DenseMatrix qutrit_transfer(Level from, Level to) {
  DenseMatrix m = DenseMatrix::Zero(3, 3);
  m(static_cast<int>(to), static_cast<int>(from)) = 1.0;
  return m;
}

OperatorMatrix embed(const DenseMatrix& factor, const std::vector<Slot>& slots,
                     const SpaceSpec& space) {
  space.validate();
  if (slots.empty()) throw std::invalid_argument("embed: no slots given");
  std::array<bool, 3> used{};
  int factor_dim = 1;
  for (Slot s : slots) {
    const int k = static_cast<int>(s);
    if (used[k]) throw std::invalid_argument("embed: repeated slot");
    used[k] = true;
    factor_dim *= space.slot_dim(s);
  }
  if (factor.rows() != factor_dim || factor.cols() != factor_dim) {
    throw std::invalid_argument("embed: factor dimension " +
                                std::to_string(factor.rows()) +
                                " does not match slot dimension " +
                                std::to_string(factor_dim));
  }

  // Strides of the listed slots inside the factor index, first slot slowest.
  std::vector<int> strides(slots.size());
  int stride = 1;
  for (int j = static_cast<int>(slots.size()) - 1; j >= 0; --j) {
    strides[j] = stride;
    stride *= space.slot_dim(slots[j]);
  }

  std::vector<Eigen::Triplet<Complex>> triplets;
  const int dim = space.dim();
  for (int col = 0; col < dim; ++col) {
    const auto digits = digits_of(space, col);
    int c = 0;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      c += digits[static_cast<int>(slots[j])] * strides[j];
    }
    for (int r = 0; r < factor_dim; ++r) {
      const Complex v = factor(r, c);
      if (v == Complex(0.0)) continue;
      auto row_digits = digits;
      for (std::size_t j = 0; j < slots.size(); ++j) {
        row_digits[static_cast<int>(slots[j])] =
            (r / strides[j]) % space.slot_dim(slots[j]);
      }
      triplets.emplace_back(index_of(space, row_digits), col, v);
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return OperatorMatrix(space, std::move(m));
}

OperatorMatrix embed(const DenseMatrix& factor, Slot slot,
                     const SpaceSpec& space) {
  return embed(factor, std::vector<Slot>{slot}, space);
}

OperatorMatrix cavity_lowering(Slot cavity, const SpaceSpec& space) {
  if (cavity == Slot::kQutrit) {
    throw std::invalid_argument("cavity_lowering: qutrit slot is not a cavity");
  }
  return embed(annihilation<double>(space.slot_dim(cavity)), cavity, space);
}

OperatorMatrix transition(Level from, Level to, const SpaceSpec& space) {
  return embed(qutrit_transfer(from, to), Slot::kQutrit, space);
}

OperatorMatrix projector(Level level, const SpaceSpec& space) {
  return transition(level, level, space);
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero state");
  return {space, amplitudes / n};
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return {psi.space, psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityMatrix::hermiticity_defect() const {
  return (entries - entries.adjoint()).norm();
}

double DensityMatrix::min_eigenvalue() const {
  const DenseMatrix herm = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm,
                                                    Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityCheck check_density(const DensityMatrix& rho, double herm_tol,
                           double trace_tol, double eig_tol) {
  DensityCheck c;
  c.trace_error = std::abs(rho.trace() - Complex(1.0));
  c.hermiticity_defect = rho.hermiticity_defect();
  c.min_eigenvalue = rho.min_eigenvalue();
  c.valid = c.trace_error <= trace_tol && c.hermiticity_defect <= herm_tol &&
            c.min_eigenvalue >= -eig_tol;
  return c;
}

DenseVector fock_vector(int n, int truncation) {
  if (n < 0 || n >= truncation) {
    throw std::invalid_argument("fock_vector: level outside truncation");
  }
  DenseVector v = DenseVector::Zero(truncation);
  v(n) = 1.0;
  return v;
}

StateVector product_state(Level qutrit, const DenseVector& cav1,
                          const DenseVector& cav2, const SpaceSpec& space) {
  space.validate();
  if (cav1.size() != space.n1 || cav2.size() != space.n2) {
    throw std::invalid_argument("product_state: factor sizes do not match space");
  }
  StateVector psi{space, DenseVector::Zero(space.dim())};
  const int q = static_cast<int>(qutrit);
  for (int k1 = 0; k1 < space.n1; ++k1) {
    for (int k2 = 0; k2 < space.n2; ++k2) {
      psi.amplitudes(space.index(q, k1, k2)) = cav1(k1) * cav2(k2);
    }
  }
  return psi;
}

double expectation(const OperatorMatrix& op, const StateVector& psi) {
  return psi.amplitudes.dot(op.entries() * psi.amplitudes).real();
}

double expectation(const OperatorMatrix& op, const DensityMatrix& rho) {
  return DenseMatrix(op.entries() * rho.entries).trace().real();
}

DenseMatrix reduced_density(const StateVector& psi, Slot keep) {
  const SpaceSpec& s = psi.space;
  const int k = static_cast<int>(keep);
  const int n = s.slot_dim(keep);
  DenseMatrix out = DenseMatrix::Zero(n, n);
  // Group amplitudes by the digits of the traced-out slots.
  const int dim = s.dim();
  for (int i = 0; i < dim; ++i) {
    const auto di = digits_of(s, i);
    for (int a = 0; a < n; ++a) {
      auto dj = di;
      dj[k] = a;
      const int j = index_of(s, dj);
      out(di[k], a) += psi.amplitudes(i) * std::conj(psi.amplitudes(j));
    }
  }
  return out;
}

DenseMatrix reduced_density(const DensityMatrix& rho, Slot keep) {
  const SpaceSpec& s = rho.space;
  const int k = static_cast<int>(keep);
  const int n = s.slot_dim(keep);
  DenseMatrix out = DenseMatrix::Zero(n, n);
  const int dim = s.dim();
  for (int i = 0; i < dim; ++i) {
    const auto di = digits_of(s, i);
    for (int a = 0; a < n; ++a) {
      auto dj = di;
      dj[k] = a;
      out(di[k], a) += rho.entries(i, index_of(s, dj));
    }
  }
  return out;
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(m(r, c).real()) << ' '
          << format_double(m(r, c).imag());
    }
    out << '\n';
  }
}

DenseMatrix read_matrix(std::istream& in) {
  std::string token;
  auto next = [&]() {
    if (!(in >> token)) throw std::runtime_error("read_matrix: truncated input");
    return token;
  };
  const int rows = parse_int(next());
  const int cols = parse_int(next());
  if (rows < 0 || cols < 0) {
    throw std::runtime_error("read_matrix: negative dimension");
  }
  DenseMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double re = parse_double(next());
      const double im = parse_double(next());
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace catqudit
