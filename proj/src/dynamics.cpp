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

#include "catqudit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <type_traits>

#include "catqudit/cat_algebra.hpp"
#include "catqudit/units.hpp"

namespace catqudit {

namespace {

using RowSparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
constexpr Complex kI(0.0, 1.0);
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tolerances beyond which a run is flagged (not aborted).
constexpr double kTraceFlag = 1e-6;
constexpr double kHermiticityFlag = 1e-8;
constexpr double kPositivityFlag = -1e-6;

// ---------------------------------------------------------------------------
// Reachable subspace.

struct Reduction {
  std::vector<int> keep;      // reduced -> full
  std::vector<int> position;  // full -> reduced, -1 if dropped
};

Reduction identity_reduction(int dim) {
  Reduction r;
  r.keep.resize(dim);
  r.position.resize(dim);
  for (int i = 0; i < dim; ++i) r.keep[i] = r.position[i] = i;
  return r;
}

Reduction reachable(const std::vector<int>& seeds,
                    const std::vector<const SparseMatrix*>& ops, int dim) {
  std::vector<char> seen(dim, 0);
  std::deque<int> queue;
  for (int s : seeds) {
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const int j = queue.front();
    queue.pop_front();
    for (const SparseMatrix* op : ops) {
      for (SparseMatrix::InnerIterator it(*op, j); it; ++it) {
        const int i = static_cast<int>(it.row());
        if (!seen[i] && it.value() != Complex(0.0)) {
          seen[i] = 1;
          queue.push_back(i);
        }
      }
    }
  }
  Reduction r;
  r.position.assign(dim, -1);
  for (int i = 0; i < dim; ++i) {
    if (seen[i]) {
      r.position[i] = static_cast<int>(r.keep.size());
      r.keep.push_back(i);
    }
  }
  return r;
}

std::vector<Eigen::Triplet<Complex>> restricted_triplets(const SparseMatrix& m,
                                                         const Reduction& r) {
  std::vector<Eigen::Triplet<Complex>> out;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const int i = r.position[it.row()];
      const int j = r.position[it.col()];
      if (i >= 0 && j >= 0 && it.value() != Complex(0.0)) {
        out.emplace_back(i, j, it.value());
      }
    }
  }
  return out;
}

RowSparse restrict_op(const SparseMatrix& m, const Reduction& r) {
  const auto t = restricted_triplets(m, r);
  const int n = static_cast<int>(r.keep.size());
  RowSparse out(n, n);
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

double max_row_sum(const RowSparse& m) {
  double best = 0.0;
  for (int i = 0; i < m.outerSize(); ++i) {
    double s = 0.0;
    for (RowSparse::InnerIterator it(m, i); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Generator on the reduced space:
//   drho/dt = -i[E + R(t), rho] + sum_j D[J_j] rho,
// with E the diagonal of the static part. The integrators work on
// v(s) = e^{iEs} rho(t_n + s) e^{-iEs}, which only sees R and the jumps.

class Generator {
 public:
  Generator(const TimeDependentHamiltonian& h,
            const std::vector<CollapseOperator>& c_ops, const Reduction& red,
            bool dissipative);

  int dim() const { return dim_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  bool has_energies() const { return has_energies_; }
  double fastest_rate() const { return fastest_; }

  /// -i R(t) - (1/2) sum J^dag J, written into k_.
  const RowSparse& effective(double t) const;

  DenseMatrix master_rhs(double t, const DenseMatrix& rho) const;
  DenseVector schrodinger_rhs(double t, const DenseVector& psi) const;
  // Allocation-free variants; `out` must already have the right shape.
  void master_rhs_into(double t, const DenseMatrix& rho, DenseMatrix& out) const;
  void schrodinger_rhs_into(double t, const DenseVector& psi,
                            DenseVector& out) const;

 private:
  struct Rot {
    Complex coefficient;
    double frequency;
    std::vector<std::pair<int, Complex>> x;   // positions in k_, values
    std::vector<std::pair<int, Complex>> xd;
  };

  int position_in_pattern(int row, int col) const;
  std::vector<std::pair<int, Complex>> scatter(const RowSparse& m) const;

  int dim_ = 0;
  Eigen::VectorXd energies_;
  bool has_energies_ = false;
  mutable RowSparse k_;
  DenseVector base_;
  std::vector<Rot> rot_;
  std::vector<RowSparse> jumps_;
  std::vector<RowSparse> jumps_adj_;
  double fastest_ = 0.0;
  mutable DenseMatrix a_, jr_;
};

Generator::Generator(const TimeDependentHamiltonian& h,
                     const std::vector<CollapseOperator>& c_ops,
                     const Reduction& red, bool dissipative)
    : dim_(static_cast<int>(red.keep.size())) {
  const RowSparse stat = restrict_op(h.static_part().entries(), red);
  energies_ = Eigen::VectorXd::Zero(dim_);
  RowSparse rest(dim_, dim_);
  {
    std::vector<Eigen::Triplet<Complex>> t;
    for (int i = 0; i < dim_; ++i) {
      for (RowSparse::InnerIterator it(stat, i); it; ++it) {
        if (it.col() == i) {
          energies_(i) = it.value().real();
        } else {
          t.emplace_back(i, static_cast<int>(it.col()), it.value());
        }
      }
    }
    rest.setFromTriplets(t.begin(), t.end());
  }
  has_energies_ = energies_.cwiseAbs().maxCoeff() > 0.0;

  std::vector<RowSparse> xs, xds;
  for (const auto& term : h.rotating_terms()) {
    xs.push_back(restrict_op(term.op.entries(), red));
    xds.push_back(RowSparse(xs.back().adjoint()));
  }
  RowSparse damping(dim_, dim_);
  if (dissipative) {
    for (const auto& c : c_ops) {
      RowSparse j = restrict_op(c.op.entries(), red) * std::sqrt(c.rate);
      damping += RowSparse(j.adjoint() * j);
      jumps_adj_.push_back(RowSparse(j.adjoint()));
      jumps_.push_back(std::move(j));
    }
  }

  // Union sparsity pattern of everything that goes into K.
  {
    std::vector<Eigen::Triplet<Complex>> t;
    auto add_pattern = [&](const RowSparse& m) {
      for (int i = 0; i < m.outerSize(); ++i) {
        for (RowSparse::InnerIterator it(m, i); it; ++it) {
          t.emplace_back(i, static_cast<int>(it.col()), Complex(1.0));
        }
      }
    };
    add_pattern(rest);
    add_pattern(damping);
    for (const auto& x : xs) add_pattern(x);
    for (const auto& x : xds) add_pattern(x);
    k_ = RowSparse(dim_, dim_);
    k_.setFromTriplets(t.begin(), t.end());
    k_.makeCompressed();
  }

  base_ = DenseVector::Zero(k_.nonZeros());
  for (const auto& [pos, v] : scatter(rest)) base_(pos) += -kI * v;
  for (const auto& [pos, v] : scatter(damping)) base_(pos) += -0.5 * v;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto& term = h.rotating_terms()[k];
    rot_.push_back({term.coefficient, term.frequency, scatter(xs[k]),
                    scatter(xds[k])});
  }

  // Fastest residual oscillation and a coupling-strength bound; the step
  // has to resolve both.
  auto osc = [&](const RowSparse& m, double shift) {
    double best = 0.0;
    for (int i = 0; i < m.outerSize(); ++i) {
      for (RowSparse::InnerIterator it(m, i); it; ++it) {
        best = std::max(best, std::abs(shift + energies_(i) -
                                       energies_(static_cast<int>(it.col()))));
      }
    }
    return best;
  };
  double freq = osc(rest, 0.0);
  double rate = max_row_sum(rest) + 0.5 * max_row_sum(damping);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    freq = std::max(freq, osc(xs[k], h.rotating_terms()[k].frequency));
    rate += std::abs(h.rotating_terms()[k].coefficient) *
            (max_row_sum(xs[k]) + max_row_sum(xds[k]));
  }
  for (const auto& j : jumps_) {
    freq = std::max(freq, 2.0 * osc(j, 0.0));
    rate += max_row_sum(j) * max_row_sum(RowSparse(j.adjoint()));
  }
  fastest_ = std::max(freq, rate);
}

int Generator::position_in_pattern(int row, int col) const {
  const auto* outer = k_.outerIndexPtr();
  const auto* inner = k_.innerIndexPtr();
  const auto* begin = inner + outer[row];
  const auto* end = inner + outer[row + 1];
  const auto* it = std::lower_bound(begin, end, col);
  return static_cast<int>(it - inner);
}

std::vector<std::pair<int, Complex>> Generator::scatter(
    const RowSparse& m) const {
  std::vector<std::pair<int, Complex>> out;
  for (int i = 0; i < m.outerSize(); ++i) {
    for (RowSparse::InnerIterator it(m, i); it; ++it) {
      out.emplace_back(position_in_pattern(i, static_cast<int>(it.col())),
                       it.value());
    }
  }
  return out;
}

const RowSparse& Generator::effective(double t) const {
  Eigen::Map<DenseVector> values(k_.valuePtr(), k_.nonZeros());
  values = base_;
  for (const auto& r : rot_) {
    const Complex c = -kI * r.coefficient * std::polar(1.0, r.frequency * t);
    const Complex cc = -kI * std::conj(r.coefficient * std::polar(1.0, r.frequency * t));
    for (const auto& [pos, v] : r.x) values(pos) += c * v;
    for (const auto& [pos, v] : r.xd) values(pos) += cc * v;
  }
  return k_;
}

DenseMatrix Generator::master_rhs(double t, const DenseMatrix& rho) const {
  DenseMatrix out(rho.rows(), rho.cols());
  master_rhs_into(t, rho, out);
  return out;
}

DenseVector Generator::schrodinger_rhs(double t, const DenseVector& psi) const {
  return effective(t) * psi;
}

void Generator::master_rhs_into(double t, const DenseMatrix& rho,
                                DenseMatrix& out) const {
  const RowSparse& k = effective(t);
  a_.resize(rho.rows(), rho.cols());
  a_.noalias() = k * rho;
  out = a_ + a_.adjoint();
  jr_.resize(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    jr_.noalias() = jumps_[i] * rho;
    out.noalias() += jr_ * jumps_adj_[i];
  }
}

void Generator::schrodinger_rhs_into(double t, const DenseVector& psi,
                                     DenseVector& out) const {
  out.noalias() = effective(t) * psi;
}

// Frame phases e^{iE s}; for matrices the conjugation is u u^dag elementwise.
DenseVector frame_vector(const Generator& g, double s) {
  DenseVector u(g.dim());
  for (int i = 0; i < g.dim(); ++i) u(i) = std::polar(1.0, g.energies()(i) * s);
  return u;
}

struct MatrixFrame {
  DenseMatrix p;
  MatrixFrame(const Generator& g, double s) {
    if (!g.has_energies()) return;
    const DenseVector u = frame_vector(g, s);
    p = u * u.adjoint();
  }
  void to_frame(DenseMatrix& x) const {
    if (p.size() > 0) x.array() *= p.array();
  }
  void from_frame(DenseMatrix& x) const {
    if (p.size() > 0) x.array() *= p.array().conjugate();
  }
};

struct VectorFrame {
  DenseVector u;
  VectorFrame(const Generator& g, double s) {
    if (g.has_energies()) u = frame_vector(g, s);
  }
  void to_frame(DenseVector& x) const {
    if (u.size() > 0) x.array() *= u.array();
  }
  void from_frame(DenseVector& x) const {
    if (u.size() > 0) x.array() *= u.array().conjugate();
  }
};

struct MasterSystem {
  using State = DenseMatrix;
  using Frame = MatrixFrame;
  const Generator& g;
  State rhs(double t, const State& x) const { return g.master_rhs(t, x); }
  void rhs_into(double t, const State& x, State& out) const {
    g.master_rhs_into(t, x, out);
  }
};

struct SchrodingerSystem {
  using State = DenseVector;
  using Frame = VectorFrame;
  const Generator& g;
  State rhs(double t, const State& x) const { return g.schrodinger_rhs(t, x); }
  void rhs_into(double t, const State& x, State& out) const {
    g.schrodinger_rhs_into(t, x, out);
  }
};

// Derivative of the frame variable at local offset s, anchored at t.
template <class System>
typename System::State frame_rhs(const System& sys,
                                 const typename System::Frame& frame, double t,
                                 double s, typename System::State v) {
  frame.from_frame(v);
  typename System::State n = sys.rhs(t + s, v);
  frame.to_frame(n);
  return n;
}

template <class State>
bool all_finite(const State& x) {
  return x.allFinite();
}

// One classical RK4 step of the frame variable; frames for h/2 and h are
// supplied by the caller since h is fixed within a segment.
template <class State>
struct Rk4Workspace {
  State k1, k2, k3, k4, tmp;
  explicit Rk4Workspace(const State& like)
      : k1(like), k2(like), k3(like), k4(like), tmp(like) {}
};

template <class System>
void rk4_step(const System& sys, const typename System::Frame& half,
              const typename System::Frame& full, double t, double h,
              typename System::State& x,
              Rk4Workspace<typename System::State>& w) {
  sys.rhs_into(t, x, w.k1);
  w.tmp = x + (0.5 * h) * w.k1;
  half.from_frame(w.tmp);
  sys.rhs_into(t + 0.5 * h, w.tmp, w.k2);
  half.to_frame(w.k2);
  w.tmp = x + (0.5 * h) * w.k2;
  half.from_frame(w.tmp);
  sys.rhs_into(t + 0.5 * h, w.tmp, w.k3);
  half.to_frame(w.k3);
  w.tmp = x + h * w.k3;
  full.from_frame(w.tmp);
  sys.rhs_into(t + h, w.tmp, w.k4);
  full.to_frame(w.k4);
  x += (h / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
  full.from_frame(x);
}

template <class State>
double error_norm(const State& err, const State& y0, const State& y1,
                  double abs_tol, double rel_tol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale =
        abs_tol + rel_tol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
    worst = std::max(worst, std::abs(err.data()[i]) / scale);
  }
  return worst;
}

// Dormand-Prince 5(4). Returns the error estimate; x is advanced only when
// the step is accepted (err <= 1).
template <class System>
double dopri_step(const System& sys, const Generator& g, double t, double h,
                  typename System::State& x, const IntegratorConfig& cfg) {
  using State = typename System::State;
  using Frame = typename System::Frame;
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  static constexpr double e[7] = {
      35.0 / 384 - 5179.0 / 57600,   0.0,
      500.0 / 1113 - 7571.0 / 16695, 125.0 / 192 - 393.0 / 640,
      -2187.0 / 6784 + 92097.0 / 339200, 11.0 / 84 - 187.0 / 2100,
      -1.0 / 40};

  std::vector<State> k(7);
  k[0] = sys.rhs(t, x);
  State y5;
  for (int i = 1; i < 7; ++i) {
    State xi = x;
    for (int j = 0; j < i; ++j) {
      if (a[i][j] != 0.0) xi += (h * a[i][j]) * k[j];
    }
    if (i == 6) y5 = xi;
    const Frame frame(g, c[i] * h);
    k[i] = frame_rhs(sys, frame, t, c[i] * h, std::move(xi));
  }
  State err = State::Zero(x.rows(), x.cols());
  for (int i = 0; i < 7; ++i) {
    if (e[i] != 0.0) err += (h * e[i]) * k[i];
  }
  const double norm = error_norm(err, x, y5, cfg.abs_tol, cfg.rel_tol);
  if (norm <= 1.0) {
    const Frame frame(g, h);
    frame.from_frame(y5);
    x = std::move(y5);
  }
  return norm;
}

// ---------------------------------------------------------------------------
// Observables on the reduced space.

struct Observables {
  const SpaceSpec& space;
  const Reduction& red;
  DenseVector target;  // restricted, empty when absent

  Sample sample(double t, const DenseVector& diag, double fid) const {
    Sample s;
    s.t = t;
    s.fidelity = fid;
    double pops[3] = {0.0, 0.0, 0.0};
    double trace = 0.0;
    for (int i = 0; i < diag.size(); ++i) {
      const double p = diag(i).real();
      const int full = red.keep[i];
      trace += p;
      pops[space.qutrit_of(full)] += p;
      s.cav1_n += p * space.cav1_of(full);
      s.cav2_n += p * space.cav2_of(full);
    }
    s.trace = trace;
    s.qutrit_g_pop = pops[0];
    s.qutrit_e_pop = pops[1];
    s.qutrit_f_pop = pops[2];
    return s;
  }

  Sample of(double t, const DenseMatrix& rho) const {
    double fid = kNaN;
    if (target.size() > 0) {
      const double v = target.dot(rho * target).real();
      fid = std::sqrt(std::clamp(v, 0.0, 1.0));
    }
    return sample(t, rho.diagonal(), fid);
  }

  Sample of(double t, const DenseVector& psi) const {
    double fid = kNaN;
    if (target.size() > 0) fid = std::min(1.0, std::abs(target.dot(psi)));
    return sample(t, psi.cwiseAbs2().cast<Complex>(), fid);
  }
};

void record(Diagnostics& d, const Sample& s, double herm, double min_eig) {
  d.min_trace = std::min(d.min_trace, s.trace);
  d.max_trace_error = std::max(d.max_trace_error, std::abs(s.trace - 1.0));
  d.max_hermiticity_defect = std::max(d.max_hermiticity_defect, herm);
  d.max_excited_population =
      std::max(d.max_excited_population, s.qutrit_e_pop + s.qutrit_f_pop);
  if (!std::isnan(min_eig)) {
    d.min_eigenvalue = std::isnan(d.min_eigenvalue)
                           ? min_eig
                           : std::min(d.min_eigenvalue, min_eig);
  }
}

void finalize_flags(Diagnostics& d) {
  std::string msg;
  if (d.max_trace_error > kTraceFlag) msg += "trace drift; ";
  if (d.max_hermiticity_defect > kHermiticityFlag) msg += "hermiticity defect; ";
  if (!std::isnan(d.min_eigenvalue) && d.min_eigenvalue < kPositivityFlag) {
    msg += "positivity violation; ";
  }
  if (!msg.empty()) {
    d.flagged = true;
    d.message += msg;
  }
}

double min_eigenvalue(const DenseMatrix& rho) {
  DensityMatrix tmp{SpaceSpec{}, rho};
  return tmp.min_eigenvalue();
}

template <class System>
struct Driver {
  using State = typename System::State;

  const System& sys;
  const Generator& g;
  const Observables& obs;
  const IntegratorConfig& cfg;
  const Observers& observers;
  EvolutionResult& result;

  void observe(double t, const State& x) {
    const Sample s = obs.of(t + observers.time_offset, x);
    double herm = 0.0;
    double eig = kNaN;
    if constexpr (std::is_same_v<State, DenseMatrix>) {
      herm = (x - x.adjoint()).norm();
      if (cfg.check_positivity) eig = min_eigenvalue(x);
    }
    record(result.diagnostics, s, herm, eig);
    if (cfg.samples > 0) result.trajectory.push_back(s);
  }

  void run(State& x, double t0, double t1) {
    const double span = t1 - t0;
    const int segments = std::max(1, cfg.samples - 1);
    const double nominal =
        g.fastest_rate() > 0.0
            ? std::min(cfg.max_step,
                       kTwoPi / (g.fastest_rate() * cfg.steps_per_fastest_period))
            : cfg.max_step;
    const long total_estimate =
        span > 0.0 ? static_cast<long>(std::ceil(span / nominal)) : 0;
    const long report_every = std::max<long>(1, total_estimate / 100);

    observe(t0, x);
    if (span <= 0.0) return;

    double t = t0;
    double h_adaptive = nominal;
    for (int seg = 0; seg < segments; ++seg) {
      const double seg_end = t0 + span * (seg + 1) / segments;
      if (cfg.method == Method::kRk4) {
        const long n = std::max<long>(
            1, static_cast<long>(std::ceil((seg_end - t) / nominal - 1e-9)));
        const double h = (seg_end - t) / n;
        const typename System::Frame half(g, 0.5 * h), full(g, h);
        Rk4Workspace<State> work(x);
        for (long i = 0; i < n; ++i) {
          rk4_step(sys, half, full, t, h, x, work);
          t = (i + 1 == n) ? seg_end : t + h;
          ++result.diagnostics.steps;
          result.diagnostics.last_step = h;
          if (observers.progress && result.diagnostics.steps % report_every == 0) {
            observers.progress(std::min(1.0, (t - t0) / span));
          }
        }
        if (!all_finite(x)) throw IntegrationError("state became non-finite");
      } else {
        while (t < seg_end) {
          double h = std::min({h_adaptive, cfg.max_step, seg_end - t});
          if (h < 1e-14 * span || h < 1e-20) {
            throw IntegrationError("step size underflow at t = " +
                                   std::to_string(t));
          }
          const double err = dopri_step(sys, g, t, h, x, cfg);
          if (!std::isfinite(err)) {
            throw IntegrationError("non-finite error estimate");
          }
          const double factor =
              err == 0.0 ? 5.0
                         : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
          if (err <= 1.0) {
            t = (seg_end - t - h <= 1e-15 * span) ? seg_end : t + h;
            ++result.diagnostics.steps;
            result.diagnostics.last_step = h;
            if (observers.progress &&
                result.diagnostics.steps % report_every == 0) {
              observers.progress(std::min(1.0, (t - t0) / span));
            }
          }
          h_adaptive = h * factor;
        }
      }
      if (cfg.samples > 0) {
        observe(t, x);
      }
    }
    if (cfg.samples == 0) observe(t, x);
    if (observers.progress) observers.progress(1.0);
  }
};

Reduction make_reduction(const std::vector<int>& seeds,
                         const TimeDependentHamiltonian& h,
                         const std::vector<CollapseOperator>& c_ops,
                         bool use_collapse, bool enabled) {
  const int dim = h.space().dim();
  if (!enabled) return identity_reduction(dim);
  std::vector<SparseMatrix> owned;
  owned.push_back(h.static_part().entries());
  for (const auto& r : h.rotating_terms()) {
    owned.push_back(r.op.entries());
    owned.push_back(SparseMatrix(r.op.entries().adjoint()));
  }
  if (use_collapse) {
    for (const auto& c : c_ops) {
      owned.push_back(c.op.entries());
      owned.push_back(SparseMatrix(c.op.entries().adjoint() * c.op.entries()));
    }
  }
  std::vector<const SparseMatrix*> ptrs;
  for (const auto& m : owned) ptrs.push_back(&m);
  return reachable(seeds, ptrs, dim);
}

DenseVector restrict_vector(const DenseVector& full, const Reduction& red) {
  DenseVector out(red.keep.size());
  for (std::size_t i = 0; i < red.keep.size(); ++i) out(i) = full(red.keep[i]);
  return out;
}

void require_space(const SpaceSpec& a, const SpaceSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": space mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------

void IntegratorConfig::validate() const {
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be > 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be > 0");
  }
  if (steps_per_fastest_period < 20) {
    throw std::invalid_argument("steps_per_fastest_period must be >= 20");
  }
  if (samples < 0 || samples == 1) {
    throw std::invalid_argument("samples must be 0 or >= 2");
  }
}

void Diagnostics::merge(const Diagnostics& o) {
  min_trace = std::min(min_trace, o.min_trace);
  max_trace_error = std::max(max_trace_error, o.max_trace_error);
  max_hermiticity_defect =
      std::max(max_hermiticity_defect, o.max_hermiticity_defect);
  if (std::isnan(min_eigenvalue)) {
    min_eigenvalue = o.min_eigenvalue;
  } else if (!std::isnan(o.min_eigenvalue)) {
    min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
  }
  max_excited_population =
      std::max(max_excited_population, o.max_excited_population);
  steps += o.steps;
  last_step = o.last_step;
  integrated_dim = std::max(integrated_dim, o.integrated_dim);
  flagged = flagged || o.flagged;
  message += o.message;
}

TimeDependentHamiltonian::TimeDependentHamiltonian(const SpaceSpec& space)
    : space_(space), static_(OperatorMatrix::zero(space)) {}

TimeDependentHamiltonian TimeDependentHamiltonian::from(
    const HamiltonianSpec& spec) {
  spec.validate();
  TimeDependentHamiltonian h(spec.space);
  for (const auto& t : spec.static_terms) h.static_ += t.coefficient * t.op;
  h.static_ = 0.5 * (h.static_ + h.static_.adjoint());
  for (const auto& t : spec.harmonic_terms) {
    if (t.coupling == 0.0) continue;
    h.rotating_.push_back({Complex(t.coupling), t.h.adjoint(), t.omega, t.label});
  }
  return h;
}

TimeDependentHamiltonian TimeDependentHamiltonian::from(
    const EffectiveSpec& spec) {
  return from(to_hamiltonian_spec(spec));
}

TimeDependentHamiltonian& TimeDependentHamiltonian::append(
    const TimeDependentHamiltonian& other) {
  require_space(space_, other.space_, "TimeDependentHamiltonian::append");
  static_ += other.static_;
  rotating_.insert(rotating_.end(), other.rotating_.begin(),
                   other.rotating_.end());
  return *this;
}

OperatorMatrix TimeDependentHamiltonian::at(double t) const {
  OperatorMatrix h = static_;
  for (const auto& r : rotating_) {
    const Complex c = r.coefficient * std::polar(1.0, r.frequency * t);
    h += c * r.op;
    h += std::conj(c) * r.op.adjoint();
  }
  return h;
}

EvolutionResult evolve_master(const DensityMatrix& rho0,
                              const TimeDependentHamiltonian& h,
                              const std::vector<CollapseOperator>& c_ops,
                              double t0, double t1,
                              const IntegratorConfig& cfg,
                              const Observers& observers) {
  cfg.validate();
  require_space(rho0.space, h.space(), "evolve_master");
  for (const auto& c : c_ops) require_space(c.op.space(), h.space(), "evolve_master");
  if (t1 < t0) throw std::invalid_argument("evolve_master: t1 < t0");

  const int dim = h.space().dim();
  std::vector<int> seeds;
  for (int i = 0; i < dim; ++i) {
    if (rho0.entries.row(i).cwiseAbs().maxCoeff() > 0.0) seeds.push_back(i);
  }
  const Reduction red =
      make_reduction(seeds, h, c_ops, true, cfg.reduce_to_reachable);
  const Generator gen(h, c_ops, red, true);

  DenseMatrix x(red.keep.size(), red.keep.size());
  for (std::size_t i = 0; i < red.keep.size(); ++i) {
    for (std::size_t j = 0; j < red.keep.size(); ++j) {
      x(i, j) = rho0.entries(red.keep[i], red.keep[j]);
    }
  }

  Observables obs{h.space(), red, {}};
  if (observers.target) {
    require_space(observers.target->space, h.space(), "evolve_master target");
    obs.target = restrict_vector(observers.target->amplitudes, red);
  }

  EvolutionResult result;
  result.diagnostics.min_eigenvalue = kNaN;
  result.diagnostics.integrated_dim = gen.dim();
  const MasterSystem sys{gen};
  Driver<MasterSystem>{sys, gen, obs, cfg, observers, result}.run(x, t0, t1);

  DensityMatrix out{h.space(), DenseMatrix::Zero(dim, dim)};
  for (std::size_t i = 0; i < red.keep.size(); ++i) {
    for (std::size_t j = 0; j < red.keep.size(); ++j) {
      out.entries(red.keep[i], red.keep[j]) = x(i, j);
    }
  }
  result.rho = std::move(out);
  finalize_flags(result.diagnostics);
  return result;
}

EvolutionResult evolve_unitary(const StateVector& psi0,
                               const TimeDependentHamiltonian& h, double t0,
                               double t1, const IntegratorConfig& cfg,
                               const Observers& observers) {
  cfg.validate();
  require_space(psi0.space, h.space(), "evolve_unitary");
  if (t1 < t0) throw std::invalid_argument("evolve_unitary: t1 < t0");

  const int dim = h.space().dim();
  std::vector<int> seeds;
  for (int i = 0; i < dim; ++i) {
    if (psi0.amplitudes(i) != Complex(0.0)) seeds.push_back(i);
  }
  const Reduction red = make_reduction(seeds, h, {}, false, cfg.reduce_to_reachable);
  const Generator gen(h, {}, red, false);

  DenseVector x = restrict_vector(psi0.amplitudes, red);
  Observables obs{h.space(), red, {}};
  if (observers.target) {
    require_space(observers.target->space, h.space(), "evolve_unitary target");
    obs.target = restrict_vector(observers.target->amplitudes, red);
  }

  EvolutionResult result;
  result.diagnostics.min_eigenvalue = kNaN;
  result.diagnostics.integrated_dim = gen.dim();
  const SchrodingerSystem sys{gen};
  Driver<SchrodingerSystem>{sys, gen, obs, cfg, observers, result}.run(x, t0, t1);

  StateVector out{h.space(), DenseVector::Zero(dim)};
  for (std::size_t i = 0; i < red.keep.size(); ++i) out.amplitudes(red.keep[i]) = x(i);
  result.psi = std::move(out);
  finalize_flags(result.diagnostics);
  return result;
}

StateVector closed_form_step1(const DenseVector& weights, Complex alpha,
                              double lambda1, double chi, double tau,
                              const SpaceSpec& space) {
  if (tau < 0.0) throw std::invalid_argument("closed_form_step1: tau < 0");
  if (weights.size() > space.n1) {
    throw std::invalid_argument("closed_form_step1: more weights than cavity-1 levels");
  }
  StateVector out{space, DenseVector::Zero(space.dim())};
  for (int n = 0; n < weights.size(); ++n) {
    if (weights(n) == Complex(0.0)) continue;
    const Complex phase = std::polar(1.0, -(lambda1 + chi) * n * tau);
    const DenseVector cat = cat_fock<double>(alpha, n, -chi * tau, space.n2);
    out.amplitudes += product_state(Level::g, weights(n) * phase * fock_vector(n, space.n1),
                                    cat, space)
                          .amplitudes;
  }
  return out;
}

StateVector closed_form_step2(const StateVector& state, double lambda1_tilde,
                              double tau) {
  StateVector out = state;
  const SpaceSpec& s = state.space;
  for (int k1 = 0; k1 < s.n1; ++k1) {
    const Complex phase = std::polar(1.0, lambda1_tilde * k1 * tau);
    for (int k2 = 0; k2 < s.n2; ++k2) out.amplitudes(s.index(0, k1, k2)) *= phase;
  }
  return out;
}

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  require_space(rho.space, psi.space, "fidelity");
  const double v = psi.amplitudes.dot(rho.entries * psi.amplitudes).real();
  return std::sqrt(std::clamp(v, 0.0, 1.0));
}

double fidelity(const StateVector& phi, const StateVector& psi) {
  require_space(phi.space, psi.space, "fidelity");
  return std::min(1.0, std::abs(psi.amplitudes.dot(phi.amplitudes)));
}

}  // namespace catqudit
