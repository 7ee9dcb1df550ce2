// Copyright 2026 The twomode Authors
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

#ifndef TWOMODE_FOCK_CORE_HPP
#define TWOMODE_FOCK_CORE_HPP

// Truncated two-mode Fock lattice. Everything here is templated on the real
// scalar type; the rest of the library works with the `double` aliases at the
// bottom of the file.

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace twomode {

inline constexpr int kDefaultMaxOrder = 4;
inline constexpr int kExtendedMaxOrder = 8;
inline constexpr double kDefaultTolerance = 1e-9;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingMomentError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Normally ordered monomial a†^k a^l b†^p b^q.
struct LadderMonomial {
  int k = 0;
  int l = 0;
  int p = 0;
  int q = 0;

  constexpr int order() const { return k + l + p + q; }
  constexpr bool is_identity() const { return order() == 0; }
  constexpr LadderMonomial adjoint() const { return {l, k, q, p}; }
  /// Transposition of mode B in the number basis swaps its exponents.
  constexpr LadderMonomial partial_transpose() const { return {k, l, q, p}; }

  auto operator<=>(const LadderMonomial&) const = default;
};

inline std::string to_string(const LadderMonomial& m) {
  return "(" + std::to_string(m.k) + "," + std::to_string(m.l) + "," + std::to_string(m.p) +
         "," + std::to_string(m.q) + ")";
}

inline void check_monomial(const LadderMonomial& m, int max_order) {
  if (m.k < 0 || m.l < 0 || m.p < 0 || m.q < 0) {
    throw DomainError("negative exponent in monomial " + to_string(m));
  }
  if (m.order() > max_order) {
    throw DomainError("monomial " + to_string(m) + " has order " + std::to_string(m.order()) +
                      " above the maximum " + std::to_string(max_order));
  }
}

namespace detail {

// sqrt(n (n-1) ... (n-j+1)) for n = j .. j+count-1, i.e. the matrix element
// of a^j between |n> and |n-j>.
template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, 1> falling_products(int j, int count) {
  Eigen::Array<Real, Eigen::Dynamic, 1> f(std::max(count, 0));
  for (int i = 0; i < count; ++i) {
    Real v = 1;
    for (int t = 0; t < j; ++t) v *= static_cast<Real>(i + j - t);
    f(i) = v;
  }
  return f;
}

template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, 1> lowering_factors(int j, int count) {
  return falling_products<Real>(j, count).sqrt();
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace detail

/// Complex amplitude table over {0..cutoff}^2, rows indexed by n_a and columns
/// by n_b. `tail_bound` bounds the probability mass that does not fit.
template <typename Real>
class BasicFockState {
 public:
  using RealScalar = Real;
  using Scalar = std::complex<Real>;
  using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit BasicFockState(int cutoff = 0, Real tail_bound = 0)
      : BasicFockState(Table::Zero(checked_size(cutoff), checked_size(cutoff)), tail_bound) {}

  BasicFockState(Table amplitudes, Real tail_bound)
      : amplitudes_(std::move(amplitudes)), tail_bound_(tail_bound) {
    if (amplitudes_.rows() != amplitudes_.cols() || amplitudes_.rows() < 1) {
      throw DomainError("amplitude table must be square and non-empty");
    }
    if (!(tail_bound_ >= 0)) throw DomainError("tail_bound must be non-negative");
  }

  static BasicFockState basis(int n_a, int n_b, int cutoff) {
    if (n_a < 0 || n_b < 0 || n_a > cutoff || n_b > cutoff) {
      throw DomainError("basis index outside the lattice");
    }
    BasicFockState s(cutoff);
    s.amplitudes_(n_a, n_b) = Scalar(1);
    return s;
  }

  static BasicFockState vacuum(int cutoff = 0) { return basis(0, 0, cutoff); }

  int cutoff() const { return static_cast<int>(amplitudes_.rows()) - 1; }
  Real tail_bound() const { return tail_bound_; }
  const Table& amplitudes() const { return amplitudes_; }

  Scalar operator()(int n_a, int n_b) const {
    if (n_a < 0 || n_b < 0 || n_a > cutoff() || n_b > cutoff()) return Scalar(0);
    return amplitudes_(n_a, n_b);
  }

  Real squared_norm() const { return amplitudes_.squaredNorm(); }

  BasicFockState normalized() const {
    const Real n = std::sqrt(squared_norm());
    if (!(n > 0)) throw DomainError("cannot normalize the zero vector");
    return BasicFockState(amplitudes_ / n, tail_bound_ / (n * n));
  }

  /// Zero-pads to a larger lattice. Shrinking is rejected.
  BasicFockState grown(int new_cutoff) const {
    if (new_cutoff < cutoff()) {
      throw DomainError("cannot grow cutoff from " + std::to_string(cutoff()) + " to " +
                        std::to_string(new_cutoff));
    }
    Table t = Table::Zero(new_cutoff + 1, new_cutoff + 1);
    t.topLeftCorner(amplitudes_.rows(), amplitudes_.cols()) = amplitudes_;
    return BasicFockState(std::move(t), tail_bound_);
  }

  BasicFockState scaled(Scalar factor) const {
    return BasicFockState(amplitudes_ * factor, tail_bound_ * std::norm(factor));
  }

  friend BasicFockState operator+(const BasicFockState& x, const BasicFockState& y) {
    const int c = std::max(x.cutoff(), y.cutoff());
    const BasicFockState xg = x.grown(c);
    const BasicFockState yg = y.grown(c);
    return BasicFockState(xg.amplitudes_ + yg.amplitudes_, x.tail_bound_ + y.tail_bound_);
  }

  friend BasicFockState operator-(const BasicFockState& x, const BasicFockState& y) {
    return x + y.scaled(Scalar(-1));
  }

 private:
  static Eigen::Index checked_size(int cutoff) {
    if (cutoff < 0) throw DomainError("cutoff must be non-negative");
    return static_cast<Eigen::Index>(cutoff) + 1;
  }

  Table amplitudes_;
  Real tail_bound_ = 0;
};

enum class Mode { a, b };

/// a^power (or b^power) applied to the state. Never leaks.
template <typename Real>
BasicFockState<Real> apply_annihilate(const BasicFockState<Real>& s, Mode mode, int power = 1) {
  using State = BasicFockState<Real>;
  const int c = s.cutoff();
  typename State::Table out = State::Table::Zero(c + 1, c + 1);
  const int keep = c + 1 - power;
  if (keep > 0) {
    const Eigen::Matrix<typename State::Scalar, Eigen::Dynamic, 1> f =
        detail::lowering_factors<Real>(power, keep).template cast<typename State::Scalar>().matrix();
    if (mode == Mode::a) {
      out.topRows(keep) = f.asDiagonal() * s.amplitudes().bottomRows(keep);
    } else {
      out.leftCols(keep) = s.amplitudes().rightCols(keep) * f.asDiagonal();
    }
  }
  return State(std::move(out), s.tail_bound());
}

/// a†^power (or b†^power). Amplitude pushed past the cutoff is dropped and its
/// mass is added to tail_bound.
template <typename Real>
BasicFockState<Real> apply_create(const BasicFockState<Real>& s, Mode mode, int power = 1) {
  using State = BasicFockState<Real>;
  const int c = s.cutoff();
  typename State::Table out = State::Table::Zero(c + 1, c + 1);
  const int keep = c + 1 - power;
  Real leaked = 0;
  if (keep > 0) {
    const Eigen::Matrix<typename State::Scalar, Eigen::Dynamic, 1> f =
        detail::lowering_factors<Real>(power, keep).template cast<typename State::Scalar>().matrix();
    if (mode == Mode::a) {
      out.bottomRows(keep) = f.asDiagonal() * s.amplitudes().topRows(keep);
    } else {
      out.rightCols(keep) = s.amplitudes().leftCols(keep) * f.asDiagonal();
    }
  }
  const int lost = std::min(power, c + 1);
  for (int i = 0; i < lost; ++i) {
    const int n = c - i;
    Real factor = 1;
    for (int t = 1; t <= power; ++t) factor *= static_cast<Real>(n + t);
    leaked += factor * (mode == Mode::a ? s.amplitudes().row(n).squaredNorm()
                                        : s.amplitudes().col(n).squaredNorm());
  }
  return State(std::move(out), s.tail_bound() + leaked);
}

template <typename Real>
BasicFockState<Real> apply_create_a(const BasicFockState<Real>& s) {
  return apply_create(s, Mode::a);
}
template <typename Real>
BasicFockState<Real> apply_annihilate_a(const BasicFockState<Real>& s) {
  return apply_annihilate(s, Mode::a);
}
template <typename Real>
BasicFockState<Real> apply_create_b(const BasicFockState<Real>& s) {
  return apply_create(s, Mode::b);
}
template <typename Real>
BasicFockState<Real> apply_annihilate_b(const BasicFockState<Real>& s) {
  return apply_annihilate(s, Mode::b);
}

/// <x|y>; the smaller lattice is implicitly zero-padded.
template <typename Real>
std::complex<Real> inner_product(const BasicFockState<Real>& x, const BasicFockState<Real>& y) {
  const Eigen::Index n = std::min(x.amplitudes().rows(), y.amplitudes().rows());
  return (x.amplitudes().topLeftCorner(n, n).conjugate().cwiseProduct(
              y.amplitudes().topLeftCorner(n, n)))
      .sum();
}

/// <psi| a†^k a^l b†^p b^q |psi>, evaluated as <a^k b^p psi | a^l b^q psi>
/// without forming operator matrices.
template <typename Real>
std::complex<Real> moment(const BasicFockState<Real>& s, const LadderMonomial& m,
                          int max_order = kDefaultMaxOrder) {
  check_monomial(m, max_order);
  using Scalar = std::complex<Real>;
  const int c = s.cutoff();
  const int rows = c + 1 - std::max(m.k, m.l);
  const int cols = c + 1 - std::max(m.p, m.q);
  if (rows <= 0 || cols <= 0) return Scalar(0);
  const auto& t = s.amplitudes();
  // sqrt of the product keeps diagonal weights (k == l) exact integers.
  const Eigen::Array<Real, Eigen::Dynamic, 1> row_w =
      (detail::falling_products<Real>(m.k, rows) * detail::falling_products<Real>(m.l, rows)).sqrt();
  const Eigen::Array<Real, Eigen::Dynamic, 1> col_w =
      (detail::falling_products<Real>(m.p, cols) * detail::falling_products<Real>(m.q, cols)).sqrt();
  const auto bra = t.block(m.k, m.p, rows, cols);
  const auto ket = t.block(m.l, m.q, rows, cols);
  const auto prod = bra.conjugate().cwiseProduct(ket);
  return (row_w.template cast<Scalar>().matrix().asDiagonal() * prod *
          col_w.template cast<Scalar>().matrix().asDiagonal())
      .sum();
}

/// ||a† psi||^2 - ||a psi||^2 - 1 (resp. mode b): zero for any state whose
/// support leaves one level of headroom.
template <typename Real>
Real commutator_defect(const BasicFockState<Real>& s, Mode mode) {
  const BasicFockState<Real> g = s.grown(s.cutoff() + 1);
  const Real norm = g.squared_norm();
  return (apply_create(g, mode).squared_norm() - apply_annihilate(g, mode).squared_norm()) / norm -
         Real(1);
}

enum class MomentSource { numeric, closed_form, external };

inline std::string to_string(MomentSource s) {
  switch (s) {
    case MomentSource::numeric:
      return "numeric";
    case MomentSource::closed_form:
      return "closed-form";
    case MomentSource::external:
      return "external";
  }
  return "unknown";
}

/// Expectation values of normally ordered monomials. The identity monomial is
/// implicitly 1 when absent.
template <typename Real>
class BasicMomentTable {
 public:
  using Scalar = std::complex<Real>;
  using Entries = std::map<LadderMonomial, Scalar>;

  BasicMomentTable() = default;
  explicit BasicMomentTable(Entries entries, MomentSource source = MomentSource::external)
      : entries_(std::move(entries)), source_(source) {}

  const Entries& entries() const { return entries_; }
  MomentSource source() const { return source_; }
  std::size_t size() const { return entries_.size(); }

  bool contains(const LadderMonomial& m) const {
    return m.is_identity() || entries_.count(m) > 0;
  }

  Scalar at(const LadderMonomial& m) const {
    const auto it = entries_.find(m);
    if (it != entries_.end()) return it->second;
    if (m.is_identity()) return Scalar(1);
    throw MissingMomentError("moment table has no entry for " + to_string(m));
  }

  /// Adds conj(value) for every monomial whose adjoint partner is missing.
  BasicMomentTable completed_by_conjugation() const {
    Entries e = entries_;
    for (const auto& [m, v] : entries_) e.emplace(m.adjoint(), std::conj(v));
    return BasicMomentTable(std::move(e), source_);
  }

  /// Largest |value(m) - conj(value(m†))| over stored pairs.
  Real conjugation_asymmetry() const {
    Real worst = 0;
    for (const auto& [m, v] : entries_) {
      const auto it = entries_.find(m.adjoint());
      if (it != entries_.end()) worst = std::max(worst, std::abs(v - std::conj(it->second)));
    }
    return worst;
  }

  bool is_conjugation_symmetric(Real tol = Real(kDefaultTolerance)) const {
    return conjugation_asymmetry() <= tol;
  }

 private:
  Entries entries_;
  MomentSource source_ = MomentSource::external;
};

/// Numeric moments of `s` for every requested monomial and its adjoint.
template <typename Real>
BasicMomentTable<Real> numeric_moment_table(const BasicFockState<Real>& s,
                                            const std::set<LadderMonomial>& monomials,
                                            int max_order = kDefaultMaxOrder) {
  typename BasicMomentTable<Real>::Entries e;
  for (const auto& m : monomials) {
    if (e.count(m)) continue;
    const auto v = moment(s, m, max_order);
    e[m] = v;
    if (m.adjoint() != m) e[m.adjoint()] = std::conj(v);
  }
  return BasicMomentTable<Real>(std::move(e), MomentSource::numeric);
}

/// All monomials with total order <= max_order.
inline std::set<LadderMonomial> all_monomials(int max_order) {
  std::set<LadderMonomial> out;
  for (int k = 0; k <= max_order; ++k)
    for (int l = 0; k + l <= max_order; ++l)
      for (int p = 0; k + l + p <= max_order; ++p)
        for (int q = 0; k + l + p + q <= max_order; ++q) out.insert({k, l, p, q});
  return out;
}

/// Value at the mode-B transposed monomial.
template <typename Real>
std::complex<Real> partial_transpose_moment(const BasicMomentTable<Real>& table,
                                            const LadderMonomial& m) {
  return table.at(m.partial_transpose());
}

/// Linear combination of normally ordered monomials, closed under the operator
/// product (which re-normal-orders).
template <typename Real>
class LadderPolynomial {
 public:
  using Scalar = std::complex<Real>;
  using Terms = std::map<LadderMonomial, Scalar>;

  LadderPolynomial() = default;
  LadderPolynomial(const LadderMonomial& m, Scalar c = Scalar(1)) { add(m, c); }

  static LadderPolynomial constant(Scalar c) { return LadderPolynomial(LadderMonomial{}, c); }
  static LadderPolynomial a() { return LadderMonomial{0, 1, 0, 0}; }
  static LadderPolynomial a_dag() { return LadderMonomial{1, 0, 0, 0}; }
  static LadderPolynomial b() { return LadderMonomial{0, 0, 0, 1}; }
  static LadderPolynomial b_dag() { return LadderMonomial{0, 0, 1, 0}; }

  const Terms& terms() const { return terms_; }

  int order() const {
    int o = 0;
    for (const auto& [m, c] : terms_) o = std::max(o, m.order());
    return o;
  }

  LadderPolynomial adjoint() const {
    LadderPolynomial r;
    for (const auto& [m, c] : terms_) r.add(m.adjoint(), std::conj(c));
    return r;
  }

  LadderPolynomial& operator+=(const LadderPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  LadderPolynomial& operator-=(const LadderPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend LadderPolynomial operator+(LadderPolynomial x, const LadderPolynomial& y) { return x += y; }
  friend LadderPolynomial operator-(LadderPolynomial x, const LadderPolynomial& y) { return x -= y; }
  friend LadderPolynomial operator*(Scalar s, const LadderPolynomial& x) {
    LadderPolynomial r;
    for (const auto& [m, c] : x.terms_) r.add(m, s * c);
    return r;
  }
  friend LadderPolynomial operator*(const LadderPolynomial& x, Scalar s) { return s * x; }

  friend LadderPolynomial operator*(const LadderPolynomial& x, const LadderPolynomial& y) {
    LadderPolynomial r;
    for (const auto& [mx, cx] : x.terms_) {
      for (const auto& [my, cy] : y.terms_) {
        // a-part: a†^k a^l a†^k' a^l'; b-part likewise. Each mode is normal
        // ordered with a^l a†^k' = sum_j j! C(l,j) C(k',j) a†^(k'-j) a^(l-j).
        for (int i = 0; i <= std::min(mx.l, my.k); ++i) {
          const double wa = detail::factorial(i) * detail::binomial(mx.l, i) * detail::binomial(my.k, i);
          for (int j = 0; j <= std::min(mx.q, my.p); ++j) {
            const double wb =
                detail::factorial(j) * detail::binomial(mx.q, j) * detail::binomial(my.p, j);
            r.add({mx.k + my.k - i, mx.l + my.l - i, mx.p + my.p - j, mx.q + my.q - j},
                  cx * cy * static_cast<Real>(wa * wb));
          }
        }
      }
    }
    return r;
  }

  /// Sum of coefficient times table value.
  Scalar expectation(const BasicMomentTable<Real>& table) const {
    Scalar s(0);
    for (const auto& [m, c] : terms_) s += c * table.at(m);
    return s;
  }

  std::set<LadderMonomial> monomials() const {
    std::set<LadderMonomial> out;
    for (const auto& [m, c] : terms_) out.insert(m);
    return out;
  }

 private:
  void add(const LadderMonomial& m, Scalar c) {
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  Terms terms_;
};

/// <X^2> - <X>^2 for a Hermitian polynomial X (real part).
template <typename Real>
Real variance(const LadderPolynomial<Real>& x, const BasicMomentTable<Real>& table) {
  const Real mean = x.expectation(table).real();
  return (x * x).expectation(table).real() - mean * mean;
}

/// Quadratures in the order (x_A, p_A, x_B, p_B) with x = (a + a†)/sqrt2 and
/// p = (a - a†)/(i sqrt2), so that [x, p] = i.
template <typename Real>
std::vector<LadderPolynomial<Real>> quadrature_vector() {
  using P = LadderPolynomial<Real>;
  using S = typename P::Scalar;
  const Real h = Real(1) / std::sqrt(Real(2));
  const S minus_i_h(0, -h);
  return {S(h) * (P::a() + P::a_dag()), minus_i_h * (P::a() - P::a_dag()),
          S(h) * (P::b() + P::b_dag()), minus_i_h * (P::b() - P::b_dag())};
}

/// The order <= 2 monomials a covariance matrix is built from.
inline std::set<LadderMonomial> covariance_monomials() {
  std::set<LadderMonomial> out;
  for (const auto& m : all_monomials(2)) out.insert(m);
  return out;
}

/// gamma = <R R^t + (R R^t)^t> - 2 <R><R^t> with 2x2 blocks [[A, C], [C^t, B]].
template <typename Real>
struct BasicCovarianceMatrix {
  using Matrix4 = Eigen::Matrix<Real, 4, 4>;
  using Matrix2 = Eigen::Matrix<Real, 2, 2>;

  Matrix4 gamma = Matrix4::Identity();
  /// False when gamma + i Omega has an eigenvalue below -tolerance.
  bool physical = true;

  auto A() const { return gamma.template topLeftCorner<2, 2>(); }
  auto B() const { return gamma.template bottomRightCorner<2, 2>(); }
  auto C() const { return gamma.template topRightCorner<2, 2>(); }

  static BasicCovarianceMatrix from_blocks(const Matrix2& a, const Matrix2& b, const Matrix2& c) {
    BasicCovarianceMatrix cm;
    cm.gamma << a, c, c.transpose(), b;
    return cm;
  }

  Real asymmetry() const { return (gamma - gamma.transpose()).cwiseAbs().maxCoeff(); }
};

template <typename Real>
Eigen::Matrix<Real, 4, 4> symplectic_form() {
  Eigen::Matrix<Real, 4, 4> omega = Eigen::Matrix<Real, 4, 4>::Zero();
  omega(0, 1) = omega(2, 3) = 1;
  omega(1, 0) = omega(3, 2) = -1;
  return omega;
}

/// Smallest eigenvalue of the Hermitian matrix gamma + i Omega.
template <typename Real>
Real min_uncertainty_eigenvalue(const BasicCovarianceMatrix<Real>& cm) {
  using C = std::complex<Real>;
  const Eigen::Matrix<C, 4, 4> h =
      cm.gamma.template cast<C>() + C(0, 1) * symplectic_form<Real>().template cast<C>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<C, 4, 4>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

template <typename Real>
BasicCovarianceMatrix<Real> covariance_from_moments(const BasicMomentTable<Real>& table,
                                                    Real tol = Real(kDefaultTolerance)) {
  // Unscaled quadratures sqrt2 * R keep every coefficient integral; the final
  // halving is exact, so the vacuum gives the identity bit for bit.
  using P = LadderPolynomial<Real>;
  using S = typename P::Scalar;
  const P r[4] = {P::a() + P::a_dag(), S(0, -1) * (P::a() - P::a_dag()), P::b() + P::b_dag(),
                  S(0, -1) * (P::b() - P::b_dag())};
  Eigen::Matrix<Real, 4, 1> mean;
  for (int i = 0; i < 4; ++i) mean(i) = r[i].expectation(table).real();
  BasicCovarianceMatrix<Real> cm;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const Real v = (r[i] * r[j] + r[j] * r[i]).expectation(table).real() - 2 * mean(i) * mean(j);
      cm.gamma(i, j) = cm.gamma(j, i) = v / 2;
    }
  }
  cm.physical = min_uncertainty_eigenvalue(cm) >= -tol;
  return cm;
}

template <typename Real>
BasicCovarianceMatrix<Real> covariance_matrix(const BasicFockState<Real>& s,
                                              Real tol = Real(kDefaultTolerance)) {
  return covariance_from_moments(numeric_moment_table(s, covariance_monomials(), 2), tol);
}

using FockState = BasicFockState<double>;
using MomentTable = BasicMomentTable<double>;
using CovarianceMatrix = BasicCovarianceMatrix<double>;
using Polynomial = LadderPolynomial<double>;
using cplx = std::complex<double>;

}  // namespace twomode

#endif  // TWOMODE_FOCK_CORE_HPP
