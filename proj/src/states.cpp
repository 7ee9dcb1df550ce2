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

#include "twomode/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace twomode {
namespace {

std::string fmt_complex(cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

void check_photon_numbers(int x, int y, const char* what) {
  if (x < 0 || y < 0) throw DomainError(std::string(what) + " photon numbers must be non-negative");
}

}  // namespace

void validate(const TmsnSpec& spec) {
  check_photon_numbers(spec.M, spec.N, "TMSN");
  if (!std::isfinite(spec.xi.real()) || !std::isfinite(spec.xi.imag()) || !(std::abs(spec.xi) < 1.0)) {
    throw DomainError("squeezing parameter must satisfy |xi| < 1, got |xi| = " +
                      std::to_string(std::abs(spec.xi)));
  }
}

void validate(const BsnSpec& spec) {
  check_photon_numbers(spec.n, spec.m, "BSN");
  const double a = std::abs(spec.r);
  if (!std::isfinite(a) || !(a > 0.0)) {
    throw DomainError("beamsplitter parameter must satisfy 0 < |r| < inf, got |r| = " +
                      std::to_string(a));
  }
}

void validate(const StateSpec& spec) {
  std::visit([](const auto& s) { validate(s); }, spec);
}

std::string describe(const StateSpec& spec) {
  if (const auto* t = std::get_if<TmsnSpec>(&spec)) {
    return "TMSN(M=" + std::to_string(t->M) + ", N=" + std::to_string(t->N) +
           ", xi=" + fmt_complex(t->xi) + ")";
  }
  const auto& b = std::get<BsnSpec>(spec);
  return "BSN(n=" + std::to_string(b.n) + ", m=" + std::to_string(b.m) + ", r=" + fmt_complex(b.r) +
         ")";
}

int tms_vacuum_cutoff(double abs_xi, double tail_target) {
  if (!(abs_xi >= 0.0 && abs_xi < 1.0)) throw DomainError("|xi| must lie in [0, 1)");
  if (abs_xi == 0.0) return 0;
  const double levels = std::log(tail_target) / std::log(abs_xi * abs_xi);
  int c = std::max(0, static_cast<int>(std::floor(levels)) - 1);
  while (std::pow(abs_xi, 2.0 * (c + 1)) >= tail_target) ++c;
  return c;
}

int default_cutoff(const StateSpec& spec) {
  validate(spec);
  if (const auto* t = std::get_if<TmsnSpec>(&spec)) {
    return tms_vacuum_cutoff(std::abs(t->xi)) + t->M + t->N;
  }
  const auto& b = std::get<BsnSpec>(spec);
  return b.n + b.m;
}

FockState build_tms_vacuum(cplx xi, int cutoff) {
  validate(TmsnSpec{0, 0, xi});
  if (cutoff < 0) throw DomainError("cutoff must be non-negative");
  FockState::Table t = FockState::Table::Zero(cutoff + 1, cutoff + 1);
  const double r2 = std::norm(xi);
  cplx amp = std::sqrt(1.0 - r2);
  for (int n = 0; n <= cutoff; ++n) {
    t(n, n) = amp;
    amp *= xi;
  }
  return FockState(std::move(t), std::pow(r2, cutoff + 1));
}

namespace {

// Real amplitudes of |M,N;|xi|> along its diagonal, entry q sitting at
// (M - min(M,N) + q, N - min(M,N) + q). Applying (a+ - xi* b)/s repeatedly
// cancels catastrophically for |xi| near 1, so the squeezer is used in normal
// order instead: S = exp(x a+b+) (1 - x^2)^K0 exp(-x ab) with K0 = (n_a + n_b + 1)/2.
// Each amplitude is then a sum of at most min(M, N) + 1 terms. The sequence
// runs until every term is negligible and decaying.
std::vector<double> tmsn_diagonal(const TmsnSpec& spec) {
  constexpr double kNegligible = 1e-40;
  constexpr std::size_t kMaxLength = std::size_t(1) << 22;
  const int M = spec.M, N = spec.N, lowest = std::min(M, N);
  const double x = std::abs(spec.xi), shrink = 1.0 - x * x;

  // Term k starts as exp(-x ab)|M,N> coefficient of |M-k, N-k>, scaled by (1 - x^2)^K0.
  std::vector<double> term(lowest + 1);
  double g = 1.0;
  for (int k = 0; k <= lowest; ++k) {
    if (k > 0) g *= -x * std::sqrt(double(M - k + 1) * (N - k + 1)) / k;
    term[k] = g * std::pow(shrink, 0.5 * (M + N - 2 * k + 1));
  }
  std::vector<double> diag;
  for (std::size_t q = 0; q < kMaxLength; ++q) {
    double amp = 0.0, largest = 0.0;
    bool decaying = true;
    for (int k = 0; k <= lowest; ++k) {
      const long p = long(q) - (lowest - k);
      if (p < 0) {
        decaying = false;
        continue;
      }
      const double i = M - k, j = N - k;
      if (p > 0) term[k] *= x * std::sqrt((i + p) * (j + p)) / p;
      amp += term[k];
      largest = std::max(largest, std::abs(term[k]));
      if (x * std::sqrt((i + p + 1) * (j + p + 1)) >= p + 1) decaying = false;
    }
    diag.push_back(amp);
    if (decaying && largest < kNegligible) break;
  }
  return diag;
}

constexpr int kMaxAutoCutoff = 4096;

}  // namespace

FockState build_tmsn(const TmsnSpec& spec, std::optional<int> cutoff) {
  validate(spec);
  const int excitations = spec.M + spec.N;
  const int base = std::min(spec.M, spec.N);
  const std::vector<double> diag = tmsn_diagonal(spec);

  // mass[q]: weight of diagonal entries q and beyond.
  std::vector<double> mass(diag.size() + 1, 0.0);
  for (std::size_t q = diag.size(); q-- > 0;) mass[q] = mass[q + 1] + diag[q] * diag[q];
  const auto outside = [&](int c) {
    const long first = long(c) + 1 - std::max(spec.M, spec.N) + base;  // first diagonal index past c
    if (first <= 0) return 1.0;
    return std::size_t(first) < mass.size() ? mass[first] : 0.0;
  };

  int total = cutoff.value_or(default_cutoff(spec));
  if (total < excitations) {
    throw DomainError("cutoff " + std::to_string(total) + " leaves no room for M + N = " +
                      std::to_string(excitations) + " nonlocal excitations");
  }
  while (!cutoff && outside(total) > kVacuumTailTarget && total < kMaxAutoCutoff) ++total;

  FockState::Table t = FockState::Table::Zero(total + 1, total + 1);
  const int row0 = spec.M - base, col0 = spec.N - base;
  const double theta = std::arg(spec.xi);
  for (std::size_t q = 0; q < diag.size() && row0 + int(q) <= total && col0 + int(q) <= total; ++q) {
    const int nb = col0 + int(q);
    t(row0 + q, nb) = theta == 0.0 ? cplx(diag[q]) : diag[q] * std::polar(1.0, (nb - spec.N) * theta);
  }
  const double norm = t.norm();
  return FockState(t / norm, outside(total));
}

FockState build_bsn(const BsnSpec& spec, std::optional<int> cutoff) {
  validate(spec);
  const int photons = spec.n + spec.m;
  const int c = cutoff.value_or(photons);
  if (c < photons) {
    throw DomainError("cutoff " + std::to_string(c) + " cannot hold n + m = " +
                      std::to_string(photons) + " photons");
  }
  const double s = std::sqrt(1.0 + std::norm(spec.r));
  const cplx rc = std::conj(spec.r);

  FockState psi = FockState::vacuum(c);
  for (int i = 0; i < spec.n; ++i) {
    psi = (apply_create_a(psi) - apply_create_b(psi).scaled(rc)).scaled(1.0 / s);
  }
  for (int i = 0; i < spec.m; ++i) {
    psi = (apply_create_a(psi).scaled(spec.r) + apply_create_b(psi)).scaled(1.0 / s);
  }
  psi = psi.scaled(1.0 / std::sqrt(detail::factorial(spec.n) * detail::factorial(spec.m)));
  return FockState(psi.amplitudes() / std::sqrt(psi.squared_norm()), 0.0);
}

FockState build_state(const StateSpec& spec, std::optional<int> cutoff) {
  return std::visit([&](const auto& s) -> FockState {
    using T = std::decay_t<decltype(s)>;
    if constexpr (std::is_same_v<T, TmsnSpec>) {
      return build_tmsn(s, cutoff);
    } else {
      return build_bsn(s, cutoff);
    }
  }, spec);
}

SchmidtProfile schmidt_profile(const FockState& state, double threshold) {
  const auto& t = state.amplitudes();
  Eigen::BDCSVD<FockState::Table> svd(t);
  const auto& sv = svd.singularValues();

  SchmidtProfile out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) out.coefficients.push_back(sv(i));
  }
  out.rank = static_cast<int>(out.coefficients.size());

  std::vector<std::tuple<double, int, int>> entries;
  std::vector<int> row_count(t.rows(), 0);
  std::vector<int> col_count(t.cols(), 0);
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const double a = std::abs(t(i, j));
      if (a > threshold) {
        entries.emplace_back(a, static_cast<int>(i), static_cast<int>(j));
        ++row_count[i];
        ++col_count[j];
      }
    }
  }
  const bool monomial = std::all_of(row_count.begin(), row_count.end(), [](int c) { return c <= 1; }) &&
                        std::all_of(col_count.begin(), col_count.end(), [](int c) { return c <= 1; });
  if (monomial && static_cast<int>(entries.size()) == out.rank) {
    std::stable_sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
      return std::get<1>(x) > std::get<1>(y);
    });
    for (const auto& [a, i, j] : entries) out.basis_labels.emplace_back(i, j);
  }
  return out;
}

std::pair<cplx, cplx> verify_edge_coefficients(const BsnSpec& spec) {
  validate(spec);
  const int photons = spec.n + spec.m;
  if (photons < 1) throw DomainError("edge coefficients need n + m >= 1");
  const FockState psi = build_bsn(spec);
  return {psi(photons, 0), psi(0, photons)};
}

}  // namespace twomode
