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

#ifndef TWOMODE_CLOSED_FORM_HPP
#define TWOMODE_CLOSED_FORM_HPP

// Analytic expressions for both state families, transcribed verbatim from their reference forms.
// Nothing here touches the Fock lattice; the numeric engine checks these.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "twomode/fock_core.hpp"
#include "twomode/states.hpp"

namespace twomode::closed_form {

inline constexpr double kBoundaryGuard = 1e-12;

CovarianceMatrix tmsn_covariance(int M, int N, cplx xi);

/// D = (4/(1-|xi|^2))^2 [(1+N)(1+M)|xi|^2 - NM] [MN|xi|^2 - (1+N)(1+M)].
double tmsn_simon_D(int M, int N, cplx xi);

/// Both sides of (M - t)(N - t) < |xi|^2/(1-|xi|^2)^2 with t = |xi|^2/(1-|xi|^2).
struct Inequality {
  double lhs = 0.0;
  double rhs = 0.0;
  /// Strict, with a relative guard so that cells on the exact boundary
  /// (where rounding decides the sign) count as not holding.
  bool holds() const {
    return lhs < rhs - kBoundaryGuard * std::max({std::abs(lhs), std::abs(rhs), 1.0});
  }
  double margin() const { return lhs - rhs; }
};

Inequality tmsn_detectability(int M, int N, cplx xi);
bool tmsn_detectable(int M, int N, cplx xi);

CovarianceMatrix bsn_covariance(int n, int m, cplx r);

/// D = 16/(1+|r|^2)^2 (m(1+n) + (1+m)n|r|^2) ((1+m)n + m(1+n)|r|^2).
double bsn_simon_D(int n, int m, cplx r);

/// (<a†a b†b>, <a b†>) in its reference form. The first entry is known to disagree with
/// the state whenever (1 - |r|^2)^2 (1 - nm) != 0; see the README.
std::pair<double, cplx> bsn_hz_moments(int n, int m, cplx r);

/// (m - t)(n - t) < t^2 with t = |r|^2/(1+|r|^4).
Inequality bsn_hz_detectability(int n, int m, cplx r);
bool bsn_hz_detectable(int n, int m, cplx r);

/// <K_x> = (xi + xi*)/(2(1-|xi|^2)) (M+N+1).
double tmsn_Kx(int M, int N, cplx xi);

/// <J_x> = (r + r*)/(2(1+|r|^2)) (n - m), in its reference form. The state itself gives
/// the opposite sign; only |<J_x>| enters the witnesses.
double bsn_Jx(int n, int m, cplx r);

/// <L~_x> = (r^2 + r*^2)/(2(1+|r|^2)^2) [m(m-1) + n(n-1) - 4nm].
double bsn_Lx(int n, int m, cplx r);

/// |r^2 + r*^2|/(1+|r|^2)^2 n(n+1), the reference magnitude for n = m.
double bsn_Lx_magnitude_equal(int n, cplx r);

enum class Family { tmsn, bsn };

/// Every closed form that applies to a spec, gathered in one record.
struct AnalyticMoments {
  Family family = Family::tmsn;
  StateSpec spec;
  CovarianceMatrix covariance;
  double simon_D = 0.0;
  std::optional<Inequality> simon_region;  // TMSN
  std::optional<double> Kx;          // TMSN
  std::optional<double> NaNb;        // BSN, reference-form <a†a b†b>
  std::optional<cplx> a_bdag;        // BSN, <a b†>
  std::optional<Inequality> hz_region;  // BSN
  std::optional<double> Jx;          // BSN
  std::optional<double> Lx;          // BSN
};

AnalyticMoments analytic_moments(const StateSpec& spec);

}  // namespace twomode::closed_form

#endif  // TWOMODE_CLOSED_FORM_HPP
