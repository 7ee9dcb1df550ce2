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

#ifndef TWOMODE_STATES_HPP
#define TWOMODE_STATES_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twomode/fock_core.hpp"

namespace twomode {

inline constexpr double kVacuumTailTarget = 1e-14;
inline constexpr double kSchmidtThreshold = 1e-10;

/// Two-mode squeezed number state |M, N; xi>, |xi| < 1.
struct TmsnSpec {
  int M = 0;
  int N = 0;
  cplx xi{0.0, 0.0};
};

/// Beam-splitted number state |n, m; r>, 0 < |r| < inf.
struct BsnSpec {
  int n = 0;
  int m = 0;
  cplx r{1.0, 0.0};
};

using StateSpec = std::variant<TmsnSpec, BsnSpec>;

void validate(const TmsnSpec& spec);
void validate(const BsnSpec& spec);
void validate(const StateSpec& spec);

std::string describe(const StateSpec& spec);

/// Smallest vacuum cutoff whose geometric tail |xi|^(2(c+1)) is below `tail_target`.
int tms_vacuum_cutoff(double abs_xi, double tail_target = kVacuumTailTarget);

/// Lattice cutoff used when the caller does not supply one.
int default_cutoff(const StateSpec& spec);

/// sqrt(1-|xi|^2) sum_n xi^n |n, n>, truncated at `cutoff` and left
/// unnormalized; tail_bound is the exact discarded mass.
FockState build_tms_vacuum(cplx xi, int cutoff);

/// Applies the nonlocal creators (a† - conj(xi) b)/sqrt(1-|xi|^2) M times and
/// (b† - conj(xi) a)/sqrt(1-|xi|^2) N times to the TMS vacuum. `cutoff` is the
/// full lattice cutoff; the vacuum itself is truncated at cutoff - M - N.
FockState build_tmsn(const TmsnSpec& spec, std::optional<int> cutoff = std::nullopt);

/// Applies (a† - conj(r) b†)/sqrt(1+|r|^2) n times and (r a† + b†)/sqrt(1+|r|^2)
/// m times to |0, 0>. Support is the anti-diagonal n_a + n_b = n + m.
FockState build_bsn(const BsnSpec& spec, std::optional<int> cutoff = std::nullopt);

FockState build_state(const StateSpec& spec, std::optional<int> cutoff = std::nullopt);

struct SchmidtProfile {
  std::vector<double> coefficients;  // descending, all above threshold
  int rank = 0;
  /// Fock pair carrying each coefficient; empty unless the amplitude table has
  /// at most one nonzero entry per row and column.
  std::vector<std::pair<int, int>> basis_labels;
};

SchmidtProfile schmidt_profile(const FockState& state, double threshold = kSchmidtThreshold);

/// (<n+m, 0 | n, m; r>, <0, n+m | n, m; r>). Requires n + m >= 1.
std::pair<cplx, cplx> verify_edge_coefficients(const BsnSpec& spec);

}  // namespace twomode

#endif  // TWOMODE_STATES_HPP
