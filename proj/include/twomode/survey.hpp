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

#ifndef TWOMODE_SURVEY_HPP
#define TWOMODE_SURVEY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twomode/fock_core.hpp"
#include "twomode/witnesses.hpp"

namespace twomode::survey {

enum class RegionKind {
  tmsn_simon,  // rows M, columns N, parameter xi
  bsn_hz,      // rows n, columns m, parameter r
};

std::string to_string(RegionKind k);
std::optional<RegionKind> region_kind_from_string(const std::string& s);

struct RegionCell {
  int row = 0;
  int col = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs; detectable iff lhs < rhs
  bool detectable = false;
};

struct RegionGrid {
  RegionKind kind = RegionKind::tmsn_simon;
  cplx parameter;
  int row_max = 0;
  int col_max = 0;
  std::vector<RegionCell> cells;  // row-major, (row_max+1)*(col_max+1) entries

  const RegionCell& at(int row, int col) const;
  double coverage() const;
  std::string row_label() const;
  std::string col_label() const;
};

RegionGrid tmsn_region(cplx xi, int M_max, int N_max);
RegionGrid bsn_hz_region(cplx r, int n_max, int m_max);

struct RegionDisagreement {
  int row = 0;
  int col = 0;
  bool closed_form = false;
  bool numeric = false;
  double numeric_margin = 0.0;
};

/// Re-evaluates `samples` distinct cells (chosen by `seed`) with numeric
/// moments of the constructed states and lists cells whose verdicts differ.
std::vector<RegionDisagreement> confirm_numerically(const RegionGrid& grid, int samples,
                                                    std::uint64_t seed,
                                                    double tol = kWitnessTolerance);

/// m(m-1) + n(n-1) - 4nm, the integer whose vanishing makes <L~_x> = 0.
std::int64_t blind_pair_residual(std::int64_t m, std::int64_t n);

struct BlindPair {
  std::int64_t m = 0;
  std::int64_t n = 0;
  /// Known misprinted form of this pair in circulation, if any.
  std::optional<std::pair<std::int64_t, std::int64_t>> misprint;
};

/// All 0 <= m < n <= limit with m(m-1) + n(n-1) = 4nm, generated by the chain
/// n_{k+1} = 4 n_k - n_{k-1} + 1 from (0, 1).
std::vector<BlindPair> enumerate_blind_pairs(std::int64_t limit);

/// Independent search: for each n <= limit solve the quadratic in m exactly.
std::vector<std::pair<std::int64_t, std::int64_t>> search_blind_pairs_exhaustive(std::int64_t limit);

}  // namespace twomode::survey

#endif  // TWOMODE_SURVEY_HPP
