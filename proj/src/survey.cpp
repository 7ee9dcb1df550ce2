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

#include "twomode/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "twomode/closed_form.hpp"
#include "twomode/states.hpp"

namespace twomode::survey {
namespace {

constexpr std::int64_t kPrefixCheckLimit = 10000;

void check_bounds(int rows, int cols) {
  if (rows < 0 || cols < 0) throw DomainError("grid bounds must be non-negative");
}

template <typename CellFn>
RegionGrid make_grid(RegionKind kind, cplx parameter, int row_max, int col_max, CellFn fn) {
  check_bounds(row_max, col_max);
  RegionGrid g;
  g.kind = kind;
  g.parameter = parameter;
  g.row_max = row_max;
  g.col_max = col_max;
  g.cells.reserve(static_cast<std::size_t>(row_max + 1) * (col_max + 1));
  for (int i = 0; i <= row_max; ++i) {
    for (int j = 0; j <= col_max; ++j) {
      const closed_form::Inequality q = fn(i, j);
      g.cells.push_back({i, j, q.lhs, q.rhs, q.margin(), q.holds()});
    }
  }
  return g;
}

std::int64_t isqrt(std::int64_t v) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (s * s > v) --s;
  while ((s + 1) * (s + 1) <= v) ++s;
  return s;
}

}  // namespace

std::string to_string(RegionKind k) { return k == RegionKind::tmsn_simon ? "tmsn-simon" : "bsn-hz"; }

std::optional<RegionKind> region_kind_from_string(const std::string& s) {
  if (s == "tmsn-simon") return RegionKind::tmsn_simon;
  if (s == "bsn-hz") return RegionKind::bsn_hz;
  return std::nullopt;
}

const RegionCell& RegionGrid::at(int row, int col) const {
  if (row < 0 || col < 0 || row > row_max || col > col_max) {
    throw std::out_of_range("grid cell outside bounds");
  }
  return cells.at(static_cast<std::size_t>(row) * (col_max + 1) + col);
}

double RegionGrid::coverage() const {
  if (cells.empty()) return 0.0;
  const auto hits = std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.detectable; });
  return static_cast<double>(hits) / static_cast<double>(cells.size());
}

std::string RegionGrid::row_label() const { return kind == RegionKind::tmsn_simon ? "M" : "n"; }
std::string RegionGrid::col_label() const { return kind == RegionKind::tmsn_simon ? "N" : "m"; }

RegionGrid tmsn_region(cplx xi, int M_max, int N_max) {
  validate(TmsnSpec{0, 0, xi});
  return make_grid(RegionKind::tmsn_simon, xi, M_max, N_max,
                   [&](int M, int N) { return closed_form::tmsn_detectability(M, N, xi); });
}

RegionGrid bsn_hz_region(cplx r, int n_max, int m_max) {
  validate(BsnSpec{0, 0, r});
  return make_grid(RegionKind::bsn_hz, r, n_max, m_max,
                   [&](int n, int m) { return closed_form::bsn_hz_detectability(n, m, r); });
}

std::vector<RegionDisagreement> confirm_numerically(const RegionGrid& grid, int samples,
                                                    std::uint64_t seed, double tol) {
  std::vector<std::size_t> idx(grid.cells.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(samples, 0))));
  std::sort(idx.begin(), idx.end());

  std::vector<RegionDisagreement> out;
  for (std::size_t i : idx) {
    const RegionCell& cell = grid.cells[i];
    WitnessReport rep;
    if (grid.kind == RegionKind::tmsn_simon) {
      const FockState s = build_tmsn({cell.row, cell.col, grid.parameter});
      rep = simon_criterion(covariance_matrix(s), tol);
    } else {
      const FockState s = build_bsn({cell.row, cell.col, grid.parameter});
      rep = hz_criterion(numeric_moment_table(s, required_monomials(Criterion::hillery_zubairy)), tol);
    }
    if (rep.entangled() != cell.detectable) {
      out.push_back({cell.row, cell.col, cell.detectable, rep.entangled(), rep.margin});
    }
  }
  return out;
}

std::int64_t blind_pair_residual(std::int64_t m, std::int64_t n) {
  const __int128 mm = m, nn = n;
  const __int128 v = mm * (mm - 1) + nn * (nn - 1) - 4 * nn * mm;
  return static_cast<std::int64_t>(v);
}

std::vector<std::pair<std::int64_t, std::int64_t>> search_blind_pairs_exhaustive(std::int64_t limit) {
  // m^2 - (4n+1) m + n(n-1) = 0 has discriminant 12n^2 + 12n + 1; the smaller
  // root is the only one below n.
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t n = 1; n <= limit; ++n) {
    const std::int64_t disc = 12 * n * n + 12 * n + 1;
    const std::int64_t s = isqrt(disc);
    if (s * s != disc) continue;
    const std::int64_t m = (4 * n + 1 - s) / 2;
    if (m >= 0 && m < n && blind_pair_residual(m, n) == 0) out.emplace_back(m, n);
  }
  return out;
}

std::vector<BlindPair> enumerate_blind_pairs(std::int64_t limit) {
  if (limit < 1) throw DomainError("blind-pair limit must be at least 1");
  std::vector<BlindPair> out;
  std::int64_t prev = 0, cur = 1;
  while (cur <= limit) {
    if (blind_pair_residual(prev, cur) != 0) {
      throw std::logic_error("recurrence produced a non-solution");
    }
    BlindPair p{prev, cur, std::nullopt};
    if (prev == 14840 && cur == 55385) p.misprint = std::make_pair(std::int64_t{4840}, std::int64_t{55385});
    out.push_back(p);
    const std::int64_t next = 4 * cur - prev + 1;
    prev = cur;
    cur = next;
  }

  const std::int64_t prefix = std::min(limit, kPrefixCheckLimit);
  const auto exhaustive = search_blind_pairs_exhaustive(prefix);
  std::size_t in_prefix = 0;
  for (const auto& p : out) {
    if (p.n <= prefix) ++in_prefix;
  }
  bool same = exhaustive.size() == in_prefix;
  for (std::size_t i = 0; same && i < exhaustive.size(); ++i) {
    same = exhaustive[i].first == out[i].m && exhaustive[i].second == out[i].n;
  }
  if (!same) throw std::logic_error("recurrence disagrees with exhaustive search");
  return out;
}

}  // namespace twomode::survey
