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

#ifndef TWOMODE_SERIALIZE_HPP
#define TWOMODE_SERIALIZE_HPP

// On-disk formats. Nested records (states, moment tables, reports) are JSON
// documents carrying "schema" and "version"; region grids and blind pairs are
// CSV with a leading "# twomode <kind> v<version>" line and a header row.
// Complex numbers are always [re, im] pairs (JSON) or re/im column pairs (CSV).

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twomode/fock_core.hpp"
#include "twomode/states.hpp"
#include "twomode/survey.hpp"
#include "twomode/witnesses.hpp"

namespace twomode::io {

inline constexpr int kSchemaVersion = 1;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::string field, int line = 0, int column = 0);

  const std::string& field() const { return field_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string field_;
  int line_;
  int column_;
};

/// "0.7", "-0.5i", "0.5+0.2i", "1e-3-2i".
cplx parse_complex(std::string_view text, const std::string& field = "value");
std::string format_complex(cplx z);

struct StateDocument {
  std::optional<StateSpec> spec;
  FockState state;
};

std::string serialize_state(const FockState& state, const std::optional<StateSpec>& spec = std::nullopt);
StateDocument deserialize_state(std::string_view text);

std::string serialize_moment_table(const MomentTable& table);
MomentTable deserialize_moment_table(std::string_view text);

std::string serialize_full_report(const FullReport& report);
FullReport deserialize_full_report(std::string_view text);

/// Reports evaluated from a moment table with no state behind them.
struct TableReport {
  std::vector<WitnessReport> reports;
  std::vector<Criterion> skipped;
};

std::string serialize_table_report(const TableReport& report);
TableReport deserialize_table_report(std::string_view text);

/// One CSV row per report; `label` fills the first column.
std::string reports_csv(const std::vector<WitnessReport>& reports, const std::string& label);

std::string serialize_grid_csv(const survey::RegionGrid& grid);
survey::RegionGrid deserialize_grid_csv(std::string_view text);

std::string serialize_blind_pairs_csv(const std::vector<survey::BlindPair>& pairs);
std::vector<survey::BlindPair> deserialize_blind_pairs_csv(std::string_view text);

}  // namespace twomode::io

#endif  // TWOMODE_SERIALIZE_HPP
