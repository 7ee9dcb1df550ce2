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

#include "twomode/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace twomode::io {
namespace {

using json = nlohmann::json;

constexpr const char* kStateSchema = "twomode.state";
constexpr const char* kMomentsSchema = "twomode.moments";
constexpr const char* kReportSchema = "twomode.report";
constexpr const char* kTableReportSchema = "twomode.table-report";
constexpr const char* kGridTag = "# twomode grid v1";
constexpr const char* kBlindTag = "# twomode blind-pairs v1";

[[noreturn]] void fail(const std::string& field, const std::string& what, int line = 0, int column = 0) {
  std::string msg = "field '" + field + "': " + what;
  if (line > 0) msg = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
  throw ParseError(msg, field, line, column);
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> to_int(std::string_view s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_hash(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, h);
  return buf;
}

// --- JSON field access -------------------------------------------------------

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

cplx get_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a complex number as an [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Offset of element `index` of the array opening at or after `pos`, or npos.
std::size_t array_element(std::string_view text, std::size_t pos, std::size_t index) {
  pos = text.find('[', pos);
  if (pos == std::string_view::npos) return pos;
  std::size_t seen = 0;
  int depth = 0;
  bool in_string = false, at_start = true;
  for (std::size_t i = pos + 1; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (depth == 0 && at_start) {
      if (c == ']') return std::string_view::npos;
      if (seen == index) return i;
      at_start = false;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      ++depth;
    } else if (c == ']' || c == '}') {
      if (depth == 0) return std::string_view::npos;
      --depth;
    } else if (c == ',' && depth == 0) {
      ++seen;
      at_start = true;
    }
  }
  return std::string_view::npos;
}

// Best-effort source position of a field path such as "entries[3].value".
std::pair<int, int> locate(std::string_view text, const std::string& path) {
  std::size_t pos = 0, i = 0;
  while (i < path.size()) {
    if (path[i] == '.') {
      ++i;
      continue;
    }
    if (path[i] == '[') {
      const std::size_t close = path.find(']', i);
      if (close == std::string::npos) break;
      const std::size_t at = array_element(text, pos, std::stoul(path.substr(i + 1, close - i - 1)));
      if (at == std::string_view::npos) break;
      pos = at;
      i = close + 1;
      continue;
    }
    const std::size_t end = path.find_first_of(".[", i);
    const std::string key = path.substr(i, end == std::string::npos ? std::string::npos : end - i);
    if (key.front() == '<') break;
    const std::size_t at = text.find("\"" + key + "\"", pos);
    if (at == std::string_view::npos) break;
    pos = at;
    i = end == std::string::npos ? path.size() : end;
  }
  return line_column(text, pos);
}

// Runs a JSON decoder, attaching a source position to field errors.
template <typename F>
auto with_position(std::string_view text, F&& decode) {
  try {
    return decode();
  } catch (const ParseError& e) {
    if (e.line() > 0) throw;
    const auto [line, column] = locate(text, e.field());
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what(),
                     e.field(), line, column);
  }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json parse_document(std::string_view text, const char* schema) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    fail("<document>", "malformed JSON (" + std::string(e.what()) + ")", line, column);
  }
  const std::string got = get_string(member(doc, "schema", ""), "schema");
  if (got != schema) fail("schema", "expected '" + std::string(schema) + "', found '" + got + "'");
  const int version = get_int(member(doc, "version", ""), "version");
  if (version != kSchemaVersion) {
    fail("version", "schema version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kSchemaVersion) + ")");
  }
  return doc;
}

json header(const char* schema) { return json{{"schema", schema}, {"version", kSchemaVersion}}; }

json spec_json(const StateSpec& spec) {
  if (const auto* t = std::get_if<TmsnSpec>(&spec)) {
    return json{{"family", "tmsn"}, {"M", t->M}, {"N", t->N}, {"xi", complex_json(t->xi)}};
  }
  const auto& b = std::get<BsnSpec>(spec);
  return json{{"family", "bsn"}, {"n", b.n}, {"m", b.m}, {"r", complex_json(b.r)}};
}

StateSpec spec_from_json(const json& j, const std::string& path) {
  const std::string family = get_string(member(j, "family", path), join(path, "family"));
  StateSpec spec;
  if (family == "tmsn") {
    spec = TmsnSpec{get_int(member(j, "M", path), join(path, "M")), get_int(member(j, "N", path), join(path, "N")),
                    get_complex(member(j, "xi", path), join(path, "xi"))};
  } else if (family == "bsn") {
    spec = BsnSpec{get_int(member(j, "n", path), join(path, "n")), get_int(member(j, "m", path), join(path, "m")),
                   get_complex(member(j, "r", path), join(path, "r"))};
  } else {
    fail(join(path, "family"), "unknown family '" + family + "'");
  }
  try {
    validate(spec);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  return spec;
}

json report_json(const WitnessReport& r) {
  return json{{"criterion", to_string(r.criterion)}, {"lhs", r.lhs},         {"rhs", r.rhs},
              {"margin", r.margin},                  {"verdict", to_string(r.verdict)},
              {"inputs_hash", fmt_hash(r.inputs_hash)}};
}

WitnessReport report_from_json(const json& j, const std::string& path) {
  WitnessReport r;
  const std::string c = get_string(member(j, "criterion", path), join(path, "criterion"));
  const auto crit = criterion_from_string(c);
  if (!crit) fail(join(path, "criterion"), "unknown criterion '" + c + "'");
  r.criterion = *crit;
  r.lhs = get_number(member(j, "lhs", path), join(path, "lhs"));
  r.rhs = get_number(member(j, "rhs", path), join(path, "rhs"));
  r.margin = get_number(member(j, "margin", path), join(path, "margin"));
  const std::string v = get_string(member(j, "verdict", path), join(path, "verdict"));
  const auto verdict = verdict_from_string(v);
  if (!verdict) fail(join(path, "verdict"), "unknown verdict '" + v + "'");
  r.verdict = *verdict;
  const std::string h = get_string(member(j, "inputs_hash", path), join(path, "inputs_hash"));
  std::uint64_t parsed = 0;
  const bool prefixed = h.size() > 2 && h.compare(0, 2, "0x") == 0;
  const auto [ptr, ec] = std::from_chars(h.data() + (prefixed ? 2 : 0), h.data() + h.size(), parsed, 16);
  if (!prefixed || ec != std::errc() || ptr != h.data() + h.size()) {
    fail(join(path, "inputs_hash"), "expected a 0x-prefixed hexadecimal hash");
  }
  r.inputs_hash = parsed;
  return r;
}

json reports_json(const std::vector<WitnessReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr;
}

std::vector<WitnessReport> reports_from_json(const json& j, const std::string& path) {
  std::vector<WitnessReport> out;
  get_array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(report_from_json(j[i], index_path(path, i)));
  return out;
}

// --- CSV ---------------------------------------------------------------------

struct CsvLine {
  int number = 0;
  std::vector<std::string> fields;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<CsvLine> read_csv(std::string_view text, const char* tag, const std::string& expected_header) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  std::vector<CsvLine> rows;
  bool saw_tag = false, saw_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_tag) {
      if (line != tag) fail("<version>", "expected '" + std::string(tag) + "'", number, 1);
      saw_tag = true;
      continue;
    }
    if (!saw_header) {
      if (line != expected_header) fail("<header>", "expected '" + expected_header + "'", number, 1);
      saw_header = true;
      continue;
    }
    rows.push_back({number, split(line, ',')});
  }
  if (!saw_tag) fail("<version>", "empty input", 1, 1);
  if (!saw_header) fail("<header>", "missing header row", number + 1, 1);
  return rows;
}

double csv_double(const CsvLine& row, std::size_t col, const std::vector<std::string>& names) {
  const auto v = to_double(row.fields[col]);
  if (!v) fail(names[col], "expected a number, found '" + row.fields[col] + "'", row.number, static_cast<int>(col) + 1);
  return *v;
}

template <typename Int>
Int csv_int(const CsvLine& row, std::size_t col, const std::vector<std::string>& names) {
  const auto v = to_int<Int>(row.fields[col]);
  if (!v) fail(names[col], "expected an integer, found '" + row.fields[col] + "'", row.number, static_cast<int>(col) + 1);
  return *v;
}

std::string grid_header(survey::RegionKind kind) {
  return kind == survey::RegionKind::tmsn_simon
             ? "criterion,param_re,param_im,M,N,lhs,rhs,margin,detectable"
             : "criterion,param_re,param_im,n,m,lhs,rhs,margin,detectable";
}

constexpr const char* kBlindHeader = "index,m,n,residual,misprint_m,misprint_n";

}  // namespace

ParseError::ParseError(const std::string& message, std::string field, int line, int column)
    : std::runtime_error(message), field_(std::move(field)), line_(line), column_(column) {}

cplx parse_complex(std::string_view text, const std::string& field) {
  // Blanks are allowed at the ends and around the sign joining the two parts.
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(text[i]))) {
      s += text[i];
      continue;
    }
    std::size_t next = i;
    while (next < text.size() && std::isspace(static_cast<unsigned char>(text[next]))) ++next;
    const char before = s.empty() ? '+' : s.back();
    const char after = next == text.size() ? 'i' : text[next];
    if (before != '+' && before != '-' && after != '+' && after != '-' && after != 'i') s += ' ';
    i = next - 1;
  }
  const auto bad = [&]() -> cplx { fail(field, "malformed complex literal '" + std::string(text) + "'"); };
  if (s.empty()) return bad();
  if (s.back() != 'i') {
    const auto v = to_double(s);
    return v ? cplx(*v, 0.0) : bad();
  }
  s.pop_back();
  std::size_t split_at = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  const std::string re = split_at == std::string::npos ? "" : s.substr(0, split_at);
  std::string im = split_at == std::string::npos ? s : s.substr(split_at);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  double rv = 0.0;
  if (!re.empty()) {
    const auto v = to_double(re);
    if (!v) return bad();
    rv = *v;
  }
  const auto iv = to_double(im);
  if (!iv) return bad();
  return {rv, *iv};
}

std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return fmt_double(z.real());
  return fmt_double(z.real()) + (std::signbit(z.imag()) ? "" : "+") + fmt_double(z.imag()) + "i";
}

std::string serialize_state(const FockState& state, const std::optional<StateSpec>& spec) {
  json doc = header(kStateSchema);
  doc["spec"] = spec ? spec_json(*spec) : json(nullptr);
  doc["cutoff"] = state.cutoff();
  doc["tail_bound"] = state.tail_bound();
  json amps = json::array();
  const auto& t = state.amplitudes();
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (t(i, j) != cplx(0.0)) amps.push_back(json::array({i, j, complex_json(t(i, j))}));
    }
  }
  doc["amplitudes"] = std::move(amps);
  return doc.dump(1) + "\n";
}

StateDocument deserialize_state(std::string_view text) {
  return with_position(text, [&] {
    const json doc = parse_document(text, kStateSchema);
    StateDocument out;
    const json& spec = member(doc, "spec", "");
    if (!spec.is_null()) out.spec = spec_from_json(spec, "spec");
    const int cutoff = get_int(member(doc, "cutoff", ""), "cutoff");
    if (cutoff < 0) fail("cutoff", "must be non-negative");
    const double tail = get_number(member(doc, "tail_bound", ""), "tail_bound");
    if (!(tail >= 0.0)) fail("tail_bound", "must be non-negative");
    FockState::Table t = FockState::Table::Zero(cutoff + 1, cutoff + 1);
    const json& amps = get_array(member(doc, "amplitudes", ""), "amplitudes");
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const std::string path = index_path("amplitudes", i);
      const json& e = amps[i];
      if (!e.is_array() || e.size() != 3) fail(path, "expected [n_a, n_b, [re, im]]");
      const int na = get_int(e[0], path + "[0]");
      const int nb = get_int(e[1], path + "[1]");
      if (na < 0 || nb < 0 || na > cutoff || nb > cutoff) fail(path, "index outside the lattice");
      t(na, nb) = get_complex(e[2], path + "[2]");
    }
    out.state = FockState(std::move(t), tail);
    return out;
  });
}

std::string serialize_moment_table(const MomentTable& table) {
  json doc = header(kMomentsSchema);
  doc["source"] = to_string(table.source());
  json entries = json::array();
  for (const auto& [m, v] : table.entries()) {
    entries.push_back(json{{"monomial", json::array({m.k, m.l, m.p, m.q})}, {"value", complex_json(v)}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(1) + "\n";
}

MomentTable deserialize_moment_table(std::string_view text) {
  return with_position(text, [&] {
    const json doc = parse_document(text, kMomentsSchema);
    const std::string source = get_string(member(doc, "source", ""), "source");
    MomentSource src;
    if (source == "numeric") {
      src = MomentSource::numeric;
    } else if (source == "closed-form") {
      src = MomentSource::closed_form;
    } else if (source == "external") {
      src = MomentSource::external;
    } else {
      fail("source", "unknown source '" + source + "'");
    }
    MomentTable::Entries entries;
    const json& arr = get_array(member(doc, "entries", ""), "entries");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = index_path("entries", i);
      const json& mono = member(arr[i], "monomial", path);
      if (!mono.is_array() || mono.size() != 4) fail(join(path, "monomial"), "expected [k, l, p, q]");
      LadderMonomial m{get_int(mono[0], join(path, "monomial")), get_int(mono[1], join(path, "monomial")),
                       get_int(mono[2], join(path, "monomial")), get_int(mono[3], join(path, "monomial"))};
      try {
        check_monomial(m, kExtendedMaxOrder);
      } catch (const DomainError& e) {
        fail(join(path, "monomial"), e.what());
      }
      if (!entries.emplace(m, get_complex(member(arr[i], "value", path), join(path, "value"))).second) {
        fail(join(path, "monomial"), "duplicate monomial " + to_string(m));
      }
    }
    return MomentTable(std::move(entries), src);
  });
}

std::string serialize_full_report(const FullReport& report) {
  json doc = header(kReportSchema);
  doc["spec"] = spec_json(report.spec);
  doc["cutoff"] = report.cutoff;
  doc["tail_bound"] = report.tail_bound;
  doc["reports"] = reports_json(report.reports);
  json checks = json::array();
  for (const auto& c : report.cross_checks) {
    checks.push_back(json{{"quantity", c.quantity},
                          {"numeric", complex_json(c.numeric)},
                          {"closed_form", complex_json(c.closed_form)},
                          {"delta", c.delta},
                          {"tolerance", c.tolerance},
                          {"agrees", c.agrees()},
                          {"note", c.note}});
  }
  doc["cross_checks"] = std::move(checks);
  return doc.dump(1) + "\n";
}

FullReport deserialize_full_report(std::string_view text) {
  return with_position(text, [&] {
    const json doc = parse_document(text, kReportSchema);
    FullReport out;
    out.spec = spec_from_json(member(doc, "spec", ""), "spec");
    out.cutoff = get_int(member(doc, "cutoff", ""), "cutoff");
    out.tail_bound = get_number(member(doc, "tail_bound", ""), "tail_bound");
    out.reports = reports_from_json(member(doc, "reports", ""), "reports");
    const json& checks = get_array(member(doc, "cross_checks", ""), "cross_checks");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const std::string path = index_path("cross_checks", i);
      CrossCheck c;
      c.quantity = get_string(member(checks[i], "quantity", path), join(path, "quantity"));
      c.numeric = get_complex(member(checks[i], "numeric", path), join(path, "numeric"));
      c.closed_form = get_complex(member(checks[i], "closed_form", path), join(path, "closed_form"));
      c.delta = get_number(member(checks[i], "delta", path), join(path, "delta"));
      c.tolerance = get_number(member(checks[i], "tolerance", path), join(path, "tolerance"));
      c.note = get_string(member(checks[i], "note", path), join(path, "note"));
      out.cross_checks.push_back(std::move(c));
    }
    return out;
  });
}

std::string serialize_table_report(const TableReport& report) {
  json doc = header(kTableReportSchema);
  doc["reports"] = reports_json(report.reports);
  json skipped = json::array();
  for (Criterion c : report.skipped) skipped.push_back(to_string(c));
  doc["skipped"] = std::move(skipped);
  return doc.dump(1) + "\n";
}

TableReport deserialize_table_report(std::string_view text) {
  return with_position(text, [&] {
    const json doc = parse_document(text, kTableReportSchema);
    TableReport out;
    out.reports = reports_from_json(member(doc, "reports", ""), "reports");
    const json& skipped = get_array(member(doc, "skipped", ""), "skipped");
    for (std::size_t i = 0; i < skipped.size(); ++i) {
      const std::string name = get_string(skipped[i], index_path("skipped", i));
      const auto c = criterion_from_string(name);
      if (!c) fail(index_path("skipped", i), "unknown criterion '" + name + "'");
      out.skipped.push_back(*c);
    }
    return out;
  });
}

std::string reports_csv(const std::vector<WitnessReport>& reports, const std::string& label) {
  std::string out = "state,criterion,lhs,rhs,margin,verdict,inputs_hash\n";
  for (const auto& r : reports) {
    out += label + "," + to_string(r.criterion) + "," + fmt_double(r.lhs) + "," + fmt_double(r.rhs) + "," +
           fmt_double(r.margin) + "," + to_string(r.verdict) + "," + fmt_hash(r.inputs_hash) + "\n";
  }
  return out;
}

std::string serialize_grid_csv(const survey::RegionGrid& grid) {
  std::string out = std::string(kGridTag) + "\n" + grid_header(grid.kind) + "\n";
  const std::string prefix = to_string(grid.kind) + "," + fmt_double(grid.parameter.real()) + "," +
                             fmt_double(grid.parameter.imag()) + ",";
  for (const auto& c : grid.cells) {
    out += prefix + std::to_string(c.row) + "," + std::to_string(c.col) + "," + fmt_double(c.lhs) + "," +
           fmt_double(c.rhs) + "," + fmt_double(c.margin) + "," + (c.detectable ? "1" : "0") + "\n";
  }
  return out;
}

survey::RegionGrid deserialize_grid_csv(std::string_view text) {
  // The header depends on the kind, so peek at the first data row.
  std::istringstream peek{std::string(text)};
  std::string line;
  std::optional<survey::RegionKind> kind;
  for (int n = 0; std::getline(peek, line); ++n) {
    if (n == 2) {
      kind = survey::region_kind_from_string(line.substr(0, line.find(',')));
      break;
    }
  }
  if (!kind) kind = survey::RegionKind::tmsn_simon;
  const std::string hdr = grid_header(*kind);
  const std::vector<std::string> names = split(hdr, ',');
  const auto rows = read_csv(text, kGridTag, hdr);
  if (rows.empty()) fail("<rows>", "grid has no cells", 3, 1);

  survey::RegionGrid g;
  g.kind = *kind;
  for (const auto& row : rows) {
    if (row.fields.size() != names.size()) {
      fail("<row>", "expected " + std::to_string(names.size()) + " fields, found " + std::to_string(row.fields.size()),
           row.number, 1);
    }
    if (survey::region_kind_from_string(row.fields[0]) != kind) {
      fail(names[0], "mixed criteria in one grid", row.number, 1);
    }
    const cplx param(csv_double(row, 1, names), csv_double(row, 2, names));
    if (&row == &rows.front()) {
      g.parameter = param;
    } else if (param != g.parameter) {
      fail(names[1], "parameter changes within the grid", row.number, 2);
    }
    survey::RegionCell c;
    c.row = csv_int<int>(row, 3, names);
    c.col = csv_int<int>(row, 4, names);
    c.lhs = csv_double(row, 5, names);
    c.rhs = csv_double(row, 6, names);
    c.margin = csv_double(row, 7, names);
    if (row.fields[8] != "0" && row.fields[8] != "1") fail(names[8], "expected 0 or 1", row.number, 9);
    c.detectable = row.fields[8] == "1";
    g.row_max = std::max(g.row_max, c.row);
    g.col_max = std::max(g.col_max, c.col);
    g.cells.push_back(c);
  }
  // Cells must tile the rectangle in row-major order.
  std::size_t i = 0;
  for (int r = 0; r <= g.row_max; ++r) {
    for (int c = 0; c <= g.col_max; ++c, ++i) {
      if (i >= g.cells.size() || g.cells[i].row != r || g.cells[i].col != c) {
        fail("<rows>", "grid is incomplete or out of order at cell (" + std::to_string(r) + "," +
                           std::to_string(c) + ")",
             i < rows.size() ? rows[i].number : rows.back().number, 1);
      }
    }
  }
  if (i != g.cells.size()) fail("<rows>", "extra cells beyond the grid rectangle", rows[i].number, 1);
  return g;
}

std::string serialize_blind_pairs_csv(const std::vector<survey::BlindPair>& pairs) {
  std::string out = std::string(kBlindTag) + "\n" + kBlindHeader + "\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    out += std::to_string(i + 1) + "," + std::to_string(p.m) + "," + std::to_string(p.n) + "," +
           std::to_string(survey::blind_pair_residual(p.m, p.n)) + ",";
    if (p.misprint) out += std::to_string(p.misprint->first) + "," + std::to_string(p.misprint->second);
    else out += ",";
    out += "\n";
  }
  return out;
}

std::vector<survey::BlindPair> deserialize_blind_pairs_csv(std::string_view text) {
  const std::vector<std::string> names = split(kBlindHeader, ',');
  std::vector<survey::BlindPair> out;
  for (const auto& row : read_csv(text, kBlindTag, kBlindHeader)) {
    if (row.fields.size() != names.size()) fail("<row>", "expected 6 fields", row.number, 1);
    survey::BlindPair p;
    p.m = csv_int<std::int64_t>(row, 1, names);
    p.n = csv_int<std::int64_t>(row, 2, names);
    if (csv_int<std::int64_t>(row, 3, names) != survey::blind_pair_residual(p.m, p.n)) {
      fail(names[3], "residual does not match the pair", row.number, 4);
    }
    if (!row.fields[4].empty() || !row.fields[5].empty()) {
      p.misprint = std::make_pair(csv_int<std::int64_t>(row, 4, names), csv_int<std::int64_t>(row, 5, names));
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace twomode::io
