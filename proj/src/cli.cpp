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

#include "twomode/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twomode/closed_form.hpp"
#include "twomode/serialize.hpp"
#include "twomode/states.hpp"
#include "twomode/survey.hpp"
#include "twomode/witnesses.hpp"

namespace twomode::cli {
namespace {

constexpr double kCutoffWarningTail = 1e-12;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpecOptions {
  int M = 0, N = 0, n = 0, m = 0;
  std::string xi, r;
  std::optional<double> xi_abs, xi_arg, r_abs, r_arg;
  std::optional<int> cutoff;
};

void add_spec_options(CLI::App* app, SpecOptions& o) {
  app->add_option("--M", o.M, "TMSN excitations of the first nonlocal mode")->check(CLI::NonNegativeNumber);
  app->add_option("--N", o.N, "TMSN excitations of the second nonlocal mode")->check(CLI::NonNegativeNumber);
  app->add_option("--xi", o.xi, "squeezing parameter, e.g. 0.7 or 0.5+0.2i");
  app->add_option("--xi-abs", o.xi_abs, "|xi| (polar form)");
  app->add_option("--xi-arg", o.xi_arg, "arg xi in radians (polar form)");
  app->add_option("--n", o.n, "BSN photons in the first input port")->check(CLI::NonNegativeNumber);
  app->add_option("--m", o.m, "BSN photons in the second input port")->check(CLI::NonNegativeNumber);
  app->add_option("--r", o.r, "beamsplitter parameter, e.g. 1 or 2+1i");
  app->add_option("--r-abs", o.r_abs, "|r| (polar form)");
  app->add_option("--r-arg", o.r_arg, "arg r in radians (polar form)");
  app->add_option("--cutoff", o.cutoff, "Fock lattice cutoff (default: automatic)")->check(CLI::NonNegativeNumber);
}

cplx complex_param(const std::string& text, const std::optional<double>& abs, const std::optional<double>& arg,
                   const std::string& name) {
  if (!text.empty()) {
    if (abs || arg) throw DomainError("give either --" + name + " or --" + name + "-abs/--" + name + "-arg");
    try {
      return io::parse_complex(text, name);
    } catch (const io::ParseError& e) {
      throw DomainError(e.what());
    }
  }
  if (abs) return std::polar(*abs, arg.value_or(0.0));
  if (arg) throw DomainError("--" + name + "-arg needs --" + name + "-abs");
  throw DomainError("missing --" + name);
}

StateSpec make_spec(const std::string& family, const SpecOptions& o) {
  StateSpec spec;
  if (family == "tmsn") {
    spec = TmsnSpec{o.M, o.N, complex_param(o.xi, o.xi_abs, o.xi_arg, "xi")};
  } else {
    spec = BsnSpec{o.n, o.m, complex_param(o.r, o.r_abs, o.r_arg, "r")};
  }
  validate(spec);
  return spec;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << data;
    if (!f.flush()) throw InputError("cannot write '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move output into place at '" + path + "': " + ec.message());
}

struct Output {
  std::string path;
  std::vector<std::string> command;
};

// Data and summary go to different streams so that stdout stays parseable.
void emit(const Output& o, const std::string& data, const std::string& summary, std::ostream& out,
          std::ostream& err) {
  if (o.path.empty()) {
    out << data;
    err << summary;
    return;
  }
  write_atomically(o.path, data);
  nlohmann::json meta{{"tool", "twomode"}, {"version", kVersion}, {"command", o.command}};
  write_atomically(o.path + ".meta.json", meta.dump(1) + "\n");
  out << summary;
}

std::string fmt(double v, const char* f = "%.10g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string support_description(const FockState& s) {
  std::optional<int> diff, sum;
  bool diag = true, anti = true;
  const auto& t = s.amplitudes();
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (t(i, j) == cplx(0.0)) continue;
      const int d = static_cast<int>(i - j), u = static_cast<int>(i + j);
      if (!diff) diff = d;
      if (!sum) sum = u;
      diag = diag && *diff == d;
      anti = anti && *sum == u;
    }
  }
  if (!diff) return "empty";
  if (diag) return "diagonal n_a - n_b = " + std::to_string(*diff);
  if (anti) return "anti-diagonal n_a + n_b = " + std::to_string(*sum);
  return "general";
}

std::string state_summary(const StateSpec& spec, const FockState& s) {
  std::ostringstream o;
  const auto prof = schmidt_profile(s);
  o << "state: " << describe(spec) << "\n";
  o << "cutoff: " << s.cutoff() << "  tail_bound: " << fmt(s.tail_bound(), "%.3g")
    << "  norm^2: " << fmt(s.squared_norm(), "%.15f") << "\n";
  o << "support: " << support_description(s) << "\n";
  o << "schmidt rank: " << prof.rank;
  if (const auto* t = std::get_if<TmsnSpec>(&spec); t && t->xi != cplx(0.0)) {
    o << " (truncated; infinite without the cutoff)";
  }
  o << "\n";
  o << "schmidt coefficients:";
  for (std::size_t i = 0; i < std::min<std::size_t>(prof.coefficients.size(), 6); ++i) {
    o << " " << fmt(prof.coefficients[i], "%.6g");
  }
  if (prof.coefficients.size() > 6) o << " ...";
  o << "\n";
  std::vector<std::string> nonzero;
  const auto& t = s.amplitudes();
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      if (std::abs(t(i, j)) > kSchmidtThreshold)
        nonzero.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ") " + io::format_complex(t(i, j)));
  if (nonzero.size() <= 12) {
    o << "amplitudes:\n";
    for (const auto& line : nonzero) o << "  " << line << "\n";
  }
  return o.str();
}

std::string report_summary(const std::vector<WitnessReport>& reports) {
  std::ostringstream o;
  for (const auto& r : reports) {
    o << to_string(r.criterion) << ": " << to_string(r.verdict) << " (lhs=" << fmt(r.lhs) << ", rhs=" << fmt(r.rhs)
      << ", margin=" << fmt(r.margin) << ")\n";
  }
  return o.str();
}

double default_tolerance() {
  const char* env = std::getenv(kToleranceEnv);
  if (env == nullptr || *env == '\0') return kWitnessTolerance;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v >= 0.0)) {
    throw DomainError(std::string(kToleranceEnv) + " must be a non-negative number");
  }
  return v;
}

// {"command": "witness", "positional": "tmsn", "options": {"M": 3, "xi": "0.7"}}
std::vector<std::string> expand_config(const std::string& path, const std::vector<std::string>& rest) {
  const std::string text = read_file(path);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
  if (!cfg.is_object() || !cfg.contains("command") || !cfg["command"].is_string()) {
    throw InputError("config '" + path + "': expected an object with a \"command\" string");
  }
  std::vector<std::string> args{cfg["command"].get<std::string>()};
  if (cfg.contains("positional")) {
    if (!cfg["positional"].is_string()) throw InputError("config '" + path + "': \"positional\" must be a string");
    args.push_back(cfg["positional"].get<std::string>());
  }
  if (cfg.contains("options")) {
    if (!cfg["options"].is_object()) throw InputError("config '" + path + "': \"options\" must be an object");
    for (const auto& [key, value] : cfg["options"].items()) {
      const std::string flag = "--" + key;
      if (std::find(rest.begin(), rest.end(), flag) != rest.end()) continue;
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back(flag);
      } else if (value.is_string()) {
        args.push_back(flag);
        args.push_back(value.get<std::string>());
      } else if (value.is_number()) {
        args.push_back(flag);
        args.push_back(value.dump());
      } else {
        throw InputError("config '" + path + "': option \"" + key + "\" must be a string, number or boolean");
      }
    }
  }
  args.insert(args.end(), rest.begin(), rest.end());
  return args;
}

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;
  if (!args.empty() && args[0] == "--config") {
    if (args.size() < 2) throw DomainError("--config needs a file");
    args = expand_config(args[1], std::vector<std::string>(args.begin() + 2, args.end()));
  }

  CLI::App app{"Two-mode Fock-space entanglement toolkit", "twomode"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SpecOptions spec_opts;
  std::string family, out_path, format = "json", table_path, region;
  double tolerance = default_tolerance();
  int grid_max = 10, confirm = 0;
  std::optional<int> rows, cols;
  std::uint64_t seed = 1;
  std::int64_t limit = 1000000;

  auto* state_cmd = app.add_subcommand("state", "construct a state and write its amplitudes");
  state_cmd->add_option("family", family, "tmsn or bsn")->required()->check(CLI::IsMember({"tmsn", "bsn"}));
  add_spec_options(state_cmd, spec_opts);
  state_cmd->add_option("--out", out_path, "output file (default: stdout)");

  auto* witness_cmd = app.add_subcommand("witness", "evaluate the separability criteria");
  witness_cmd->add_option("family", family, "tmsn or bsn")->check(CLI::IsMember({"tmsn", "bsn"}));
  add_spec_options(witness_cmd, spec_opts);
  witness_cmd->add_option("--table", table_path, "moment-table file instead of a state");
  witness_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  witness_cmd->add_option("--tolerance", tolerance, "verdict tolerance")->check(CLI::NonNegativeNumber);
  witness_cmd->add_option("--out", out_path, "output file (default: stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "closed-form detectability regions as CSV");
  sweep_cmd->add_option("kind", region, "tmsn-region or hz-region")
      ->required()
      ->check(CLI::IsMember({"tmsn-region", "hz-region"}));
  add_spec_options(sweep_cmd, spec_opts);
  sweep_cmd->add_option("--max", grid_max, "largest photon number on both axes")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--rows", rows, "largest row index (overrides --max)")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--cols", cols, "largest column index (overrides --max)")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--confirm", confirm, "numerically re-check this many random cells")
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--seed", seed, "seed for --confirm sampling");
  sweep_cmd->add_option("--tolerance", tolerance, "verdict tolerance for --confirm")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--out", out_path, "output file (default: stdout)");

  auto* blind_cmd = app.add_subcommand("blind", "pairs invisible to the fourth-order condition");
  blind_cmd->add_option("--limit", limit, "largest n to search")->check(CLI::PositiveNumber);
  blind_cmd->add_option("--out", out_path, "output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParameterError;
  }

  const Output output{out_path, args};

  if (*state_cmd) {
    const StateSpec spec = make_spec(family, spec_opts);
    const FockState s = build_state(spec, spec_opts.cutoff);
    if (spec_opts.cutoff && s.tail_bound() > kCutoffWarningTail) {
      err << "warning: cutoff " << *spec_opts.cutoff << " leaves tail_bound " << fmt(s.tail_bound(), "%.3g") << "\n";
    }
    emit(output, io::serialize_state(s, spec), state_summary(spec, s), out, err);
    return kExitOk;
  }

  if (*witness_cmd) {
    if (!table_path.empty()) {
      if (!family.empty()) throw DomainError("give either a family or --table, not both");
      const MomentTable table = io::deserialize_moment_table(read_file(table_path));
      const auto eval = evaluate_available(table, tolerance);
      io::TableReport rep{eval.reports, eval.skipped};
      std::string summary = "table: " + table_path + "\n" + report_summary(rep.reports);
      for (Criterion c : rep.skipped) summary += to_string(c) + ": skipped (moments missing)\n";
      const std::string data = format == "json" ? io::serialize_table_report(rep) : io::reports_csv(rep.reports, "table");
      emit(output, data, summary, out, err);
      return kExitOk;
    }
    if (family.empty()) throw DomainError("witness needs a family (tmsn|bsn) or --table");
    const StateSpec spec = make_spec(family, spec_opts);
    WitnessOptions wopts;
    wopts.witness_tolerance = tolerance;
    wopts.cutoff = spec_opts.cutoff;
    const FullReport rep = full_report(spec, wopts);
    std::string summary = "state: " + describe(spec) + "\n" + report_summary(rep.reports);
    for (const auto& c : rep.cross_checks) {
      if (!c.agrees()) {
        summary += "finding: " + c.quantity + " numeric=" + io::format_complex(c.numeric) +
                   " closed-form=" + io::format_complex(c.closed_form) + (c.note.empty() ? "" : " (" + c.note + ")") + "\n";
      }
    }
    const std::string data = format == "json" ? io::serialize_full_report(rep) : io::reports_csv(rep.reports, "\"" + describe(spec) + "\"");
    emit(output, data, summary, out, err);
    return kExitOk;
  }

  if (*sweep_cmd) {
    const int r_max = rows.value_or(grid_max), c_max = cols.value_or(grid_max);
    survey::RegionGrid grid;
    if (region == "tmsn-region") {
      const cplx xi = complex_param(spec_opts.xi, spec_opts.xi_abs, spec_opts.xi_arg, "xi");
      grid = survey::tmsn_region(xi, r_max, c_max);
    } else {
      const cplx r = complex_param(spec_opts.r, spec_opts.r_abs, spec_opts.r_arg, "r");
      grid = survey::bsn_hz_region(r, r_max, c_max);
    }
    std::ostringstream s;
    s << to_string(grid.kind) << " at parameter " << io::format_complex(grid.parameter) << ": "
      << fmt(100.0 * grid.coverage(), "%.1f") << "% of cells detectable\n";
    s << "rows " << grid.row_label() << " = 0.." << grid.row_max << ", columns " << grid.col_label() << " = 0.."
      << grid.col_max << " ('#' detectable)\n";
    for (int i = 0; i <= grid.row_max; ++i) {
      s << (i < 10 ? " " : "") << i << " ";
      for (int j = 0; j <= grid.col_max; ++j) s << (grid.at(i, j).detectable ? '#' : '.');
      s << "\n";
    }
    if (confirm > 0) {
      const auto dis = survey::confirm_numerically(grid, confirm, seed, tolerance);
      s << "numeric confirmation: " << confirm << " cells sampled, " << dis.size() << " disagreements\n";
      for (const auto& d : dis) {
        s << "  cell (" << d.row << "," << d.col << "): closed form " << d.closed_form << ", numeric " << d.numeric
          << " (margin " << fmt(d.numeric_margin) << ")\n";
      }
    }
    emit(output, io::serialize_grid_csv(grid), s.str(), out, err);
    return kExitOk;
  }

  const auto pairs = survey::enumerate_blind_pairs(limit);
  std::ostringstream s;
  s << pairs.size() << " pairs with 0 <= m < n <= " << limit << " and m(m-1) + n(n-1) - 4nm = 0\n";
  for (const auto& p : pairs) {
    s << "  (" << p.m << ", " << p.n << ")";
    if (p.misprint) s << "  [misprinted elsewhere as (" << p.misprint->first << ", " << p.misprint->second << ")]";
    s << "\n";
  }
  emit(output, io::serialize_blind_pairs_csv(pairs), s.str(), out, err);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParameterError;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const MissingMomentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace twomode::cli
