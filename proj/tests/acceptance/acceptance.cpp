// Prints one [PASS]/[FAIL] line per acceptance criterion. The CLI binary path
// is the first argument (needed by AC10).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "twomode/closed_form.hpp"
#include "twomode/serialize.hpp"
#include "twomode/states.hpp"
#include "twomode/survey.hpp"
#include "twomode/witnesses.hpp"

using namespace twomode;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Collects the first few problems of one criterion; the rest are counted.
class Log {
 public:
  void fail(const std::string& what) {
    if (++failures_ <= 5) lines_.push_back(what);
  }
  void note(const std::string& what) { notes_.push_back(what); }
  bool ok() const { return failures_ == 0; }
  std::string details() const {
    std::string s;
    for (const auto& l : lines_) s += "      " + l + "\n";
    if (failures_ > 5) s += "      ... " + std::to_string(failures_ - 5) + " more\n";
    for (const auto& n : notes_) s += "      note: " + n + "\n";
    return s;
  }

 private:
  int failures_ = 0;
  std::vector<std::string> lines_, notes_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string cell(const StateSpec& s) { return describe(s); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<cplx> kTmsnXi{0.3, std::polar(0.5, kPi / 3), 0.7};
const std::vector<cplx> kBsnR{0.5, 1.0, std::polar(2.0, kPi / 4)};

void ac1(Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  for (cplx xi : kTmsnXi)
    for (int M = 0; M <= 3; ++M)
      for (int N = 0; N <= 3; ++N) {
        const double d = (covariance_matrix(build_tmsn({M, N, xi})).gamma -
                          closed_form::tmsn_covariance(M, N, xi).gamma).cwiseAbs().maxCoeff();
        if (d > 1e-8) log.fail(cell(TmsnSpec{M, N, xi}) + ": max entry deviation " + num(d));
      }
  for (cplx r : kBsnR)
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; m <= 4; ++m) {
        const double d = (covariance_matrix(build_bsn({n, m, r})).gamma -
                          closed_form::bsn_covariance(n, m, r).gamma).cwiseAbs().maxCoeff();
        if (d > 1e-10) log.fail(cell(BsnSpec{n, m, r}) + ": max entry deviation " + num(d));
      }
  const double secs = seconds_since(t0);
  log.note("runtime " + num(secs) + " s");
  if (secs >= 10.0) log.fail("runtime " + num(secs) + " s exceeds 10 s");
}

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0}); }

void ac2(Log& log) {
  for (cplx xi : kTmsnXi)
    for (int M = 0; M <= 3; ++M)
      for (int N = 0; N <= 3; ++N) {
        const double d = simon_criterion(covariance_matrix(build_tmsn({M, N, xi}))).lhs;
        const double c = closed_form::tmsn_simon_D(M, N, xi);
        if (!close_rel(d, c, 1e-6)) log.fail(cell(TmsnSpec{M, N, xi}) + ": D " + num(d) + " vs " + num(c));
      }
  for (cplx r : kBsnR)
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; m <= 4; ++m) {
        const double d = simon_criterion(covariance_matrix(build_bsn({n, m, r}))).lhs;
        const double c = closed_form::bsn_simon_D(n, m, r);
        if (!close_rel(d, c, 1e-6)) log.fail(cell(BsnSpec{n, m, r}) + ": D " + num(d) + " vs " + num(c));
      }
  // Sign of the numeric D against the inequality. D vanishes exactly on the
  // region boundary, so |D| is judged against the size of its two factors.
  int boundary = 0;
  for (double x : {0.3, 0.5, 0.7, 0.9})
    for (int M = 0; M <= 10; ++M)
      for (int N = 0; N <= 10; ++N) {
        const double d = simon_criterion(covariance_matrix(build_tmsn({M, N, x}))).lhs;
        const double pre = 4.0 / (1.0 - x * x), mn = double(M) * N, pp = (1.0 + M) * (1.0 + N);
        const double scale = pre * pre * (pp * x * x + mn) * (mn * x * x + pp);
        const bool detectable = closed_form::tmsn_detectable(M, N, x);
        if (std::abs(d) <= 1e-9 * scale) {
          ++boundary;
          if (detectable) log.fail(cell(TmsnSpec{M, N, x}) + ": D = 0 yet the inequality holds strictly");
        } else if ((d < 0) != detectable) {
          log.fail(cell(TmsnSpec{M, N, x}) + ": D = " + num(d) + " but inequality says " +
                   (detectable ? "detectable" : "not detectable"));
        }
      }
  log.note(std::to_string(boundary) + " cells lie on the boundary D = 0 (judged not detectable)");
}

void ac3(Log& log) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> mag(0.05, 5.0), ph(-kPi, kPi);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const cplx r = std::polar(mag(rng), ph(rng));
    for (int n = 0; n <= 20; ++n)
      for (int m = 0; m <= 20; ++m) {
        const double d = simon_criterion(covariance_matrix(build_bsn({n, m, r}))).lhs;
        worst = std::min(worst, d);
        if (d < -1e-9) log.fail(cell(BsnSpec{n, m, r}) + ": D = " + num(d));
      }
  }
  log.note("smallest D " + num(worst));
}

void ac4(Log& log) {
  const survey::RegionGrid g = survey::tmsn_region(0.7, 10, 10);
  const double t = 0.49 / 0.51, s = 0.49 / (0.51 * 0.51);
  if (std::abs(t - 0.9608) > 5e-5 || std::abs(s - 1.8839) > 5e-5) log.fail("t or s off: " + num(t) + ", " + num(s));
  for (int k = 0; k <= 10; ++k) {
    if (!g.at(0, k).detectable) log.fail("cell (0," + std::to_string(k) + ") not detectable");
    if (!g.at(k, 0).detectable) log.fail("cell (" + std::to_string(k) + ",0) not detectable");
  }
  if (!g.at(2, 2).detectable) log.fail("cell (2,2) not detectable");
  if (g.at(3, 3).detectable) log.fail("cell (3,3) detectable");
  for (int M = 0; M <= 10; ++M)
    for (int N = 0; N <= 10; ++N)
      if (g.at(M, N).detectable != ((M - t) * (N - t) < s))
        log.fail("cell (" + std::to_string(M) + "," + std::to_string(N) + ") disagrees with direct arithmetic");
  int count = 0;
  for (const auto& c : g.cells) count += c.detectable;
  log.note(std::to_string(count) + " of 121 cells detectable");
}

void ac5(Log& log) {
  int findings = 0;
  for (double r : {0.5, 1.0, 2.0}) {
    const survey::RegionGrid g = survey::bsn_hz_region(r, 10, 10);
    for (int n = 0; n <= 10; ++n)
      for (int m = 0; m <= 10; ++m) {
        const bool axis = (n == 0) != (m == 0);
        if (g.at(n, m).detectable != axis)
          log.fail(cell(BsnSpec{n, m, r}) + ": closed-form verdict " + (axis ? "misses" : "adds") + " the cell");
        const MomentTable table = numeric_moment_table(build_bsn({n, m, r}), required_monomials(Criterion::hillery_zubairy));
        const bool numeric = hz_criterion(table).entangled();
        if (numeric != g.at(n, m).detectable) {
          ++findings;
          log.note("finding: " + cell(BsnSpec{n, m, r}) + " brute force " + (numeric ? "detects" : "does not detect"));
        }
      }
  }
  log.note("brute-force verdict disagreements: " + std::to_string(findings));
}

void ac6(Log& log) {
  const auto& o = algebra();
  for (double x : {0.3, 0.7})
    for (int M = 0; M <= 3; ++M)
      for (int N = 0; N <= 3; ++N) {
        const MomentTable t = witness_moment_table(build_tmsn({M, N, x}));
        const std::string where = cell(TmsnSpec{M, N, x});
        const double vz = variance(o.J_z, t);
        if (!(vz < 1e-10)) log.fail(where + ": var J_z = " + num(vz));
        const double kx = o.K_x.expectation(t).real();
        const double want = 2 * x * (M + N + 1.0) / (2 * (1 - x * x));
        if (std::abs(kx - want) > 1e-8 || std::abs(kx - closed_form::tmsn_Kx(M, N, x)) > 1e-8)
          log.fail(where + ": <K_x> = " + num(kx) + " vs " + num(want));
        if (!sun_condition_b(t).entangled()) log.fail(where + ": condition B not violated");
      }
}

void ac7(Log& log) {
  const auto& o = algebra();
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m) {
      if (n == m) continue;
      if (!sun_condition_a(witness_moment_table(build_bsn({n, m, 1.0}))).entangled())
        log.fail(cell(BsnSpec{n, m, 1.0}) + ": condition A not violated");
    }
  for (int n = 1; n <= 4; ++n) {
    const MomentTable t = witness_moment_table(build_bsn({n, n, 1.0}));
    if (!sun_condition_fourth(t).entangled()) log.fail(cell(BsnSpec{n, n, 1.0}) + ": fourth-order condition not violated");
    const double lx = o.L_x_tilde.expectation(t).real();
    if (std::abs(lx - closed_form::bsn_Lx(n, n, 1.0)) > 1e-9)
      log.fail(cell(BsnSpec{n, n, 1.0}) + ": <L_x> " + num(lx) + " vs " + num(closed_form::bsn_Lx(n, n, 1.0)));
  }
  for (auto [m, n] : {std::pair{0, 1}, std::pair{1, 5}})
    for (cplx r : {cplx(1.0), std::polar(0.6, 0.3), cplx(2.0, 1.0)})
      for (const BsnSpec& s : {BsnSpec{n, m, r}, BsnSpec{m, n, r}}) {
        const double lx = std::abs(o.L_x_tilde.expectation(witness_moment_table(build_bsn(s))));
        if (lx > 1e-10) log.fail(cell(s) + ": |<L_x>| = " + num(lx));
      }
}

void ac8(Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto pairs = survey::enumerate_blind_pairs(1000000);
  const std::vector<std::pair<std::int64_t, std::int64_t>> head{{0, 1},      {1, 5},        {5, 20},       {20, 76},
                                                                {76, 285},   {285, 1065},   {1065, 3976},  {3976, 14840},
                                                                {14840, 55385}};
  if (pairs.size() != 11) log.fail("found " + std::to_string(pairs.size()) + " pairs, expected 11");
  for (std::size_t i = 0; i < head.size() && i < pairs.size(); ++i)
    if (pairs[i].m != head[i].first || pairs[i].n != head[i].second)
      log.fail("pair " + std::to_string(i + 1) + " is (" + std::to_string(pairs[i].m) + "," + std::to_string(pairs[i].n) + ")");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (survey::blind_pair_residual(pairs[i].m, pairs[i].n) != 0) log.fail("nonzero residual at pair " + std::to_string(i + 1));
    const bool flagged = pairs[i].misprint.has_value();
    if (flagged != (i == 8)) log.fail("misprint flag wrong at pair " + std::to_string(i + 1));
    if (flagged && *pairs[i].misprint != std::pair<std::int64_t, std::int64_t>{4840, 55385})
      log.fail("pair 9 flagged with the wrong misprint");
  }
  const auto exhaustive = survey::search_blind_pairs_exhaustive(100000);
  const auto upto = survey::enumerate_blind_pairs(100000);
  if (exhaustive.size() != upto.size()) {
    log.fail("exhaustive search finds " + std::to_string(exhaustive.size()) + " pairs, recurrence " + std::to_string(upto.size()));
  } else {
    for (std::size_t i = 0; i < upto.size(); ++i)
      if (exhaustive[i] != std::pair{upto[i].m, upto[i].n}) log.fail("exhaustive search differs at pair " + std::to_string(i + 1));
  }
  const double secs = seconds_since(t0);
  log.note("runtime " + num(secs) + " s, last pair (" + (pairs.empty() ? "-" : std::to_string(pairs.back().m) + "," + std::to_string(pairs.back().n)) + ")");
  if (secs >= 5.0) log.fail("runtime " + num(secs) + " s exceeds 5 s");
}

void physical_checks(const StateSpec& spec, Log& log) {
  const FockState s = build_state(spec);
  const std::string where = cell(spec);
  if (std::abs(s.squared_norm() - 1.0) > 1e-12) log.fail(where + ": norm^2 " + num(s.squared_norm()));
  for (Mode md : {Mode::a, Mode::b}) {
    const double c = commutator_defect(s, md);
    if (std::abs(c) > 1e-9) log.fail(where + ": commutator defect " + num(c));
  }
  const MomentTable t = witness_moment_table(s);
  if (!t.is_conjugation_symmetric(1e-10)) log.fail(where + ": moment table not conjugation symmetric");
  const CovarianceMatrix cm = covariance_matrix(s);
  if (!cm.physical) log.fail(where + ": gamma + i Omega not positive, min eigenvalue " + num(min_uncertainty_eigenvalue(cm)));
  if (cm.asymmetry() > 1e-12) log.fail(where + ": gamma not symmetric");
  const auto& o = algebra();
  const double kx = std::norm(o.K_x.expectation(t)), jx = std::norm(o.J_x.expectation(t));
  if (variance(o.K_y, t) * variance(o.K_z, t) - 0.25 * kx < -1e-8 * (1 + kx)) log.fail(where + ": K uncertainty violated");
  if (variance(o.J_y, t) * variance(o.J_z, t) - 0.25 * jx < -1e-8 * (1 + jx)) log.fail(where + ": J uncertainty violated");
}

void ac9(Log& log) {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0), ph(-kPi, kPi);
  int checked = 0;
  for (int k = 0; k < 100; ++k, ++checked) {
    const StateSpec s = u(rng) < 0.5 ? StateSpec{TmsnSpec{count(rng), count(rng), std::polar(0.85 * u(rng), ph(rng))}}
                                     : StateSpec{BsnSpec{count(rng), count(rng), std::polar(0.1 + 3.0 * u(rng), ph(rng))}};
    physical_checks(s, log);
  }
  for (cplx xi : kTmsnXi)
    for (int M = 0; M <= 3; ++M)
      for (int N = 0; N <= 3; ++N, ++checked) physical_checks(TmsnSpec{M, N, xi}, log);
  for (cplx r : kBsnR)
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; m <= 4; ++m, ++checked) physical_checks(BsnSpec{n, m, r}, log);
  log.note(std::to_string(checked) + " states checked");
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void ac10(Log& log, const std::string& cli) {
  if (cli.empty()) {
    log.fail("CLI path not given");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / ("twomode_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> configs{
      {"state", R"({"command": "state", "positional": "tmsn", "options": {"M": 2, "N": 1, "xi": "0.5+0.2i"}})"},
      {"witness", R"({"command": "witness", "positional": "bsn", "options": {"n": 3, "m": 2, "r-abs": 1.3, "r-arg": 0.4}})"},
      {"witness-csv", R"({"command": "witness", "positional": "tmsn", "options": {"M": 3, "N": 3, "xi": "0.7", "format": "csv"}})"},
      {"sweep", R"({"command": "sweep", "positional": "tmsn-region", "options": {"xi": "0.7", "max": 10, "confirm": 5, "seed": 11}})"},
      {"blind", R"({"command": "blind", "options": {"limit": 1000000}})"}};
  for (const auto& [name, body] : configs) {
    const fs::path cfg = dir / (name + ".json");
    std::ofstream(cfg) << body;
    std::string first[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (name + "_" + std::to_string(run) + ".out");
      const std::string cmd = "\"" + cli + "\" --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0) log.fail(name + ": exit status " + std::to_string(rc));
      first[run] = slurp(out);
    }
    if (first[0].empty()) log.fail(name + ": empty output");
    if (first[0] != first[1]) log.fail(name + ": data files differ between runs");
    const fs::path m0 = dir / (name + "_0.out.meta.json"), m1 = dir / (name + "_1.out.meta.json");
    if (!fs::exists(m0)) log.fail(name + ": no metadata sidecar");
  }
  fs::remove_all(dir);
  log.note(std::to_string(configs.size()) + " configurations run twice");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<void(Log&)>>> criteria{
      {"AC1 covariance matches closed forms", ac1},
      {"AC2 Simon D matches closed form and the region inequality", ac2},
      {"AC3 beamsplitter number states never Simon-detected", ac3},
      {"AC4 squeezed-number detectability grid at xi = 0.7", ac4},
      {"AC5 Hillery-Zubairy region is the axes", ac5},
      {"AC6 condition B detects every squeezed number state", ac6},
      {"AC7 beamsplitter detection split and blind pairs", ac7},
      {"AC8 blind-pair enumeration", ac8},
      {"AC9 physicality suite", ac9},
      {"AC10 byte-identical CLI output", [&](Log& l) { ac10(l, cli); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Log log;
    try {
      check(log);
    } catch (const std::exception& e) {
      log.fail(std::string("exception: ") + e.what());
    }
    std::cout << (log.ok() ? "[PASS] " : "[FAIL] ") << name << "\n" << log.details();
    failed += !log.ok();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " acceptance criteria met\n";
  return failed == 0 ? 0 : 1;
}
