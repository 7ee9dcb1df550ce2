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

#include "twomode/witnesses.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "twomode/closed_form.hpp"

namespace twomode {
namespace {

using P = Polynomial;

constexpr double kTmsnCheckTolerance = 1e-8;
constexpr double kBsnCheckTolerance = 1e-10;
constexpr double kDRelativeTolerance = 1e-6;

AlgebraOperators make_algebra() {
  const cplx half(0.5, 0.0);
  const cplx minus_half_i(0.0, -0.5);  // 1/(2i)
  const P a = P::a(), ad = P::a_dag(), b = P::b(), bd = P::b_dag();
  const P na = ad * a, nb = bd * b, one = P::constant(1.0);

  AlgebraOperators ops;
  ops.J_x = half * (ad * b + a * bd);
  ops.J_y = minus_half_i * (ad * b - a * bd);
  ops.J_z = half * (na - nb);
  ops.K_x = half * (ad * bd + a * b);
  ops.K_y = minus_half_i * (ad * bd - a * b);
  ops.K_z = half * (na + nb + one);

  const P pair_up = ad * bd, pair_down = a * b;
  const P hop_ab = ad * b, hop_ba = a * bd;
  ops.H_x = half * (pair_up * pair_up + pair_down * pair_down);
  ops.H_y = minus_half_i * (pair_up * pair_up - pair_down * pair_down);
  ops.N_plus = cplx(0.25) * (na + nb);
  ops.L_x_tilde = half * (hop_ab * hop_ab + hop_ba * hop_ba);
  ops.L_y_tilde = minus_half_i * (hop_ab * hop_ab - hop_ba * hop_ba);
  ops.N_22 = (cplx(2.0) * na + one) * (cplx(2.0) * nb + one);
  return ops;
}

// A variance cannot be negative; <X^2> - <X>^2 can be, by cancellation, and
// a large partner factor would then turn rounding into a spurious violation.
double clamped_variance(const P& x, const MomentTable& t) { return std::max(0.0, variance(x, t)); }

// FNV-1a over the bit patterns of the inputs.
class InputHash {
 public:
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xffu;
      h_ *= 0x100000001b3ull;
    }
  }
  void add(double d) { add(std::bit_cast<std::uint64_t>(d == 0.0 ? 0.0 : d)); }
  void add(cplx z) {
    add(z.real());
    add(z.imag());
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

std::uint64_t hash_inputs(Criterion c, const MomentTable& table) {
  InputHash h;
  h.add(static_cast<std::uint64_t>(c));
  for (const auto& m : required_monomials(c)) {
    h.add(static_cast<std::uint64_t>((m.k << 24) | (m.l << 16) | (m.p << 8) | m.q));
    h.add(table.at(m));
  }
  return h.value();
}

WitnessReport make_report(Criterion c, double lhs, double rhs, double tol, std::uint64_t hash) {
  WitnessReport r;
  r.criterion = c;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  r.verdict = r.margin < -tol ? Verdict::entangled : Verdict::separable_consistent;
  r.inputs_hash = hash;
  return r;
}

std::set<LadderMonomial> monomials_of(std::initializer_list<const P*> polys) {
  std::set<LadderMonomial> out;
  for (const P* p : polys) {
    const auto ms = p->monomials();
    out.insert(ms.begin(), ms.end());
    const auto sq = (*p * *p).monomials();
    out.insert(sq.begin(), sq.end());
  }
  out.erase(LadderMonomial{});
  return out;
}

// Tables from outside may store only one member of each conjugate pair.
MomentTable prepared(const MomentTable& table) { return table.completed_by_conjugation(); }

double check_tolerance(const StateSpec& spec) {
  return std::holds_alternative<TmsnSpec>(spec) ? kTmsnCheckTolerance : kBsnCheckTolerance;
}

CrossCheck make_check(std::string quantity, cplx numeric, cplx closed, double tol, std::string note = {}) {
  CrossCheck c;
  c.quantity = std::move(quantity);
  c.numeric = numeric;
  c.closed_form = closed;
  c.delta = std::abs(numeric - closed);
  c.tolerance = tol;
  if (!c.agrees()) c.note = std::move(note);
  return c;
}

double det_D(const CovarianceMatrix& g) {
  return g.gamma.determinant() + 1.0 - g.A().determinant() - g.B().determinant() +
         2.0 * g.C().determinant();
}

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::simon:
      return "simon";
    case Criterion::hillery_zubairy:
      return "hillery-zubairy";
    case Criterion::su_condition_a:
      return "su-condition-a";
    case Criterion::su_condition_b:
      return "su-condition-b";
    case Criterion::su_condition_fourth:
      return "su-condition-fourth";
  }
  return "unknown";
}

std::optional<Criterion> criterion_from_string(const std::string& s) {
  for (Criterion c : kAllCriteria) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string to_string(Verdict v) {
  return v == Verdict::entangled ? "entangled" : "separable-consistent";
}

std::optional<Verdict> verdict_from_string(const std::string& s) {
  if (s == "entangled") return Verdict::entangled;
  if (s == "separable-consistent") return Verdict::separable_consistent;
  return std::nullopt;
}

const AlgebraOperators& algebra() {
  static const AlgebraOperators ops = make_algebra();
  return ops;
}

std::set<LadderMonomial> required_monomials(Criterion c) {
  const auto& o = algebra();
  switch (c) {
    case Criterion::simon: {
      auto s = covariance_monomials();
      s.erase(LadderMonomial{});
      return s;
    }
    case Criterion::hillery_zubairy:
      return {{1, 1, 1, 1}, {0, 1, 1, 0}};
    case Criterion::su_condition_a:
      return monomials_of({&o.J_y, &o.K_z, &o.J_x});
    case Criterion::su_condition_b:
      return monomials_of({&o.K_y, &o.J_z, &o.K_x});
    case Criterion::su_condition_fourth:
      return monomials_of({&o.L_y_tilde, &o.N_plus, &o.L_x_tilde, &o.N_22});
  }
  return {};
}

int required_order(Criterion c) {
  int o = 0;
  for (const auto& m : required_monomials(c)) o = std::max(o, m.order());
  return o;
}

WitnessReport simon_criterion(const CovarianceMatrix& gamma, double tol) {
  if (gamma.asymmetry() > kDefaultTolerance) {
    throw DomainError("covariance matrix is not symmetric (asymmetry " +
                      std::to_string(gamma.asymmetry()) + ")");
  }
  InputHash h;
  h.add(static_cast<std::uint64_t>(Criterion::simon));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) h.add(gamma.gamma(i, j));
  return make_report(Criterion::simon, det_D(gamma), 0.0, tol, h.value());
}

WitnessReport hz_criterion(const MomentTable& table, double tol) {
  const MomentTable t = prepared(table);
  const double lhs = t.at({1, 1, 1, 1}).real();
  const double rhs = std::norm(t.at({0, 1, 1, 0}));
  return make_report(Criterion::hillery_zubairy, lhs, rhs, tol,
                     hash_inputs(Criterion::hillery_zubairy, t));
}

WitnessReport sun_condition_a(const MomentTable& table, double tol) {
  const MomentTable t = prepared(table);
  const auto& o = algebra();
  const double lhs = (clamped_variance(o.J_y, t) + 0.25) * clamped_variance(o.K_z, t);
  const double rhs = 0.25 * std::norm(o.J_x.expectation(t));
  return make_report(Criterion::su_condition_a, lhs, rhs, tol,
                     hash_inputs(Criterion::su_condition_a, t));
}

WitnessReport sun_condition_b(const MomentTable& table, double tol) {
  const MomentTable t = prepared(table);
  const auto& o = algebra();
  const double lhs = (clamped_variance(o.K_y, t) - 0.25) * clamped_variance(o.J_z, t);
  const double rhs = 0.25 * std::norm(o.K_x.expectation(t));
  return make_report(Criterion::su_condition_b, lhs, rhs, tol,
                     hash_inputs(Criterion::su_condition_b, t));
}

WitnessReport sun_condition_fourth(const MomentTable& table, double tol) {
  const MomentTable t = prepared(table);
  const auto& o = algebra();
  const double lhs =
      (clamped_variance(o.L_y_tilde, t) + o.N_22.expectation(t).real()) * clamped_variance(o.N_plus, t);
  const double rhs = 0.25 * std::norm(o.L_x_tilde.expectation(t));
  return make_report(Criterion::su_condition_fourth, lhs, rhs, tol,
                     hash_inputs(Criterion::su_condition_fourth, t));
}

WitnessReport evaluate(Criterion c, const MomentTable& table, double tol) {
  switch (c) {
    case Criterion::simon: {
      const MomentTable t = prepared(table);
      for (const auto& m : required_monomials(c)) t.at(m);
      return simon_criterion(covariance_from_moments(t), tol);
    }
    case Criterion::hillery_zubairy:
      return hz_criterion(table, tol);
    case Criterion::su_condition_a:
      return sun_condition_a(table, tol);
    case Criterion::su_condition_b:
      return sun_condition_b(table, tol);
    case Criterion::su_condition_fourth:
      return sun_condition_fourth(table, tol);
  }
  throw std::logic_error("unknown criterion");
}

MomentTable witness_moment_table(const FockState& state) {
  std::set<LadderMonomial> all = covariance_monomials();
  for (Criterion c : kAllCriteria) {
    const auto r = required_monomials(c);
    all.insert(r.begin(), r.end());
  }
  return numeric_moment_table(state, all, kExtendedMaxOrder);
}

std::vector<WitnessReport> evaluate_all(const MomentTable& table, double tol) {
  std::vector<WitnessReport> out;
  for (Criterion c : kAllCriteria) out.push_back(evaluate(c, table, tol));
  return out;
}

PartialEvaluation evaluate_available(const MomentTable& table, double tol) {
  const MomentTable t = prepared(table);
  PartialEvaluation out;
  for (Criterion c : kAllCriteria) {
    const auto req = required_monomials(c);
    const bool have = std::all_of(req.begin(), req.end(), [&](const auto& m) { return t.contains(m); });
    if (have) {
      out.reports.push_back(evaluate(c, t, tol));
    } else {
      out.skipped.push_back(c);
    }
  }
  return out;
}

const WitnessReport& FullReport::report(Criterion c) const {
  for (const auto& r : reports) {
    if (r.criterion == c) return r;
  }
  throw std::out_of_range("report has no entry for " + to_string(c));
}

std::vector<CrossCheck> cross_checks(const StateSpec& spec, const MomentTable& table) {
  const auto cf = closed_form::analytic_moments(spec);
  const auto& o = algebra();
  const double tol = check_tolerance(spec);
  const CovarianceMatrix gamma = covariance_from_moments(table);

  std::vector<CrossCheck> out;
  const double cov_dev = (gamma.gamma - cf.covariance.gamma).cwiseAbs().maxCoeff();
  out.push_back(make_check("covariance max entry deviation", cov_dev, 0.0, tol));
  const double D = det_D(gamma);
  // D is a difference of terms much larger than itself near the region
  // boundary, so the absolute floor follows the size of those terms.
  const CovarianceMatrix& g = cf.covariance;
  const double terms = std::abs(g.gamma.determinant()) + 1.0 + std::abs(g.A().determinant()) +
                       std::abs(g.B().determinant()) + 2.0 * std::abs(g.C().determinant());
  out.push_back(make_check("simon D", D, cf.simon_D,
                           kDRelativeTolerance * std::abs(cf.simon_D) + 1e-12 * terms));

  if (cf.family == closed_form::Family::tmsn) {
    out.push_back(make_check("<K_x>", o.K_x.expectation(table), *cf.Kx, tol));
    out.push_back(make_check("var J_z", variance(o.J_z, table), 0.0, tol));
    return out;
  }

  out.push_back(make_check("<a b+>", table.at({0, 1, 1, 0}), *cf.a_bdag, tol));
  out.push_back(make_check("<a+a b+b>", table.at({1, 1, 1, 1}), *cf.NaNb, tol,
                           "closed form lacks the n*m factor on (1-|r|^2)^2"));
  out.push_back(make_check("<J_x>", o.J_x.expectation(table), *cf.Jx, tol,
                           "closed form carries (n-m); the state gives (m-n)"));
  out.push_back(make_check("<L~_x>", o.L_x_tilde.expectation(table), *cf.Lx, tol));
  out.push_back(make_check("var K_z", variance(o.K_z, table), 0.0, tol));
  out.push_back(make_check("var N_+", variance(o.N_plus, table), 0.0, tol));
  return out;
}

FullReport full_report(const StateSpec& spec, const WitnessOptions& options) {
  validate(spec);
  const FockState state = build_state(spec, options.cutoff);
  const MomentTable table = witness_moment_table(state);

  FullReport out;
  out.spec = spec;
  out.cutoff = state.cutoff();
  out.tail_bound = state.tail_bound();
  out.reports = evaluate_all(table, options.witness_tolerance);
  out.cross_checks = cross_checks(spec, table);
  return out;
}

}  // namespace twomode
