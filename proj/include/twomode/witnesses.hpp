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

#ifndef TWOMODE_WITNESSES_HPP
#define TWOMODE_WITNESSES_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twomode/fock_core.hpp"
#include "twomode/states.hpp"

namespace twomode {

/// A verdict is "entangled" only when the margin is below -kWitnessTolerance.
inline constexpr double kWitnessTolerance = 1e-7;

enum class Criterion {
  simon,                // det gamma + 1 - det A - det B + 2 det C >= 0
  hillery_zubairy,      // <a†a b†b> >= |<a b†>|^2
  su_condition_a,       // [<D^2 J_y> + 1/4] <D^2 K_z> >= |<J_x>|^2 / 4
  su_condition_b,       // [<D^2 K_y> - 1/4] <D^2 J_z> >= |<K_x>|^2 / 4
  su_condition_fourth,  // [<D^2 L~_y> + <N_22>] <D^2 N_+> >= |<L~_x>|^2 / 4
};

inline constexpr Criterion kAllCriteria[] = {Criterion::simon, Criterion::hillery_zubairy,
                                             Criterion::su_condition_a, Criterion::su_condition_b,
                                             Criterion::su_condition_fourth};

std::string to_string(Criterion c);
std::optional<Criterion> criterion_from_string(const std::string& s);

enum class Verdict { separable_consistent, entangled };

std::string to_string(Verdict v);
std::optional<Verdict> verdict_from_string(const std::string& s);

struct WitnessReport {
  Criterion criterion = Criterion::simon;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  Verdict verdict = Verdict::separable_consistent;
  std::uint64_t inputs_hash = 0;

  bool entangled() const { return verdict == Verdict::entangled; }
};

/// Second-order SU(2) / SU(1,1) generators and the fourth-order set used by
/// the two-photon-exchange condition.
struct AlgebraOperators {
  Polynomial J_x, J_y, J_z;
  Polynomial K_x, K_y, K_z;
  Polynomial H_x, H_y, N_plus;
  Polynomial L_x_tilde, L_y_tilde, N_22;
};

const AlgebraOperators& algebra();

/// Monomials a criterion reads from a moment table.
std::set<LadderMonomial> required_monomials(Criterion c);

/// Highest monomial order a criterion needs (2, 4 or 8).
int required_order(Criterion c);

WitnessReport simon_criterion(const CovarianceMatrix& gamma, double tol = kWitnessTolerance);
WitnessReport hz_criterion(const MomentTable& table, double tol = kWitnessTolerance);
WitnessReport sun_condition_a(const MomentTable& table, double tol = kWitnessTolerance);
WitnessReport sun_condition_b(const MomentTable& table, double tol = kWitnessTolerance);
WitnessReport sun_condition_fourth(const MomentTable& table, double tol = kWitnessTolerance);

WitnessReport evaluate(Criterion c, const MomentTable& table, double tol = kWitnessTolerance);

/// Numeric moments of `state` covering every criterion.
MomentTable witness_moment_table(const FockState& state);

/// All criteria in kAllCriteria order. Throws MissingMomentError when the
/// table (after conjugate completion) lacks a required entry.
std::vector<WitnessReport> evaluate_all(const MomentTable& table, double tol = kWitnessTolerance);

struct PartialEvaluation {
  std::vector<WitnessReport> reports;
  std::vector<Criterion> skipped;
};

/// Like evaluate_all, but skips criteria whose moments are missing.
PartialEvaluation evaluate_available(const MomentTable& table, double tol = kWitnessTolerance);

/// Numeric value against a closed form for one quantity.
struct CrossCheck {
  std::string quantity;
  cplx numeric;
  cplx closed_form;
  double delta = 0.0;
  double tolerance = 0.0;
  std::string note;

  bool agrees() const { return delta <= tolerance; }
};

struct WitnessOptions {
  double witness_tolerance = kWitnessTolerance;
  std::optional<int> cutoff;
};

struct FullReport {
  StateSpec spec;
  int cutoff = 0;
  double tail_bound = 0.0;
  std::vector<WitnessReport> reports;
  std::vector<CrossCheck> cross_checks;

  const WitnessReport& report(Criterion c) const;
};

FullReport full_report(const StateSpec& spec, const WitnessOptions& options = {});

/// Closed-form comparisons for a constructed state.
std::vector<CrossCheck> cross_checks(const StateSpec& spec, const MomentTable& table);

}  // namespace twomode

#endif  // TWOMODE_WITNESSES_HPP
