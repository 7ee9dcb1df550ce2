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

#include "twomode/closed_form.hpp"

#include <cmath>

namespace twomode::closed_form {
CovarianceMatrix tmsn_covariance(int M, int N, cplx xi) {
  validate(TmsnSpec{M, N, xi});
  const double x2 = std::norm(xi);
  const double x = std::sqrt(x2);
  const double theta = std::arg(xi);
  const double den = 1.0 - x2;
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d rot;
  rot << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
  return CovarianceMatrix::from_blocks((1.0 + 2 * M + (1.0 + 2 * N) * x2) / den * I,
                                       (1.0 + 2 * N + (1.0 + 2 * M) * x2) / den * I,
                                       2.0 * x * (1.0 + M + N) / den * rot);
}

double tmsn_simon_D(int M, int N, cplx xi) {
  validate(TmsnSpec{M, N, xi});
  const double x2 = std::norm(xi);
  const double pre = 4.0 / (1.0 - x2);
  const double mn = static_cast<double>(M) * N;
  const double pp = (1.0 + N) * (1.0 + M);
  return pre * pre * (pp * x2 - mn) * (mn * x2 - pp);
}

Inequality tmsn_detectability(int M, int N, cplx xi) {
  validate(TmsnSpec{M, N, xi});
  const double x2 = std::norm(xi);
  const double t = x2 / (1.0 - x2);
  return {(M - t) * (N - t), x2 / ((1.0 - x2) * (1.0 - x2))};
}

bool tmsn_detectable(int M, int N, cplx xi) { return tmsn_detectability(M, N, xi).holds(); }

CovarianceMatrix bsn_covariance(int n, int m, cplx r) {
  validate(BsnSpec{n, m, r});
  const double r2 = std::norm(r);
  const double ra = std::sqrt(r2);
  const double phi = std::arg(r);
  const double den = 1.0 + r2;
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d rot;
  rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return CovarianceMatrix::from_blocks((1.0 + r2 + 2.0 * (n + r2 * m)) / den * I,
                                       (1.0 + r2 + 2.0 * (r2 * n + m)) / den * I,
                                       2.0 * ra * (m - n) / den * rot);
}

double bsn_simon_D(int n, int m, cplx r) {
  validate(BsnSpec{n, m, r});
  const double r2 = std::norm(r);
  const double den = 1.0 + r2;
  return 16.0 / (den * den) * (m * (1.0 + n) + (1.0 + m) * n * r2) *
         ((1.0 + m) * n + m * (1.0 + n) * r2);
}

std::pair<double, cplx> bsn_hz_moments(int n, int m, cplx r) {
  validate(BsnSpec{n, m, r});
  const double r2 = std::norm(r);
  const double den = 1.0 + r2;
  const double nn = ((1.0 - r2) * (1.0 - r2) + r2 * (m * (m - 1.0) + n * (n - 1.0))) / (den * den);
  return {nn, r / den * static_cast<double>(m - n)};
}

Inequality bsn_hz_detectability(int n, int m, cplx r) {
  validate(BsnSpec{n, m, r});
  const double r2 = std::norm(r);
  const double t = r2 / (1.0 + r2 * r2);
  return {(m - t) * (n - t), t * t};
}

bool bsn_hz_detectable(int n, int m, cplx r) { return bsn_hz_detectability(n, m, r).holds(); }

double tmsn_Kx(int M, int N, cplx xi) {
  validate(TmsnSpec{M, N, xi});
  return (xi + std::conj(xi)).real() / (2.0 * (1.0 - std::norm(xi))) * (M + N + 1.0);
}

double bsn_Jx(int n, int m, cplx r) {
  validate(BsnSpec{n, m, r});
  return (r + std::conj(r)).real() / (2.0 * (1.0 + std::norm(r))) * static_cast<double>(n - m);
}

double bsn_Lx(int n, int m, cplx r) {
  validate(BsnSpec{n, m, r});
  const double den = 1.0 + std::norm(r);
  const double pre = (r * r + std::conj(r) * std::conj(r)).real() / (2.0 * den * den);
  return pre * (m * (m - 1.0) + n * (n - 1.0) - 4.0 * n * m);
}

double bsn_Lx_magnitude_equal(int n, cplx r) {
  validate(BsnSpec{n, n, r});
  const double den = 1.0 + std::norm(r);
  return std::abs(r * r + std::conj(r) * std::conj(r)) / (den * den) * n * (n + 1.0);
}

AnalyticMoments analytic_moments(const StateSpec& spec) {
  validate(spec);
  AnalyticMoments out;
  out.spec = spec;
  if (const auto* t = std::get_if<TmsnSpec>(&spec)) {
    out.family = Family::tmsn;
    out.covariance = tmsn_covariance(t->M, t->N, t->xi);
    out.simon_D = tmsn_simon_D(t->M, t->N, t->xi);
    out.simon_region = tmsn_detectability(t->M, t->N, t->xi);
    out.Kx = tmsn_Kx(t->M, t->N, t->xi);
    return out;
  }
  const auto& b = std::get<BsnSpec>(spec);
  out.family = Family::bsn;
  out.covariance = bsn_covariance(b.n, b.m, b.r);
  out.simon_D = bsn_simon_D(b.n, b.m, b.r);
  const auto [nn, abd] = bsn_hz_moments(b.n, b.m, b.r);
  out.NaNb = nn;
  out.a_bdag = abd;
  out.hz_region = bsn_hz_detectability(b.n, b.m, b.r);
  out.Jx = bsn_Jx(b.n, b.m, b.r);
  out.Lx = bsn_Lx(b.n, b.m, b.r);
  return out;
}

}  // namespace twomode::closed_form
