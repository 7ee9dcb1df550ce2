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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracle.hpp"
#include "twomode/states.hpp"

using namespace twomode;
namespace cf = twomode::closed_form;

namespace {

const cplx kXiGrid[] = {cplx(0.3), std::polar(0.5, std::numbers::pi / 3), cplx(0.7)};
const cplx kRGrid[] = {cplx(0.5), cplx(1.0), std::polar(2.0, std::numbers::pi / 4)};

double max_abs(const Eigen::Matrix4d& m) { return m.cwiseAbs().maxCoeff(); }

// Brute-force <a†a b†b> for a beamsplitter number state, derived by hand from
// the two-mode binomial expansion; it carries an n*m factor on (1-|r|^2)^2.
double nanb_expanded(int n, int m, cplx r) {
  const double r2 = std::norm(r), den = 1 + r2;
  return ((1 - r2) * (1 - r2) * n * m + r2 * (m * (m - 1.0) + n * (n - 1.0))) / (den * den);
}

oracle::Vec flatten(const FockState& s) {
  const int c = s.cutoff();
  oracle::Vec v(static_cast<Eigen::Index>(c + 1) * (c + 1));
  for (int i = 0; i <= c; ++i)
    for (int j = 0; j <= c; ++j) v(i * (c + 1) + j) = s(i, j);
  return v;
}

}  // namespace

TEST(TmsnCovariance, Examples) {
  const CovarianceMatrix a = cf::tmsn_covariance(0, 0, 0.5);
  EXPECT_LT((a.A() - (5.0 / 3.0) * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(a.C()(0, 0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(a.C()(1, 1), -4.0 / 3.0, 1e-15);
  EXPECT_EQ(a.C()(0, 1), 0.0);

  const CovarianceMatrix b = cf::tmsn_covariance(1, 0, 0.0);
  EXPECT_EQ(b.A(), 3 * Eigen::Matrix2d::Identity());
  EXPECT_EQ(b.B(), Eigen::Matrix2d::Identity());
  EXPECT_EQ(b.C(), Eigen::Matrix2d::Zero());
}

TEST(TmsnCovariance, MatchesNumericCovariance) {
  for (cplx xi : kXiGrid)
    for (int M = 0; M <= 3; ++M)
      for (int N = 0; N <= 3; ++N)
        EXPECT_LT(max_abs(cf::tmsn_covariance(M, N, xi).gamma - covariance_matrix(build_tmsn({M, N, xi})).gamma),
                  1e-8)
            << M << "," << N << "," << xi;
}

TEST(TmsnCovariance, MatchesOracleOperators) {
  for (cplx xi : {cplx(0.3), std::polar(0.45, -2.0)}) {
    for (auto [M, N] : {std::pair{0, 0}, {2, 1}, {1, 3}}) {
      const int c = default_cutoff(TmsnSpec{M, N, xi});
      const oracle::Vec v = oracle::tmsn_by_operators(M, N, xi, c);
      EXPECT_LT(max_abs(cf::tmsn_covariance(M, N, xi).gamma - oracle::covariance(v, oracle::Ops(c))), 1e-8);
    }
  }
}

TEST(TmsnSimonD, Examples) {
  EXPECT_NEAR(cf::tmsn_simon_D(0, 0, 0.7), -30.14225297962322, 1e-11);
  EXPECT_EQ(cf::tmsn_simon_D(0, 0, 0.0), 0.0);
  EXPECT_NEAR(cf::tmsn_simon_D(2, 2, 0.7), -177.55632449058058, 1e-10);
  EXPECT_THROW(cf::tmsn_simon_D(0, 0, 1.0), DomainError);
}

TEST(TmsnSimonD, MatchesDeterminantsOfClosedFormBlocks) {
  for (cplx xi : kXiGrid) {
    for (int M = 0; M <= 5; ++M) {
      for (int N = 0; N <= 5; ++N) {
        const double D = oracle::simon_D(cf::tmsn_covariance(M, N, xi).gamma);
        const double ref = cf::tmsn_simon_D(M, N, xi);
        EXPECT_NEAR(D, ref, 1e-9 * (1 + std::abs(ref)));
      }
    }
  }
}

TEST(TmsnDetectable, Examples) {
  for (int N = 0; N <= 10; ++N) EXPECT_TRUE(cf::tmsn_detectable(0, N, 0.7));
  EXPECT_TRUE(cf::tmsn_detectable(2, 2, 0.7));
  EXPECT_FALSE(cf::tmsn_detectable(3, 3, 0.7));
  const cf::Inequality q = cf::tmsn_detectability(2, 2, 0.7);
  const double t = 0.9607843137254901, s = 1.8838908112264514;
  EXPECT_NEAR(q.lhs, (2 - t) * (2 - t), 1e-14);
  EXPECT_NEAR(q.rhs, s, 1e-14);
  EXPECT_NEAR(cf::tmsn_detectability(3, 3, 0.7).lhs, 4.158400615148019, 1e-12);
}

TEST(TmsnDetectable, SignEquivalenceWithD) {
  // Exact third opinion: D < 0 iff (1+M)(1+N)|xi|^2 > MN, with |xi|^2 = k/100.
  for (int k : {9, 25, 49, 81}) {
    const double x = std::sqrt(k / 100.0);
    for (int M = 0; M <= 10; ++M) {
      for (int N = 0; N <= 10; ++N) {
        const int exact = (1 + M) * (1 + N) * k - 100 * M * N;
        EXPECT_EQ(cf::tmsn_detectable(M, N, x), exact > 0) << M << "," << N << "," << x;
        if (exact != 0) EXPECT_EQ(cf::tmsn_simon_D(M, N, x) < 0, exact > 0) << M << "," << N << "," << x;
      }
    }
  }
}

TEST(BsnCovariance, Examples) {
  const CovarianceMatrix c = cf::bsn_covariance(1, 0, 1.0);
  EXPECT_EQ(c.A(), 2 * Eigen::Matrix2d::Identity());
  EXPECT_EQ(c.B(), 2 * Eigen::Matrix2d::Identity());
  EXPECT_EQ(c.C(), -Eigen::Matrix2d::Identity());
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(cf::bsn_covariance(n, n, std::polar(1.5, 0.7)).C(), Eigen::Matrix2d::Zero());
}

TEST(BsnCovariance, MatchesNumericCovariance) {
  for (cplx r : kRGrid)
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; m <= 4; ++m)
        EXPECT_LT(max_abs(cf::bsn_covariance(n, m, r).gamma - covariance_matrix(build_bsn({n, m, r})).gamma), 1e-10)
            << n << "," << m << "," << r;
}

TEST(BsnCovariance, MatchesOracleExpansion) {
  const cplx r = std::polar(0.8, 2.5);
  for (auto [n, m] : {std::pair{1, 0}, {0, 2}, {3, 1}}) {
    const oracle::Vec v = oracle::bsn(n, m, r, n + m + 1);
    EXPECT_LT(max_abs(cf::bsn_covariance(n, m, r).gamma - oracle::covariance(v, oracle::Ops(n + m + 1))), 1e-12);
  }
}

TEST(BsnSimonD, ExamplesAndPositivity) {
  EXPECT_DOUBLE_EQ(cf::bsn_simon_D(1, 0, 1.0), 4.0);
  EXPECT_EQ(cf::bsn_simon_D(0, 0, 1.0), 0.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> mag(0.05, 5.0), ph(-3.14, 3.14);
  for (int k = 0; k < 10; ++k) {
    const cplx r = std::polar(mag(rng), ph(rng));
    for (int n = 0; n <= 20; ++n)
      for (int m = 0; m <= 20; ++m) EXPECT_GE(cf::bsn_simon_D(n, m, r), 0.0);
  }
  EXPECT_THROW(cf::bsn_simon_D(1, 0, 0.0), DomainError);
}

TEST(BsnSimonD, MatchesDeterminantsOfClosedFormBlocks) {
  for (cplx r : kRGrid)
    for (int n = 0; n <= 6; ++n)
      for (int m = 0; m <= 6; ++m) {
        const double ref = cf::bsn_simon_D(n, m, r);
        EXPECT_NEAR(oracle::simon_D(cf::bsn_covariance(n, m, r).gamma), ref, 1e-9 * (1 + ref));
      }
}

TEST(BsnHzMoments, CrossTermAndExamples) {
  EXPECT_NEAR(std::abs(cf::bsn_hz_moments(1, 0, 1.0).second - cplx(-0.5)), 0.0, 1e-15);
  EXPECT_EQ(cf::bsn_hz_moments(0, 0, 1.0).second, cplx(0.0));
  for (cplx r : kRGrid) {
    for (int n = 0; n <= 3; ++n) {
      for (int m = 0; m <= 3; ++m) {
        const FockState s = build_bsn({n, m, r});
        const cplx ab = moment(s, {0, 1, 1, 0});
        const double nanb = moment(s, {1, 1, 1, 1}).real();
        const auto [printed_nanb, printed_ab] = cf::bsn_hz_moments(n, m, r);
        EXPECT_LT(std::abs(ab - printed_ab), 1e-12);
        EXPECT_NEAR(nanb, nanb_expanded(n, m, r), 1e-12);
        // The printed <a†a b†b> drops the n*m weight on (1-|r|^2)^2.
        const double r2 = std::norm(r), den = (1 + r2) * (1 + r2);
        EXPECT_NEAR(printed_nanb - nanb, (1 - r2) * (1 - r2) * (1.0 - n * m) / den, 1e-12);
      }
    }
  }
  // Vacuum at r = 0.5: printed value 0.36, true value 0.
  EXPECT_NEAR(cf::bsn_hz_moments(0, 0, 0.5).first, 0.36, 1e-15);
  EXPECT_EQ(moment(build_bsn({0, 0, 0.5}), {1, 1, 1, 1}), cplx(0.0));
}

TEST(BsnHzDetectable, Examples) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> mag(0.05, 20.0);
  for (int k = 0; k < 10; ++k) {
    EXPECT_TRUE(cf::bsn_hz_detectable(1, 0, mag(rng)));
    EXPECT_TRUE(cf::bsn_hz_detectable(0, 1, mag(rng)));
  }
  EXPECT_FALSE(cf::bsn_hz_detectable(1, 1, 1.0));
}

TEST(BsnHzDetectable, AxesOnly) {
  for (double r : {0.1, 0.5, 1.0, 2.0})
    for (int n = 0; n <= 10; ++n)
      for (int m = 0; m <= 10; ++m)
        EXPECT_EQ(cf::bsn_hz_detectable(n, m, r), (n == 0) != (m == 0)) << n << "," << m << "," << r;
}

TEST(BsnHzDetectable, EquivalentToExpandedMoments) {
  for (cplx r : {cplx(0.5), cplx(1.0), cplx(2.0), std::polar(1.3, 0.4)})
    for (int n = 0; n <= 10; ++n)
      for (int m = 0; m <= 10; ++m) {
        const double rhs = std::norm(cf::bsn_hz_moments(n, m, r).second);
        EXPECT_EQ(cf::bsn_hz_detectable(n, m, r), nanb_expanded(n, m, r) < rhs - 1e-12) << n << "," << m;
      }
}

TEST(TmsnKx, Examples) {
  EXPECT_NEAR(cf::tmsn_Kx(0, 0, 0.5), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(cf::tmsn_Kx(2, 1, cplx(0, 0.6)), 0.0);
  EXPECT_NEAR(cf::tmsn_Kx(3, 3, 0.7), 9.6078431372549, 1e-12);
}

TEST(TmsnKx, MatchesNumericMoments) {
  for (double xi : {0.3, 0.7}) {
    for (int M = 0; M <= 3; ++M) {
      for (int N = 0; N <= 3; ++N) {
        const FockState s = build_tmsn({M, N, xi});
        // K_x = (a†b† + ab)/2
        const double kx = 0.5 * (moment(s, {1, 0, 1, 0}) + moment(s, {0, 1, 0, 1})).real();
        EXPECT_NEAR(kx, cf::tmsn_Kx(M, N, xi), 1e-8);
        EXPECT_GT(std::abs(kx), 0.0);
      }
    }
  }
}

TEST(BsnJx, PrintedSignIsOppositeToTheState) {
  EXPECT_DOUBLE_EQ(cf::bsn_Jx(1, 0, 1.0), 0.5);
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(cf::bsn_Jx(n, n, 2.0), 0.0);
  for (cplx r : kRGrid) {
    for (int n = 0; n <= 4; ++n) {
      for (int m = 0; m <= 4; ++m) {
        const FockState s = build_bsn({n, m, r});
        const double jx = 0.5 * (moment(s, {1, 0, 0, 1}) + moment(s, {0, 1, 1, 0})).real();
        EXPECT_NEAR(jx, -cf::bsn_Jx(n, m, r), 1e-10);
      }
    }
  }
}

TEST(BsnLx, Examples) {
  EXPECT_NEAR(cf::bsn_Lx(1, 1, 1.0), -1.0, 1e-15);
  EXPECT_NEAR(cf::bsn_Lx_magnitude_equal(1, 1.0), 1.0, 1e-15);
  EXPECT_EQ(cf::bsn_Lx(1, 0, 1.7), 0.0);
  for (int n = 0; n <= 6; ++n) {
    const cplx r = std::polar(1.4, 0.3);
    EXPECT_NEAR(std::abs(cf::bsn_Lx(n, n, r)), cf::bsn_Lx_magnitude_equal(n, r), 1e-12);
  }
}

TEST(BsnLx, MatchesNumericMoments) {
  for (cplx r : {cplx(1.0), std::polar(2.0, std::numbers::pi / 6)}) {
    for (int n = 0; n <= 4; ++n) {
      for (int m = 0; m <= 4; ++m) {
        const FockState s = build_bsn({n, m, r});
        // L~_x = (a†^2 b^2 + a^2 b†^2)/2
        const double lx = 0.5 * (moment(s, {2, 0, 0, 2}) + moment(s, {0, 2, 2, 0})).real();
        EXPECT_NEAR(lx, cf::bsn_Lx(n, m, r), 1e-10) << n << "," << m;
      }
    }
  }
}

TEST(AnalyticMoments, FamilyFields) {
  const cf::AnalyticMoments t = cf::analytic_moments(TmsnSpec{1, 2, 0.4});
  EXPECT_EQ(t.family, cf::Family::tmsn);
  EXPECT_TRUE(t.Kx && t.simon_region);
  EXPECT_FALSE(t.Jx || t.Lx || t.NaNb);
  const cf::AnalyticMoments b = cf::analytic_moments(BsnSpec{2, 1, 0.4});
  EXPECT_EQ(b.family, cf::Family::bsn);
  EXPECT_TRUE(b.Jx && b.Lx && b.NaNb && b.a_bdag && b.hz_region);
  EXPECT_FALSE(b.Kx);
  EXPECT_THROW(cf::analytic_moments(TmsnSpec{0, 0, 2.0}), DomainError);
}
