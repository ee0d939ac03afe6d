// Copyright 2026 The kzpar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "kz/cgls.hpp"
#include "kz/error.hpp"
#include "kz/spectral.hpp"
#include "support.hpp"

using namespace kz;

TEST(Cgls, HandExample)
{
    // A^T A = [[2,1],[1,2]], A^T b = (1,1) -> x = (1/3, 1/3)
    DenseMatrix a(3, 2, {1, 0, 0, 1, 1, 1});
    const auto  r = cgls_solve(a.view(), DenseVector{1, 1, 0}, 1e-14, 100);
    EXPECT_NEAR(r.x[0], 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(r.x[1], 1.0 / 3.0, 1e-10);
}

TEST(Cgls, ZeroRightHandSide)
{
    DenseMatrix a(3, 2, {1, 0, 0, 1, 1, 1});
    const auto  r = cgls_solve(a.view(), DenseVector{0, 0, 0}, 1e-10, 100);
    EXPECT_EQ(r.x, (DenseVector{0, 0}));
}

TEST(Cgls, RecoversConsistentSolution)
{
    const auto s = test::generated(300, 40);
    const auto r = cgls_solve(s.a.view(), s.b, 1e-13, 5000);
    for (std::size_t j = 0; j < s.cols(); ++j)
        EXPECT_NEAR(r.x[j], (*s.x_star)[j], 1e-8 * (1 + std::abs((*s.x_star)[j])));
}

TEST(Cgls, NonConvergenceCarriesIterate)
{
    const auto s = test::generated(300, 40);
    try
    {
        cgls_solve(s.a.view(), s.b, 1e-14, 2);
        FAIL();
    }
    catch (const NonConvergenceError& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::non_convergence);
        EXPECT_EQ(e.best_iterate().size(), s.cols());
    }
}

TEST(Cgls, DimensionMismatch)
{
    DenseMatrix a(3, 2, {1, 0, 0, 1, 1, 1});
    EXPECT_THROW(cgls_solve(a.view(), DenseVector{1, 1}, 1e-10, 10), Error);
}

TEST(Spectral, Identity)
{
    const std::size_t   n = 5;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        d[i * n + i] = 1.0;
    const auto s = spectral_stats(DenseMatrix(n, n, d).view());
    EXPECT_NEAR(s.sigma_max, 1.0, 1e-8);
    EXPECT_NEAR(s.sigma_min, 1.0, 1e-8);
    EXPECT_NEAR(s.s_max, 0.2, 1e-8);
    EXPECT_NEAR(s.s_min, 0.2, 1e-8);
}

TEST(Spectral, Diagonal123)
{
    const auto s = spectral_stats(DenseMatrix(3, 3, {1, 0, 0, 0, 2, 0, 0, 0, 3}).view());
    EXPECT_NEAR(s.sigma_max, 3.0, 3e-5);
    EXPECT_NEAR(s.sigma_min, 1.0, 1e-5);
    EXPECT_DOUBLE_EQ(s.frobenius_sq, 14.0);
    EXPECT_NEAR(s.s_max, 9.0 / 14.0, 1e-5);
    EXPECT_NEAR(s.s_min, 1.0 / 14.0, 1e-5);
}

TEST(Spectral, ThreeByTwoAgainstClosedForm)
{
    // A^T A = [[10,1],[1,17]]: eigenvalues (27 +- sqrt(53)) / 2
    const auto   s   = spectral_stats(DenseMatrix(3, 2, {3, 0, 0, 4, 1, 1}).view());
    const double lhi = (27.0 + std::sqrt(53.0)) / 2.0, llo = (27.0 - std::sqrt(53.0)) / 2.0;
    EXPECT_NEAR(s.sigma_max, std::sqrt(lhi), 1e-6);
    EXPECT_NEAR(s.sigma_min, std::sqrt(llo), 1e-6);
    const auto ev = test::jacobi_eigenvalues({10, 1, 1, 17}, 2);
    EXPECT_NEAR(*std::max_element(ev.begin(), ev.end()), lhi, 1e-10);
}

TEST(Spectral, DiagonalExtremes)
{
    for (std::size_t n : {2u, 4u, 7u})
    {
        std::vector<double> d(n * n, 0.0);
        double              lo = 1e300, hi = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double v = 0.5 + 1.7 * static_cast<double>((i * 5) % n);
            d[i * n + i]   = v;
            lo             = std::min(lo, v);
            hi             = std::max(hi, v);
        }
        const auto s = spectral_stats(DenseMatrix(n, n, d).view());
        EXPECT_NEAR(s.sigma_max / hi, 1.0, 1e-5);
        EXPECT_NEAR(s.sigma_min / lo, 1.0, 1e-5);
    }
}

TEST(Spectral, RandomAgainstJacobiOracle)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto s  = test::generated(20, 5, seed);
        const auto ev = test::jacobi_eigenvalues(test::gram(s.a), 5);
        const auto st = spectral_stats(s.a.view());
        const auto [mn, mx] = std::minmax_element(ev.begin(), ev.end());
        EXPECT_NEAR(st.sigma_max / std::sqrt(*mx), 1.0, 1e-4) << "seed " << seed;
        EXPECT_NEAR(st.sigma_min / std::sqrt(*mn), 1.0, 1e-4) << "seed " << seed;
        EXPECT_LE(st.s_min, st.s_max);
        EXPECT_LE(st.s_max, 1.0 + 1e-12);
        EXPECT_GT(st.sigma_min, 0.0);
    }
}

TEST(Spectral, UnderdeterminedRejected)
{
    EXPECT_THROW(spectral_stats(DenseMatrix(2, 3, {1, 0, 0, 0, 1, 0}).view()), Error);
}

TEST(OptimalAlpha, WorkedExamples)
{
    EXPECT_NEAR(optimal_alpha(0.3, 0.7, 1), 1.0, 1e-12);
    EXPECT_NEAR(optimal_alpha(0.5, 0.5, 2), 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(optimal_alpha(0.1, 0.9, 3), 2.0, 1e-12);
}

TEST(OptimalAlpha, BranchBoundaryContinuity)
{
    Prng rng(77);
    for (int t = 0; t < 5; ++t)
    {
        const std::size_t q     = 2 + rng.next_u64() % 30;
        const double      gap   = 1.0 / static_cast<double>(q - 1);
        const double      s_min = 0.05 * rng.next_unit();
        const double      s_max = s_min + gap;
        const double      qd    = static_cast<double>(q);
        const double      first = qd / (1 + (qd - 1) * s_min);
        const double      second = 2 * qd / (1 + (qd - 1) * (s_min + s_max));
        EXPECT_NEAR(first, second, 1e-12 * first);
        EXPECT_NEAR(optimal_alpha(s_min, s_max, q), first, 1e-12 * first);
    }
}

TEST(OptimalAlpha, RejectsZeroWorkers)
{
    EXPECT_THROW(optimal_alpha(0.1, 0.2, 0), Error);
}

TEST(PartialAlphas, SingleWorkerIsFullMatrix)
{
    const auto s  = test::generated(200, 10);
    const auto pa = partial_alphas(s.a.view(), 1);
    ASSERT_EQ(pa.size(), 1u);
    EXPECT_NEAR(pa[0], optimal_alpha(spectral_stats(s.a.view()), 1), 1e-12);
}

TEST(PartialAlphas, IdenticalStackedBlocksAgree)
{
    const auto          blk = test::generated(30, 6, 9);
    std::vector<double> data;
    for (int k = 0; k < 3; ++k)
        data.insert(data.end(), blk.a.data().begin(), blk.a.data().end());
    const auto pa = partial_alphas(DenseMatrix(90, 6, data).view(), 3);
    ASSERT_EQ(pa.size(), 3u);
    EXPECT_EQ(pa[0], pa[1]);
    EXPECT_EQ(pa[1], pa[2]);
}

TEST(PartialAlphas, CloseToFullMatrixValue)
{
    const auto   s    = test::generated(200, 10);
    const double full = optimal_alpha(spectral_stats(s.a.view()), 2);
    const auto   pa   = partial_alphas(s.a.view(), 2);
    for (double a : pa)
        EXPECT_NEAR(a / full, 1.0, 0.25);
}

TEST(PartialAlphas, RankDeficientBlockRejected)
{
    const auto s = test::generated(20, 10);
    EXPECT_THROW(partial_alphas(s.a.view(), 4), Error);
}
