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

#include "kz/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kz/cgls.hpp"
#include "kz/error.hpp"
#include "kz/sampling.hpp"

namespace kz {

namespace {

DenseVector
start_vector(std::size_t n)
{
    // fixed seed: the estimate must not depend on any run seed
    Prng        rng(0x5eed5eedULL);
    DenseVector v(n);
    for (auto& e : v)
        e = 0.5 + rng.next_unit();
    const double nv = norm2(v);
    for (auto& e : v)
        e /= nv;
    return v;
}

void
normalize(DenseVector& v)
{
    const double nv = norm2(v);
    for (auto& e : v)
        e /= nv;
}

// ||A v||^2 for unit v: Rayleigh quotient of A^T A
double
rayleigh(const MatrixView& a, const DenseVector& v)
{
    const DenseVector av = multiply(a, v);
    return dot(av, av);
}

double
largest_eigenvalue(const MatrixView& a, const SpectralOptions& opts)
{
    DenseVector v      = start_vector(a.cols());
    double      lambda = rayleigh(a, v);
    for (std::size_t it = 0; it < opts.max_iterations; ++it)
    {
        v = multiply_transpose(a, multiply(a, v));
        normalize(v);
        const double next = rayleigh(a, v);
        if (std::abs(next - lambda) <= opts.tolerance * next)
            return next;
        lambda = next;
    }
    throw Error(ErrorCode::non_convergence,
                "spectral_stats: power iteration for sigma_max did not converge");
}

double
smallest_eigenvalue(const MatrixView& a, const SpectralOptions& opts)
{
    DenseVector v      = start_vector(a.cols());
    double      lambda = rayleigh(a, v);
    for (std::size_t it = 0; it < opts.max_iterations; ++it)
    {
        CglsResult solved;
        try
        {
            solved = solve_normal_equations(a, v, opts.inner_tolerance, 20 * a.cols() + 100);
        }
        catch (const NonConvergenceError&)
        {
            throw Error(ErrorCode::non_convergence,
                        "spectral_stats: inverse iteration for sigma_min did not converge "
                        "(matrix may be rank deficient)");
        }
        v = std::move(solved.x);
        normalize(v);
        const double next = rayleigh(a, v);
        if (std::abs(next - lambda) <= opts.tolerance * next)
            return next;
        lambda = next;
    }
    throw Error(ErrorCode::non_convergence,
                "spectral_stats: inverse iteration for sigma_min did not converge");
}

} // namespace

SpectralStats
spectral_stats(const MatrixView& a, const SpectralOptions& opts)
{
    if (a.rows() < a.cols())
        throw_dimension("spectral_stats: " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " matrix cannot have full column rank");

    SpectralStats st;
    for (std::size_t i = 0; i < a.rows(); ++i)
        st.frobenius_sq += dot(a.row(i), a.row(i));

    const double lmax = largest_eigenvalue(a, opts);
    const double lmin = smallest_eigenvalue(a, opts);
    if (!(lmin > lmax * std::numeric_limits<double>::epsilon()))
        throw Error(ErrorCode::non_convergence,
                    "spectral_stats: sigma_min is numerically zero (rank deficient)");

    st.sigma_max = std::sqrt(lmax);
    st.sigma_min = std::sqrt(lmin);
    st.s_max     = lmax / st.frobenius_sq;
    st.s_min     = lmin / st.frobenius_sq;
    return st;
}

double
optimal_alpha(double s_min, double s_max, std::size_t q)
{
    if (q == 0)
        throw_invalid("optimal_alpha: q must be at least 1");
    if (q == 1)
        return 1.0;
    const double qd = static_cast<double>(q);
    if (s_max - s_min <= 1.0 / (qd - 1.0))
        return qd / (1.0 + (qd - 1.0) * s_min);
    return 2.0 * qd / (1.0 + (qd - 1.0) * (s_min + s_max));
}

std::vector<double>
partial_alphas(const MatrixView& a, std::size_t q, const SpectralOptions& opts)
{
    if (q == 0 || q > a.rows())
        throw_invalid("partial_alphas: need 1 <= q <= m");
    std::vector<double> alphas(q);
    for (std::size_t t = 0; t < q; ++t)
    {
        const RowRange r = partition_rows(a.rows(), q, t);
        alphas[t]        = optimal_alpha(spectral_stats(a.row_block(r.lo, r.hi), opts), q);
    }
    return alphas;
}

} // namespace kz
