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

#include "kz/cgls.hpp"

#include <cmath>
#include <string>

#include "kz/error.hpp"

namespace kz {

CglsResult
cgls_solve(const MatrixView& a, std::span<const double> b, double tol, std::size_t max_it)
{
    if (b.size() != a.rows())
        throw_dimension("cgls_solve: b has " + std::to_string(b.size()) + " entries, A has " +
                        std::to_string(a.rows()) + " rows");

    const std::size_t n = a.cols();
    CglsResult        res;
    res.x.assign(n, 0.0);

    DenseVector r(b.begin(), b.end());
    DenseVector s = multiply_transpose(a, r);
    DenseVector p = s;

    const double norm_s0 = norm2(s);
    if (norm_s0 == 0.0)
        return res;

    double gamma = dot(s, s);
    for (std::size_t it = 0; it < max_it; ++it)
    {
        const DenseVector q     = multiply(a, p);
        const double      qq    = dot(q, q);
        if (qq == 0.0)
            break;
        const double step = gamma / qq;
        axpy_row(res.x, step, p);
        axpy_row(r, -step, q);

        s = multiply_transpose(a, r);
        const double gamma_new = dot(s, s);
        res.iterations         = it + 1;
        res.relative_residual  = std::sqrt(gamma_new) / norm_s0;
        if (res.relative_residual <= tol)
            return res;

        const double beta = gamma_new / gamma;
        gamma             = gamma_new;
        for (std::size_t j = 0; j < n; ++j)
            p[j] = s[j] + beta * p[j];
    }
    throw NonConvergenceError("cgls_solve: no convergence to relative residual " +
                                  std::to_string(tol) + " within " + std::to_string(max_it) +
                                  " iterations (reached " + std::to_string(res.relative_residual) +
                                  ")",
                              std::move(res.x));
}

CglsResult
solve_normal_equations(const MatrixView& a, std::span<const double> rhs, double tol,
                       std::size_t max_it)
{
    if (rhs.size() != a.cols())
        throw_dimension("solve_normal_equations: rhs length does not match column count");

    const std::size_t n = a.cols();
    CglsResult        res;
    res.x.assign(n, 0.0);

    DenseVector s(rhs.begin(), rhs.end());
    DenseVector p = s;

    const double norm_s0 = norm2(s);
    if (norm_s0 == 0.0)
        return res;

    double gamma = dot(s, s);
    for (std::size_t it = 0; it < max_it; ++it)
    {
        const DenseVector q  = multiply(a, p);
        const double      qq = dot(q, q);
        if (qq == 0.0)
            break;
        const double step = gamma / qq;
        axpy_row(res.x, step, p);
        axpy_row(s, -step, multiply_transpose(a, q));

        const double gamma_new = dot(s, s);
        res.iterations         = it + 1;
        res.relative_residual  = std::sqrt(gamma_new) / norm_s0;
        if (res.relative_residual <= tol)
            return res;

        const double beta = gamma_new / gamma;
        gamma             = gamma_new;
        for (std::size_t j = 0; j < n; ++j)
            p[j] = s[j] + beta * p[j];
    }
    throw NonConvergenceError("solve_normal_equations: no convergence within " +
                                  std::to_string(max_it) + " iterations",
                              std::move(res.x));
}

} // namespace kz
