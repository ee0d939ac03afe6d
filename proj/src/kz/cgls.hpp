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

#ifndef KZ_CGLS_HPP
#define KZ_CGLS_HPP

#include <cstddef>
#include <span>

#include "kz/linalg.hpp"

namespace kz {

struct CglsResult
{
    DenseVector x;
    std::size_t iterations = 0;
    double      relative_residual = 0.0; // ||A^T(Ax-b)|| / ||A^T b||
};

///
/// Conjugate gradients on the normal equations A^T A x = A^T b without
/// forming A^T A. Stops once ||A^T(b - Ax)|| <= tol * ||A^T b||.
/// Throws NonConvergenceError (carrying the last iterate) when max_it is hit.
///
CglsResult cgls_solve(const MatrixView& a, std::span<const double> b, double tol, std::size_t max_it);

///
/// Same iteration for an arbitrary right-hand side: solves (A^T A) y = rhs.
/// Used by inverse iteration for the smallest singular value.
///
CglsResult solve_normal_equations(const MatrixView& a, std::span<const double> rhs, double tol,
                                  std::size_t max_it);

} // namespace kz

#endif // KZ_CGLS_HPP
