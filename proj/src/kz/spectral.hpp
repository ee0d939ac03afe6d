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

#ifndef KZ_SPECTRAL_HPP
#define KZ_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "kz/linalg.hpp"

namespace kz {

struct SpectralStats
{
    double sigma_max    = 0.0;
    double sigma_min    = 0.0;
    double s_max        = 0.0; // sigma_max^2 / ||A||_F^2
    double s_min        = 0.0; // sigma_min^2 / ||A||_F^2
    double frobenius_sq = 0.0;
};

struct SpectralOptions
{
    double      tolerance       = 1e-10; // relative change of the eigenvalue estimate
    std::size_t max_iterations  = 5000;
    double      inner_tolerance = 1e-10; // CG solves inside inverse iteration
};

///
/// Extreme singular values of a full-column-rank matrix, matrix-free:
/// power iteration on A^T A for sigma_max, inverse iteration (each step a CG
/// solve of the normal equations) for sigma_min.
///
/// Throws Error(dimension) when A has fewer rows than columns and
/// Error(non_convergence) naming the extreme that failed otherwise.
///
SpectralStats spectral_stats(const MatrixView& a, const SpectralOptions& opts = {});

/// Optimal uniform weight for averaged randomized Kaczmarz with q workers.
/// q == 1 takes the first branch, giving 1.
double optimal_alpha(double s_min, double s_max, std::size_t q);

inline double
optimal_alpha(const SpectralStats& stats, std::size_t q)
{
    return optimal_alpha(stats.s_min, stats.s_max, q);
}

/// Per-worker weights computed from each worker's contiguous row block.
std::vector<double> partial_alphas(const MatrixView& a, std::size_t q,
                                   const SpectralOptions& opts = {});

} // namespace kz

#endif // KZ_SPECTRAL_HPP
