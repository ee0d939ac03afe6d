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

#ifndef KZ_SOLVERS_SEQ_HPP
#define KZ_SOLVERS_SEQ_HPP

//
// Sequential Kaczmarz-family solvers. These are the behavioral reference for
// the threaded and distributed implementations: the averaged variants
// simulate their q workers in a loop, worker t drawing from worker_rng(seed, t).
//
// Every averaged update is accumulated as x_i += (scale * a_i) / q, in
// worker order, so the q = 1 and block_size = 1 reductions reproduce plain
// randomized Kaczmarz bit for bit.
//

#include <cstddef>
#include <span>

#include "kz/linalg.hpp"
#include "kz/sampling.hpp"
#include "kz/solver.hpp"

namespace kz {

// alpha * (b_i - <A_i, x>) / ||A_i||^2
inline double
projection_scale(std::span<const double> row, double b_i, double sq_norm, std::span<const double> x,
                 double alpha)
{
    return alpha * (b_i - dot(row, x)) / sq_norm;
}

/// One relaxed projection onto the hyperplane of row i.
void kaczmarz_step(std::span<double> x, const MatrixView& a, std::span<const double> b,
                   const RowNormCache& cache, std::size_t row, double alpha);

/// Uniform-weight averaged update: every projection is computed from the same
/// pre-step x, then x += (1/q) sum_t alpha_t * scale_t * A_{rows[t]}.
/// `alphas` holds either one weight or one per row.
void rka_combined_step(std::span<double> x, const MatrixView& a, std::span<const double> b,
                       const RowNormCache& cache, std::span<const std::size_t> rows,
                       std::span<const double> alphas);

/// block_size chained projections on v with freshly sampled rows.
void rkab_worker_block(std::span<double> v, const MatrixView& a, std::span<const double> b,
                       const RowNormCache& cache, const RowSampler& sampler, Prng& rng,
                       std::size_t block_size, double alpha);

///
/// Worker block as used by the averaged-block solvers: starts from x, chains
/// block_size projections into v, and writes the exact displacement v - x into
/// `delta` (for a single projection, delta = scale * row exactly).
///
void rkab_block_delta(std::span<const double> x, std::span<double> v, std::span<double> delta,
                      const MatrixView& a, std::span<const double> b, const RowNormCache& cache,
                      const RowSampler& sampler, Prng& rng, std::size_t block_size, double alpha);

RunReport solve_ck(const Workload& w, const RunControl& ctl);
RunReport solve_rk(const Workload& w, const RunControl& ctl);
RunReport solve_rka_seq(const Workload& w, const RunControl& ctl);
RunReport solve_rkab_seq(const Workload& w, const RunControl& ctl);

///
/// Sequential oracle for the message-passing block listing: each of the q
/// workers chains block_size projections on a private copy of x, takes one
/// more projection folded into a division by q, and the q results are summed.
/// This uses block_size + 1 rows per worker per outer iteration.
///
RunReport solve_rkab_listing_seq(const Workload& w, const RunControl& ctl);

// CGLS as a "solver": iterations are CG steps, tolerance from epsilon.
RunReport solve_cgls(const Workload& w, const RunControl& ctl);

// Dispatch on the configured variant (sequential backend).
RunReport run_sequential(const Workload& w, const RunControl& ctl);

// Convenience: build the workload and run with seed cfg.base_seed.
RunReport solve_ck(const LinearSystem& sys, const SolverConfig& cfg);
RunReport solve_rk(const LinearSystem& sys, const SolverConfig& cfg);
RunReport solve_rka_seq(const LinearSystem& sys, const SolverConfig& cfg);
RunReport solve_rkab_seq(const LinearSystem& sys, const SolverConfig& cfg);

} // namespace kz

#endif // KZ_SOLVERS_SEQ_HPP
