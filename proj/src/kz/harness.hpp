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

#ifndef KZ_HARNESS_HPP
#define KZ_HARNESS_HPP

//
// Measurement protocol. Iteration counts are found first, one run per seed
// with the error criterion active; timing then replays the solver for exactly
// ceil(mean count) iterations with the criterion switched off, so no reported
// time contains an error evaluation. Seeds are base_seed + 0 .. n - 1.
//

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kz/csv.hpp"
#include "kz/solver.hpp"

namespace kz {

// Dispatch on cfg.backend.
RunReport run_solver(const Workload& w, const RunControl& ctl);

struct IterationMeasurement
{
    std::vector<RunReport> runs; // one per seed, in seed order
    std::size_t            mean_iterations = 0; // ceil of the mean over converged seeds
    std::size_t            n_converged     = 0;

    bool all_converged() const noexcept { return n_converged == runs.size(); }
};

// Throws Error(invalid_argument) for n_seeds == 0.
IterationMeasurement measure_iterations(const Workload& w, std::size_t n_seeds,
                                        std::uint64_t base_seed);

struct ReplayResult
{
    std::vector<RunReport> runs; // run i uses seed base_seed + i
    double                 total_s = 0.0;
};

// Throws Error(invalid_argument) for fixed_iterations == 0 or n_runs == 0.
ReplayResult timed_replay(const Workload& w, std::size_t fixed_iterations, std::size_t n_runs,
                          std::uint64_t base_seed);

struct BenchResult
{
    IterationMeasurement measurement;
    ReplayResult         replay; // empty when no seed converged

    ///
    /// One `run` row per seed (iterations, convergence and errors from the
    /// measuring run, wall time from replay run i, NaN if there is none) and a
    /// final `summary` row: ceil mean iterations, all-converged flag, total
    /// replay time, and the mean final error and residual of the replay runs.
    ///
    std::vector<ReportRow> rows() const;
};

BenchResult bench(const Workload& w, std::size_t n_seeds, std::size_t n_runs,
                  std::uint64_t base_seed);

///
/// Runs max_iterations iterations regardless of epsilon and records the error
/// against x_ref and the residual at every k with k % step == 0, k = 0
/// included: floor(max_iterations / step) + 1 records.
///
std::vector<TraceRecord> trace_run(const Workload& w, std::size_t max_iterations, std::size_t step,
                                   const DenseVector& x_ref, std::uint64_t seed);

// Mean error_norm of the last `count` records (all of them if fewer).
double plateau(const std::vector<TraceRecord>& records, std::size_t count = 10);

} // namespace kz

#endif // KZ_HARNESS_HPP
