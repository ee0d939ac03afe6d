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

#ifndef KZ_SOLVERS_PARALLEL_HPP
#define KZ_SOLVERS_PARALLEL_HPP

//
// Shared-memory solvers running q real threads per solve.
//
// Worker t samples from worker_rng(seed, t) exactly like the sequential
// oracles, so the sampled row multisets match them iteration by iteration.
// Contributions are summed into the shared iterate inside a mutex; the order
// in which workers enter it is not fixed, which is the only source of
// divergence from the oracles.
//

#include <atomic>
#include <barrier>
#include <cstddef>
#include <functional>
#include <span>

#include "kz/solver.hpp"

namespace kz {

/// std::barrier that counts completed phases.
class CountingBarrier
{
public:
    explicit CountingBarrier(std::ptrdiff_t participants)
        : barrier_(participants, Completion{&phases_})
    {}

    void arrive_and_wait() { barrier_.arrive_and_wait(); }

    std::size_t phases() const noexcept { return phases_.load(std::memory_order_acquire); }

private:
    struct Completion
    {
        std::atomic<std::size_t>* phases;
        void operator()() noexcept { phases->fetch_add(1, std::memory_order_acq_rel); }
    };

    std::atomic<std::size_t>  phases_{0};
    std::barrier<Completion>  barrier_;
};

/// Instrumentation hooks; every member is optional. Callbacks run on worker
/// threads and must synchronize any state they share.
struct ParallelProbe
{
    // scale factor computed by `worker` in outer iteration k for `row`
    std::function<void(std::size_t worker, std::size_t k, std::size_t row, double scale)> on_scale;

    // the vector a worker adds into the shared iterate (called under the lock)
    std::function<void(std::size_t worker, std::size_t k, std::span<const double> contribution)>
        on_contribution;

    // called by worker 0 under the lock right after the snapshot phase of
    // every RKA iteration; may write to the shared iterate
    std::function<void(std::size_t k, std::span<double> x)> perturb_shared;
};

struct ParallelStats
{
    std::size_t barrier_phases = 0;
};

struct ParallelOptions
{
    const ParallelProbe* probe = nullptr;
    ParallelStats*       stats = nullptr;
};

/// Randomized Kaczmarz with the dot product and the update split over q
/// threads. Partial sums are combined in worker order, so runs are
/// deterministic; for q > 1 they differ from solve_rk only by rounding.
RunReport solve_rk_block_sequential(const Workload& w, const RunControl& ctl,
                                    const ParallelOptions& opts = {});

/// Averaged randomized Kaczmarz: snapshot x into x_prev, every worker projects
/// from x_prev, then adds (scale * row) / q into x under the lock.
/// Two barriers per outer iteration.
RunReport solve_rka_parallel(const Workload& w, const RunControl& ctl,
                             const ParallelOptions& opts = {});

/// Averaged block variant: every worker chains block_size projections from
/// the shared x into a private estimate (the first projection reads x, the
/// rest the private copy), then adds (v - x) / q into x under the lock.
/// Two barriers per outer iteration.
RunReport solve_rkab_parallel(const Workload& w, const RunControl& ctl,
                              const ParallelOptions& opts = {});

// Dispatch on the configured variant (threads backend).
RunReport run_threads(const Workload& w, const RunControl& ctl);

} // namespace kz

#endif // KZ_SOLVERS_PARALLEL_HPP
