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

#include "kz/solvers_parallel.hpp"

#include <chrono>
#include <mutex>
#include <thread>
#include <vector>

#include "kz/error.hpp"
#include "kz/loop.hpp"
#include "kz/solvers_seq.hpp"

namespace kz {

namespace {

// entry range [lo, hi) of the n-vector handled by worker t of q
struct Slice
{
    std::size_t lo;
    std::size_t hi;
};

Slice
entry_slice(std::size_t n, std::size_t q, std::size_t t)
{
    return {t * n / q, (t + 1) * n / q};
}

// Stopping decision made by worker 0 between barriers.
struct StopState
{
    bool        stop       = false;
    bool        converged  = false;
    std::size_t iterations = 0;
    std::size_t evals      = 0;
};

void
decide_stop(StopState& st, const detail::LoopLimits& lim, const RunControl& ctl,
            std::span<const double> x, std::size_t k)
{
    if (ctl.observer)
        ctl.observer(k, x);
    st.iterations = k;
    if (lim.stop_on_error)
    {
        ++st.evals;
        if (distance_sq(x, *lim.reference) < lim.epsilon)
        {
            st.converged = true;
            st.stop      = true;
            return;
        }
    }
    if (k >= lim.max_iterations)
        st.stop = true;
}

template <typename Body>
double
run_workers(std::size_t q, Body&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    {
        std::vector<std::jthread> threads;
        threads.reserve(q);
        for (std::size_t t = 0; t < q; ++t)
            threads.emplace_back([&body, t] { body(t); });
    }
    return detail::seconds_since(t0);
}

} // namespace

RunReport
solve_rk_block_sequential(const Workload& w, const RunControl& ctl, const ParallelOptions& opts)
{
    const detail::LoopLimits lim = detail::loop_limits(w, ctl);
    const auto&              sys = w.system();
    const auto               a   = sys.a.view();
    const std::size_t        n   = sys.cols();
    const std::size_t        q   = w.workers();
    const double             alpha = w.alpha(0);

    DenseVector         x(n, 0.0);
    std::vector<double> dot_part(q, 0.0), err_part(q, 0.0);
    CountingBarrier     barrier(static_cast<std::ptrdiff_t>(q));

    // written by worker 0 only; every worker derives the same stop decision
    std::size_t iterations = 0, evals = 0;
    bool        converged  = false;

    if (ctl.observer)
        ctl.observer(0, x);

    const double elapsed = run_workers(q, [&](std::size_t t) {
        const Slice s   = entry_slice(n, q, t);
        Prng        rng = worker_rng(ctl.seed, 0); // every worker replays the same row sequence

        auto partial_error = [&] {
            double e = 0.0;
            for (std::size_t i = s.lo; i < s.hi; ++i)
            {
                const double d = x[i] - (*lim.reference)[i];
                e += d * d;
            }
            err_part[t] = e;
        };
        // identical on every worker: partials are summed in worker order
        auto should_stop = [&](std::size_t k) {
            if (lim.stop_on_error)
            {
                double err = 0.0;
                for (double e : err_part)
                    err += e;
                if (t == 0)
                    ++evals;
                if (err < lim.epsilon)
                {
                    if (t == 0)
                        converged = true;
                    return true;
                }
            }
            return k >= lim.max_iterations;
        };

        if (lim.stop_on_error)
            partial_error();
        barrier.arrive_and_wait();

        std::size_t k = 0;
        while (!should_stop(k))
        {
            const std::size_t row = w.sampler(0).sample(rng);
            const auto        ai  = a.row(row);

            double d = 0.0;
            for (std::size_t i = s.lo; i < s.hi; ++i)
                d += ai[i] * x[i];
            dot_part[t] = d;
            barrier.arrive_and_wait();

            double full = 0.0;
            for (double p : dot_part)
                full += p;
            const double scale = alpha * (sys.b[row] - full) / w.norms().sq_norms[row];
            for (std::size_t i = s.lo; i < s.hi; ++i)
                x[i] += scale * ai[i];
            if (lim.stop_on_error)
                partial_error();
            barrier.arrive_and_wait();

            ++k;
            if (t == 0)
            {
                iterations = k;
                if (ctl.observer)
                    ctl.observer(k, x);
            }
        }
    });

    if (opts.stats)
        opts.stats->barrier_phases = barrier.phases();
    return detail::finish_report(w, ctl, std::move(x), iterations, converged, elapsed, evals);
}

RunReport
solve_rka_parallel(const Workload& w, const RunControl& ctl, const ParallelOptions& opts)
{
    const detail::LoopLimits lim = detail::loop_limits(w, ctl);
    const auto&              sys = w.system();
    const auto               a   = sys.a.view();
    const std::size_t        n   = sys.cols();
    const std::size_t        q   = w.workers();
    const double             qd  = static_cast<double>(q);
    const ParallelProbe*     probe = opts.probe;

    DenseVector     x(n, 0.0), x_prev(n, 0.0);
    std::mutex      mu;
    CountingBarrier barrier(static_cast<std::ptrdiff_t>(q));
    StopState       st;

    const double elapsed = run_workers(q, [&](std::size_t t) {
        const Slice       s       = entry_slice(n, q, t);
        Prng              rng     = worker_rng(ctl.seed, t);
        const RowSampler& sampler = w.sampler(t);
        const double      alpha   = w.alpha(t);
        DenseVector       contribution(probe && probe->on_contribution ? n : 0);

        for (std::size_t k = 0;; ++k)
        {
            barrier.arrive_and_wait();
            // x is read-only until the next barrier
            for (std::size_t i = s.lo; i < s.hi; ++i)
                x_prev[i] = x[i];
            if (t == 0)
                decide_stop(st, lim, ctl, x, k);
            barrier.arrive_and_wait();
            if (st.stop)
                break;

            if (t == 0 && probe && probe->perturb_shared)
            {
                std::lock_guard lock(mu);
                probe->perturb_shared(k, x);
            }

            const std::size_t row   = sampler.sample(rng);
            const auto        ai    = a.row(row);
            const double      scale =
                projection_scale(ai, sys.b[row], w.norms().sq_norms[row], x_prev, alpha);
            if (probe && probe->on_scale)
                probe->on_scale(t, k, row, scale);

            std::lock_guard lock(mu);
            for (std::size_t i = 0; i < n; ++i)
                x[i] += (scale * ai[i]) / qd;
            if (probe && probe->on_contribution)
            {
                for (std::size_t i = 0; i < n; ++i)
                    contribution[i] = (scale * ai[i]) / qd;
                probe->on_contribution(t, k, contribution);
            }
        }
    });

    if (opts.stats)
        opts.stats->barrier_phases = barrier.phases();
    return detail::finish_report(w, ctl, std::move(x), st.iterations, st.converged, elapsed,
                                 st.evals);
}

RunReport
solve_rkab_parallel(const Workload& w, const RunControl& ctl, const ParallelOptions& opts)
{
    const detail::LoopLimits lim = detail::loop_limits(w, ctl);
    const auto&              sys = w.system();
    const auto               a   = sys.a.view();
    const std::size_t        n   = sys.cols();
    const std::size_t        q   = w.workers();
    const std::size_t        bs  = w.config().block_size;
    const double             qd  = static_cast<double>(q);
    const ParallelProbe*     probe = opts.probe;

    DenseVector     x(n, 0.0);
    std::mutex      mu;
    CountingBarrier barrier(static_cast<std::ptrdiff_t>(q));
    StopState       st;

    const double elapsed = run_workers(q, [&](std::size_t t) {
        Prng              rng     = worker_rng(ctl.seed, t);
        const RowSampler& sampler = w.sampler(t);
        const double      alpha   = w.alpha(t);
        DenseVector       v(n), delta(n);

        for (std::size_t k = 0;; ++k)
        {
            barrier.arrive_and_wait();
            // x is read-only until the next barrier; worker 0 decides whether
            // this iteration's blocks are kept
            if (t == 0)
                decide_stop(st, lim, ctl, x, k);
            rkab_block_delta(x, v, delta, a, sys.b, w.norms(), sampler, rng, bs, alpha);
            barrier.arrive_and_wait();
            if (st.stop)
                break;

            std::lock_guard lock(mu);
            for (std::size_t i = 0; i < n; ++i)
                x[i] += delta[i] / qd;
            if (probe && probe->on_contribution)
            {
                DenseVector c(n);
                for (std::size_t i = 0; i < n; ++i)
                    c[i] = delta[i] / qd;
                probe->on_contribution(t, k, c);
            }
        }
    });

    if (opts.stats)
        opts.stats->barrier_phases = barrier.phases();
    return detail::finish_report(w, ctl, std::move(x), st.iterations, st.converged, elapsed,
                                 st.evals);
}

RunReport
run_threads(const Workload& w, const RunControl& ctl)
{
    switch (w.config().variant)
    {
        case Variant::rk:   return solve_rk_block_sequential(w, ctl);
        case Variant::rka:  return solve_rka_parallel(w, ctl);
        case Variant::rkab: return solve_rkab_parallel(w, ctl);
        case Variant::ck:
        case Variant::cgls: break;
    }
    throw_invalid(std::string("variant ") + std::string(to_string(w.config().variant)) +
                  " has no threaded implementation");
}

} // namespace kz
