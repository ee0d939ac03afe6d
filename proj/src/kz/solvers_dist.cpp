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

#include "kz/solvers_dist.hpp"

#include <chrono>
#include <string>

#include "kz/error.hpp"
#include "kz/loop.hpp"
#include "kz/solvers_seq.hpp"

namespace kz {

namespace {

template <typename Step>
DistRankResult
rank_loop(Transport& t, const DistPartition& part, const DistRankSettings& s, Step&& step)
{
    if (s.stop_on_error && s.reference == nullptr)
        throw_invalid("stopping on the error needs a reference solution (x_star or x_ls)");
    if (s.reference && s.reference->size() != part.a.cols())
        throw_dimension("reference solution length does not match column count");

    const std::size_t before = t.messages_sent();
    DistRankResult    res;
    res.x.assign(part.a.cols(), 0.0);

    if (s.observer)
        s.observer(t.rank(), 0, res.x);

    std::size_t k = 0;
    while (true)
    {
        if (s.stop_on_error)
        {
            ++res.error_evaluations;
            if (distance_sq(res.x, *s.reference) < s.epsilon)
            {
                res.converged = true;
                break;
            }
        }
        if (k >= s.max_iterations)
            break;
        step(res.x);
        allreduce_sum(t, res.x);
        ++k;
        if (s.observer)
            s.observer(t.rank(), k, res.x);
    }
    res.iterations    = k;
    res.messages_sent = t.messages_sent() - before;
    return res;
}

// x_j <- (x_j + scale * A_ij) / np for one freshly sampled local row
void
folded_step(std::span<double> x, const MatrixView& a, std::span<const double> b,
            const RowNormCache& cache, const RowSampler& sampler, Prng& rng, double alpha,
            double np)
{
    const std::size_t row   = sampler.sample(rng);
    const auto        ai    = a.row(row);
    const double      scale = projection_scale(ai, b[row], cache.sq_norms[row], x, alpha);
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = (x[j] + scale * ai[j]) / np;
}

} // namespace

DistRankResult
solve_rka_dist(Transport& t, const DistPartition& part, const DistRankSettings& s)
{
    const auto         a       = part.a.view();
    const RowNormCache cache   = row_norm_cache(a);
    const RowSampler   sampler = make_sampler(cache);
    const double       np      = static_cast<double>(t.size());
    Prng               rng     = worker_rng(s.seed, t.rank());

    return rank_loop(t, part, s, [&](DenseVector& x) {
        folded_step(x, a, part.b, cache, sampler, rng, s.alpha, np);
    });
}

DistRankResult
solve_rkab_dist(Transport& t, const DistPartition& part, const DistRankSettings& s)
{
    if (s.block_size < 1)
        throw_invalid("block_size must be at least 1");
    const auto         a       = part.a.view();
    const RowNormCache cache   = row_norm_cache(a);
    const RowSampler   sampler = make_sampler(cache);
    const double       np      = static_cast<double>(t.size());
    Prng               rng     = worker_rng(s.seed, t.rank());

    return rank_loop(t, part, s, [&](DenseVector& x) {
        rkab_worker_block(x, a, part.b, cache, sampler, rng, s.block_size, s.alpha);
        folded_step(x, a, part.b, cache, sampler, rng, s.alpha, np);
    });
}

RunReport
run_simulated_dist(const Workload& w, const RunControl& ctl, const DistOptions& opts)
{
    const SolverConfig& cfg = w.config();
    if (cfg.variant != Variant::rka && cfg.variant != Variant::rkab)
        throw_invalid(std::string("variant ") + std::string(to_string(cfg.variant)) +
                      " has no distributed implementation");

    const detail::LoopLimits lim = detail::loop_limits(w, ctl);
    const std::size_t        np  = cfg.q;

    std::vector<DistPartition> parts;
    parts.reserve(np);
    for (std::size_t r = 0; r < np; ++r)
        parts.push_back(make_partition(w.system(), np, r));

    std::vector<DistRankResult> results(np);
    SimWorld                    world(np, opts.world);

    const auto t0 = std::chrono::steady_clock::now();
    world.run([&](Transport& t) {
        const std::size_t r = t.rank();
        DistRankSettings  s;
        s.variant        = cfg.variant;
        s.block_size     = cfg.block_size;
        s.alpha          = w.alpha(r);
        s.epsilon        = lim.epsilon;
        s.max_iterations = lim.max_iterations;
        s.stop_on_error  = lim.stop_on_error;
        s.seed           = ctl.seed;
        s.reference      = lim.reference;
        s.observer       = [&](std::size_t rank, std::size_t k, std::span<const double> x) {
            if (opts.observer)
                opts.observer(rank, k, x);
            if (rank == 0 && ctl.observer)
                ctl.observer(k, x);
        };
        results[r] = cfg.variant == Variant::rka ? solve_rka_dist(t, parts[r], s)
                                                 : solve_rkab_dist(t, parts[r], s);
    });
    const double elapsed = detail::seconds_since(t0);

    if (opts.messages)
    {
        opts.messages->clear();
        for (const auto& res : results)
            opts.messages->push_back(res.messages_sent);
    }
    DistRankResult& r0 = results.front();
    return detail::finish_report(w, ctl, std::move(r0.x), r0.iterations, r0.converged, elapsed,
                                 r0.error_evaluations);
}

} // namespace kz
