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

#ifndef KZ_SOLVERS_DIST_HPP
#define KZ_SOLVERS_DIST_HPP

//
// Message-passing averaged solvers. Every rank owns one contiguous row block
// and a private copy of x; x is made global by an allreduce-sum per outer
// iteration. Because the collective has a fixed combining order all ranks hold
// the same bytes, so each rank evaluates the stopping rule on its own and they
// all agree.
//

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kz/solver.hpp"
#include "kz/transport.hpp"

namespace kz {

// (rank, k, x^(k)) on every rank
using RankObserver = std::function<void(std::size_t, std::size_t, std::span<const double>)>;

struct DistRankSettings
{
    Variant            variant        = Variant::rka;
    std::size_t        block_size     = 1;
    double             alpha          = 1.0;
    double             epsilon        = 1e-8;
    std::size_t        max_iterations = 1'000'000;
    bool               stop_on_error  = true;
    std::uint64_t      seed           = 0;       // rank r draws from worker_rng(seed, r)
    const DenseVector* reference      = nullptr; // required when stop_on_error
    RankObserver       observer;
};

struct DistRankResult
{
    DenseVector x;
    std::size_t iterations        = 0;
    bool        converged         = false;
    std::size_t error_evaluations = 0;
    std::size_t messages_sent     = 0; // by this rank during the solve
};

///
/// Per iteration: sample a local row, scale = alpha (b_i - <A_i, x>)/||A_i||^2,
/// x_j <- (x_j + scale A_ij) / np, then allreduce-sum. The projection reads
/// the rank's own x, which no other rank can touch, so no snapshot is needed.
///
DistRankResult solve_rka_dist(Transport& t, const DistPartition& part, const DistRankSettings& s);

///
/// Per iteration: block_size projections applied to x in place, one more
/// sampled row folded into x_j <- (x_j + scale A_ij) / np, then allreduce-sum
/// (block_size + 1 rows per rank).
///
DistRankResult solve_rkab_dist(Transport& t, const DistPartition& part, const DistRankSettings& s);

struct DistOptions
{
    SimWorldOptions           world;
    RankObserver              observer;              // called on every rank
    std::vector<std::size_t>* messages = nullptr;    // per-rank counts, filled on return
};

///
/// Simulated-distributed backend: np = cfg.q ranks on an in-process SimWorld,
/// rank r with weight w.alpha(r). Returns rank 0's report; wall time covers
/// rank start-up and join. ctl.observer sees rank 0's iterates.
///
RunReport run_simulated_dist(const Workload& w, const RunControl& ctl, const DistOptions& opts = {});

} // namespace kz

#endif // KZ_SOLVERS_DIST_HPP
