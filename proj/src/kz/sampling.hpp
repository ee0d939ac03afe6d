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

#ifndef KZ_SAMPLING_HPP
#define KZ_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "kz/linalg.hpp"

namespace kz {

///
/// Seedable 64-bit generator (Mersenne twister, period 2^19937-1).
/// Streams are reproducible across processes and platforms: only the raw
/// 64-bit output of the engine is consumed, never a std distribution.
///
class Prng
{
public:
    explicit Prng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1) with 53 random bits
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform on [lo, hi)
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t   seed_;
    std::mt19937_64 engine_;
};

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) noexcept;

///
/// Stream for worker `worker_id` of a run seeded with `base_seed`. The engine
/// seed is mix64(base_seed) for worker 0 and mix64(base_seed ^ mix64(worker_id))
/// otherwise, so sequential solvers (which use worker 0) and the parallel
/// variants draw from the same stream for the same base seed.
///
Prng worker_rng(std::uint64_t base_seed, std::size_t worker_id);

///
/// Discrete distribution over rows [support_lo, support_hi] with
/// P(i) = ||A_i||^2 / sum_{j in support} ||A_j||^2, sampled by binary search
/// over the cumulative distribution.
///
class RowSampler
{
public:
    std::size_t support_lo() const noexcept { return lo_; }
    std::size_t support_hi() const noexcept { return hi_; }

    const std::vector<double>& cdf() const noexcept { return cdf_; }

    // exact probability of `row` (0 outside the support)
    double probability(std::size_t row) const noexcept;

    std::size_t sample(Prng& rng) const;

private:
    friend RowSampler make_sampler(const RowNormCache&, std::size_t, std::size_t);

    std::vector<double> cdf_;
    std::size_t         lo_ = 0;
    std::size_t         hi_ = 0;
};

// Throws Error(range) unless lo <= hi < m.
RowSampler make_sampler(const RowNormCache& cache, std::size_t lo, std::size_t hi);

inline RowSampler
make_sampler(const RowNormCache& cache)
{
    return make_sampler(cache, 0, cache.sq_norms.size() - 1);
}

// Contiguous block owned by worker t of q: [floor(t*m/q), floor((t+1)*m/q) - 1].
struct RowRange
{
    std::size_t lo;
    std::size_t hi;
};

RowRange partition_rows(std::size_t m, std::size_t parts, std::size_t index);

///
/// Standard normal variates by the basic Box-Muller transform; both outputs of
/// each pair are used, the cosine branch first.
///
class NormalSource
{
public:
    explicit NormalSource(Prng& rng) : rng_(&rng) {}

    double next();
    double next(double mean, double stddev) { return mean + stddev * next(); }

private:
    Prng*  rng_;
    double spare_     = 0.0;
    bool   has_spare_ = false;
};

} // namespace kz

#endif // KZ_SAMPLING_HPP
