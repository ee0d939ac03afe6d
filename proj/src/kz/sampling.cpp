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

#include "kz/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kz/error.hpp"

namespace kz {

std::uint64_t
mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Prng
worker_rng(std::uint64_t base_seed, std::size_t worker_id)
{
    if (worker_id == 0)
        return Prng(mix64(base_seed));
    return Prng(mix64(base_seed ^ mix64(static_cast<std::uint64_t>(worker_id))));
}

RowSampler
make_sampler(const RowNormCache& cache, std::size_t lo, std::size_t hi)
{
    const std::size_t m = cache.sq_norms.size();
    if (m == 0 || lo > hi || hi >= m)
        throw Error(ErrorCode::range, "sampler support [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] is empty or outside " +
                                          std::to_string(m) + " rows");

    RowSampler s;
    s.lo_ = lo;
    s.hi_ = hi;

    double total = 0.0;
    for (std::size_t i = lo; i <= hi; ++i)
        total += cache.sq_norms[i];
    if (!(total > 0.0))
        throw Error(ErrorCode::range, "sampler support has zero total weight");

    s.cdf_.resize(hi - lo + 1);
    double running = 0.0;
    for (std::size_t i = lo; i <= hi; ++i)
    {
        running += cache.sq_norms[i];
        s.cdf_[i - lo] = running / total;
    }
    s.cdf_.back() = 1.0;
    return s;
}

double
RowSampler::probability(std::size_t row) const noexcept
{
    if (row < lo_ || row > hi_)
        return 0.0;
    const std::size_t k = row - lo_;
    return k == 0 ? cdf_[0] : cdf_[k] - cdf_[k - 1];
}

std::size_t
RowSampler::sample(Prng& rng) const
{
    const double u  = rng.next_unit();
    const auto   it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    // u < 1 == cdf.back(), so it never reaches end(); guard anyway for zero-width tails
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                         cdf_.size() - 1);
    return lo_ + k;
}

RowRange
partition_rows(std::size_t m, std::size_t parts, std::size_t index)
{
    if (parts == 0 || index >= parts || parts > m)
        throw Error(ErrorCode::range, "cannot split " + std::to_string(m) + " rows into " +
                                          std::to_string(parts) + " nonempty blocks");
    const std::size_t lo = index * m / parts;
    const std::size_t hi = (index + 1) * m / parts - 1;
    return {lo, hi};
}

double
NormalSource::next()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] keeps the logarithm finite
    const double u1 = 1.0 - rng_->next_unit();
    const double u2 = rng_->next_unit();
    const double r  = std::sqrt(-2.0 * std::log(u1));
    const double t  = 2.0 * std::numbers::pi * u2;
    spare_     = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

} // namespace kz
