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

#ifndef KZ_SOLVER_HPP
#define KZ_SOLVER_HPP

//
// Types shared by every solver family: configuration, the per-run report,
// run control (stopping/observation) and the seed-independent workload.
//

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kz/linalg.hpp"
#include "kz/sampling.hpp"
#include "kz/sysgen.hpp"

namespace kz {

enum class Variant { ck, rk, rka, rkab, cgls };
enum class AlphaPolicy { unit, fixed, optimal_full, optimal_partial };
enum class SamplingScheme { full_access, distributed };
enum class Backend { sequential, threads, simulated_dist };

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(AlphaPolicy p) noexcept;
std::string_view to_string(SamplingScheme s) noexcept;
std::string_view to_string(Backend b) noexcept;

// Inverse of to_string; throw Error(invalid_argument) on unknown names.
Variant        parse_variant(std::string_view s);
AlphaPolicy    parse_alpha_policy(std::string_view s);
SamplingScheme parse_scheme(std::string_view s);
Backend        parse_backend(std::string_view s);

struct SolverConfig
{
    Variant        variant        = Variant::rk;
    Backend        backend        = Backend::sequential;
    SamplingScheme scheme         = SamplingScheme::full_access;
    AlphaPolicy    alpha_policy   = AlphaPolicy::unit;
    double         alpha          = 1.0; // used by AlphaPolicy::fixed
    std::size_t    q              = 1;
    std::size_t    block_size     = 1;
    double         epsilon        = 1e-8; // on ||x - x_ref||^2
    std::size_t    max_iterations = 1'000'000;
    std::uint64_t  base_seed      = 0;

    // Throws Error(invalid_argument) naming the offending field.
    void validate() const;
};

struct RunReport
{
    Variant        variant      = Variant::rk;
    Backend        backend      = Backend::sequential;
    SamplingScheme scheme       = SamplingScheme::full_access;
    AlphaPolicy    alpha_policy = AlphaPolicy::unit;
    double         alpha        = 1.0; // worker 0's weight
    std::size_t    q            = 1;
    std::size_t    block_size   = 1;
    std::uint64_t  seed         = 0;

    std::size_t iterations     = 0;
    bool        converged      = false;
    double      wall_time_s    = 0.0;
    double      final_error_sq = 0.0; // ||x - x_ref||^2, NaN without a reference
    double      final_residual = 0.0; // ||A x - b||

    // stopping-criterion evaluations performed inside the iteration loop
    std::size_t error_evaluations = 0;

    DenseVector x;
};

// Called with the iteration count k and the iterate x^(k), for k = 0 and after
// every completed (outer) iteration. x is stable for the duration of the call.
using IterationObserver = std::function<void(std::size_t, std::span<const double>)>;

struct RunControl
{
    std::uint64_t seed = 0;

    // Evaluate ||x - x_ref||^2 < epsilon before every iteration. When false the
    // solver runs exactly max_iterations iterations.
    bool stop_on_error = true;

    // Overrides SolverConfig::max_iterations when set.
    std::optional<std::size_t> max_iterations;

    IterationObserver observer;
};

///
/// Everything a run needs that does not depend on the seed: row norms, the
/// per-worker samplers implied by the sampling scheme, and the resolved
/// per-worker weights (spectral estimation happens here, outside any timing).
///
class Workload
{
public:
    Workload(const LinearSystem& sys, const SolverConfig& cfg);

    const LinearSystem& system() const noexcept { return *sys_; }
    const SolverConfig& config() const noexcept { return cfg_; }
    const RowNormCache& norms() const noexcept { return norms_; }

    std::size_t workers() const noexcept { return cfg_.q; }

    const RowSampler& sampler(std::size_t worker) const noexcept
    {
        return samplers_.size() == 1 ? samplers_.front() : samplers_[worker];
    }
    double            alpha(std::size_t worker) const noexcept { return alphas_[worker]; }

    // x_ls if present, else x_star, else nullptr
    const DenseVector* reference() const noexcept { return sys_->reference(); }

private:
    const LinearSystem*     sys_;
    SolverConfig            cfg_;
    RowNormCache            norms_;
    std::vector<RowSampler> samplers_; // one shared sampler, or one per worker block
    std::vector<double>     alphas_;
};

// Resolve the configured weight policy into one weight per worker.
std::vector<double> resolve_alphas(const LinearSystem& sys, const SolverConfig& cfg);

namespace detail {

// Loop bookkeeping shared by all solver drivers.
struct LoopLimits
{
    std::size_t        max_iterations;
    bool               stop_on_error;
    double             epsilon;
    const DenseVector* reference;
};

LoopLimits loop_limits(const Workload& w, const RunControl& ctl);

// Fills identification fields and the final metrics of a report.
RunReport finish_report(const Workload& w, const RunControl& ctl, DenseVector x,
                        std::size_t iterations, bool converged, double wall_time_s,
                        std::size_t error_evaluations);

} // namespace detail

} // namespace kz

#endif // KZ_SOLVER_HPP
