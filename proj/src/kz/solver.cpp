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

#include "kz/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kz/error.hpp"
#include "kz/spectral.hpp"

namespace kz {

std::string_view
to_string(Variant v) noexcept
{
    switch (v)
    {
        case Variant::ck:   return "ck";
        case Variant::rk:   return "rk";
        case Variant::rka:  return "rka";
        case Variant::rkab: return "rkab";
        case Variant::cgls: return "cgls";
    }
    return "?";
}

std::string_view
to_string(AlphaPolicy p) noexcept
{
    switch (p)
    {
        case AlphaPolicy::unit:            return "unit";
        case AlphaPolicy::fixed:           return "fixed";
        case AlphaPolicy::optimal_full:    return "optimal_full";
        case AlphaPolicy::optimal_partial: return "optimal_partial";
    }
    return "?";
}

std::string_view
to_string(SamplingScheme s) noexcept
{
    return s == SamplingScheme::full_access ? "full_access" : "distributed";
}

std::string_view
to_string(Backend b) noexcept
{
    switch (b)
    {
        case Backend::sequential:     return "seq";
        case Backend::threads:        return "threads";
        case Backend::simulated_dist: return "dist";
    }
    return "?";
}

namespace {

template <typename E, std::size_t N>
E
parse_enum(std::string_view s, const E (&values)[N], const char* what)
{
    for (E v : values)
        if (to_string(v) == s)
            return v;
    throw_invalid(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

} // namespace

Variant
parse_variant(std::string_view s)
{
    static constexpr Variant all[] = {Variant::ck, Variant::rk, Variant::rka, Variant::rkab,
                                      Variant::cgls};
    return parse_enum(s, all, "variant");
}

AlphaPolicy
parse_alpha_policy(std::string_view s)
{
    static constexpr AlphaPolicy all[] = {AlphaPolicy::unit, AlphaPolicy::fixed,
                                          AlphaPolicy::optimal_full, AlphaPolicy::optimal_partial};
    return parse_enum(s, all, "alpha policy");
}

SamplingScheme
parse_scheme(std::string_view s)
{
    static constexpr SamplingScheme all[] = {SamplingScheme::full_access,
                                             SamplingScheme::distributed};
    return parse_enum(s, all, "sampling scheme");
}

Backend
parse_backend(std::string_view s)
{
    static constexpr Backend all[] = {Backend::sequential, Backend::threads,
                                      Backend::simulated_dist};
    return parse_enum(s, all, "backend");
}

void
SolverConfig::validate() const
{
    if (q < 1)
        throw_invalid("q must be at least 1");
    if (block_size < 1)
        throw_invalid("block_size must be at least 1");
    if (!(epsilon > 0.0))
        throw_invalid("epsilon must be positive");
    if (alpha_policy == AlphaPolicy::fixed && !std::isfinite(alpha))
        throw_invalid("alpha must be finite");
    if ((variant == Variant::ck || variant == Variant::cgls) && backend != Backend::sequential)
        throw_invalid(std::string("variant ") + std::string(to_string(variant)) +
                      " only has a sequential backend");
    if (variant == Variant::rk && backend == Backend::simulated_dist)
        throw_invalid("variant rk has no distributed backend");
}

std::vector<double>
resolve_alphas(const LinearSystem& sys, const SolverConfig& cfg)
{
    const bool averaged = cfg.variant == Variant::rka || cfg.variant == Variant::rkab;
    const std::size_t workers = averaged ? cfg.q : 1;
    switch (cfg.alpha_policy)
    {
        case AlphaPolicy::unit:
            return std::vector<double>(cfg.q, 1.0);
        case AlphaPolicy::fixed:
            return std::vector<double>(cfg.q, cfg.alpha);
        case AlphaPolicy::optimal_full:
            return std::vector<double>(cfg.q, optimal_alpha(spectral_stats(sys.a.view()), workers));
        case AlphaPolicy::optimal_partial:
            if (!averaged)
                return std::vector<double>(cfg.q, 1.0);
            return partial_alphas(sys.a.view(), cfg.q);
    }
    return std::vector<double>(cfg.q, 1.0);
}

Workload::Workload(const LinearSystem& sys, const SolverConfig& cfg)
    : sys_(&sys), cfg_(cfg), norms_(row_norm_cache(sys.a.view()))
{
    cfg_.validate();
    if (sys.b.size() != sys.rows())
        throw_dimension("system: b has " + std::to_string(sys.b.size()) + " entries for " +
                        std::to_string(sys.rows()) + " rows");

    const bool averaged = cfg_.variant == Variant::rka || cfg_.variant == Variant::rkab;
    const bool split    = averaged && (cfg_.scheme == SamplingScheme::distributed ||
                                    cfg_.backend == Backend::simulated_dist);
    if (split)
    {
        if (cfg_.q > sys.rows())
            throw_invalid("q exceeds the number of rows for a distributed partition");
        for (std::size_t t = 0; t < cfg_.q; ++t)
        {
            const RowRange r = partition_rows(sys.rows(), cfg_.q, t);
            samplers_.push_back(make_sampler(norms_, r.lo, r.hi));
        }
    }
    else
    {
        samplers_.push_back(make_sampler(norms_));
    }
    alphas_ = resolve_alphas(sys, cfg_);
}

namespace detail {

LoopLimits
loop_limits(const Workload& w, const RunControl& ctl)
{
    LoopLimits lim{ctl.max_iterations.value_or(w.config().max_iterations), ctl.stop_on_error,
                   w.config().epsilon, w.reference()};
    if (lim.stop_on_error && lim.reference == nullptr)
        throw_invalid("stopping on the error needs a reference solution (x_star or x_ls)");
    if (lim.reference && lim.reference->size() != w.system().cols())
        throw_dimension("reference solution length does not match column count");
    return lim;
}

RunReport
finish_report(const Workload& w, const RunControl& ctl, DenseVector x, std::size_t iterations,
              bool converged, double wall_time_s, std::size_t error_evaluations)
{
    const SolverConfig& cfg = w.config();
    RunReport           rep;
    rep.variant           = cfg.variant;
    rep.backend           = cfg.backend;
    rep.scheme            = cfg.scheme;
    rep.alpha_policy      = cfg.alpha_policy;
    rep.alpha             = w.alpha(0);
    rep.q                 = cfg.q;
    rep.block_size        = cfg.block_size;
    rep.seed              = ctl.seed;
    rep.iterations        = iterations;
    rep.wall_time_s       = wall_time_s;
    rep.error_evaluations = error_evaluations;

    const LinearSystem& sys = w.system();
    rep.final_error_sq      = w.reference() ? distance_sq(x, *w.reference())
                                            : std::numeric_limits<double>::quiet_NaN();
    rep.final_residual      = residual_norm(sys.a.view(), x, sys.b);
    // a fixed-budget run that happens to land below epsilon still counts
    rep.converged = converged || (w.reference() && rep.final_error_sq < cfg.epsilon);
    rep.x         = std::move(x);
    return rep;
}

} // namespace detail

} // namespace kz
