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

#include "kz/solvers_seq.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "kz/cgls.hpp"
#include "kz/error.hpp"
#include "kz/loop.hpp"

namespace kz {

namespace {

void
check_row(const MatrixView& a, const RowNormCache& cache, std::size_t row)
{
    if (row >= a.rows())
        throw Error(ErrorCode::range, "row index " + std::to_string(row) + " out of range");
    if (!(cache.sq_norms[row] > 0.0))
        throw DegenerateRowError(row);
}

// acc_i += (scale * row_i) / q
inline void
accumulate_scaled(std::span<double> acc, double scale, std::span<const double> row, double q)
{
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += (scale * row[i]) / q;
}

// acc_i += delta_i / q
inline void
accumulate_delta(std::span<double> acc, std::span<const double> delta, double q)
{
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += delta[i] / q;
}

std::vector<Prng>
make_worker_rngs(std::uint64_t seed, std::size_t q)
{
    std::vector<Prng> rngs;
    rngs.reserve(q);
    for (std::size_t t = 0; t < q; ++t)
        rngs.push_back(worker_rng(seed, t));
    return rngs;
}

RunControl
default_control(const SolverConfig& cfg)
{
    RunControl ctl;
    ctl.seed = cfg.base_seed;
    return ctl;
}

} // namespace

void
kaczmarz_step(std::span<double> x, const MatrixView& a, std::span<const double> b,
              const RowNormCache& cache, std::size_t row, double alpha)
{
    check_row(a, cache, row);
    const auto   ai    = a.row(row);
    const double scale = projection_scale(ai, b[row], cache.sq_norms[row], x, alpha);
    axpy_row(x, scale, ai);
}

void
rka_combined_step(std::span<double> x, const MatrixView& a, std::span<const double> b,
                  const RowNormCache& cache, std::span<const std::size_t> rows,
                  std::span<const double> alphas)
{
    if (rows.empty())
        throw_invalid("rka_combined_step: empty row set");
    if (alphas.size() != 1 && alphas.size() != rows.size())
        throw_dimension("rka_combined_step: need one weight or one per row");

    const double q = static_cast<double>(rows.size());
    DenseVector  acc(x.begin(), x.end());
    for (std::size_t t = 0; t < rows.size(); ++t)
    {
        check_row(a, cache, rows[t]);
        const auto   ai    = a.row(rows[t]);
        const double alpha = alphas.size() == 1 ? alphas[0] : alphas[t];
        accumulate_scaled(acc, projection_scale(ai, b[rows[t]], cache.sq_norms[rows[t]], x, alpha),
                          ai, q);
    }
    std::copy(acc.begin(), acc.end(), x.begin());
}

void
rkab_worker_block(std::span<double> v, const MatrixView& a, std::span<const double> b,
                  const RowNormCache& cache, const RowSampler& sampler, Prng& rng,
                  std::size_t block_size, double alpha)
{
    for (std::size_t j = 0; j < block_size; ++j)
        kaczmarz_step(v, a, b, cache, sampler.sample(rng), alpha);
}

void
rkab_block_delta(std::span<const double> x, std::span<double> v, std::span<double> delta,
                 const MatrixView& a, std::span<const double> b, const RowNormCache& cache,
                 const RowSampler& sampler, Prng& rng, std::size_t block_size, double alpha)
{
    const std::size_t n = x.size();

    // first projection from the shared iterate
    std::size_t  row   = sampler.sample(rng);
    auto         ai    = a.row(row);
    const double scale = projection_scale(ai, b[row], cache.sq_norms[row], x, alpha);
    for (std::size_t i = 0; i < n; ++i)
    {
        delta[i] = scale * ai[i];
        v[i]     = x[i] + delta[i];
    }
    if (block_size == 1)
        return;

    // remaining projections on the private estimate
    for (std::size_t j = 1; j < block_size; ++j)
    {
        row = sampler.sample(rng);
        ai  = a.row(row);
        axpy_row(v, projection_scale(ai, b[row], cache.sq_norms[row], v, alpha), ai);
    }
    for (std::size_t i = 0; i < n; ++i)
        delta[i] = v[i] - x[i];
}

RunReport
solve_ck(const Workload& w, const RunControl& ctl)
{
    const auto&  sys   = w.system();
    const auto   a     = sys.a.view();
    const double alpha = w.alpha(0);
    return detail::run_loop(w, ctl, [&](DenseVector& x, std::size_t k) {
        const std::size_t row = k % sys.rows();
        axpy_row(x, projection_scale(a.row(row), sys.b[row], w.norms().sq_norms[row], x, alpha),
                 a.row(row));
    });
}

RunReport
solve_rk(const Workload& w, const RunControl& ctl)
{
    const auto&  sys   = w.system();
    const auto   a     = sys.a.view();
    const double alpha = w.alpha(0);
    Prng         rng   = worker_rng(ctl.seed, 0);
    return detail::run_loop(w, ctl, [&](DenseVector& x, std::size_t) {
        const std::size_t row = w.sampler(0).sample(rng);
        axpy_row(x, projection_scale(a.row(row), sys.b[row], w.norms().sq_norms[row], x, alpha),
                 a.row(row));
    });
}

RunReport
solve_rka_seq(const Workload& w, const RunControl& ctl)
{
    const auto&       sys  = w.system();
    const auto        a    = sys.a.view();
    const std::size_t q    = w.workers();
    const double      qd   = static_cast<double>(q);
    auto              rngs = make_worker_rngs(ctl.seed, q);
    DenseVector       acc(sys.cols());

    return detail::run_loop(w, ctl, [&](DenseVector& x, std::size_t) {
        acc = x;
        for (std::size_t t = 0; t < q; ++t)
        {
            const std::size_t row   = w.sampler(t).sample(rngs[t]);
            const auto        ai    = a.row(row);
            const double      scale =
                projection_scale(ai, sys.b[row], w.norms().sq_norms[row], x, w.alpha(t));
            accumulate_scaled(acc, scale, ai, qd);
        }
        x.swap(acc);
    });
}

RunReport
solve_rkab_seq(const Workload& w, const RunControl& ctl)
{
    const auto&       sys  = w.system();
    const auto        a    = sys.a.view();
    const std::size_t q    = w.workers();
    const std::size_t bs   = w.config().block_size;
    const double      qd   = static_cast<double>(q);
    auto              rngs = make_worker_rngs(ctl.seed, q);
    DenseVector       acc(sys.cols()), v(sys.cols()), delta(sys.cols());

    return detail::run_loop(w, ctl, [&](DenseVector& x, std::size_t) {
        acc = x;
        for (std::size_t t = 0; t < q; ++t)
        {
            rkab_block_delta(x, v, delta, a, sys.b, w.norms(), w.sampler(t), rngs[t], bs,
                             w.alpha(t));
            accumulate_delta(acc, delta, qd);
        }
        x.swap(acc);
    });
}

RunReport
solve_rkab_listing_seq(const Workload& w, const RunControl& ctl)
{
    const auto&       sys  = w.system();
    const auto        a    = sys.a.view();
    const std::size_t q    = w.workers();
    const std::size_t bs   = w.config().block_size;
    const double      qd   = static_cast<double>(q);
    auto              rngs = make_worker_rngs(ctl.seed, q);
    DenseVector       acc(sys.cols()), u(sys.cols());

    return detail::run_loop(w, ctl, [&](DenseVector& x, std::size_t) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t t = 0; t < q; ++t)
        {
            u = x;
            rkab_worker_block(u, a, sys.b, w.norms(), w.sampler(t), rngs[t], bs, w.alpha(t));
            const std::size_t row   = w.sampler(t).sample(rngs[t]);
            const auto        ai    = a.row(row);
            const double      scale =
                projection_scale(ai, sys.b[row], w.norms().sq_norms[row], u, w.alpha(t));
            for (std::size_t i = 0; i < u.size(); ++i)
                acc[i] += (u[i] + scale * ai[i]) / qd;
        }
        x.swap(acc);
    });
}

RunReport
solve_cgls(const Workload& w, const RunControl& ctl)
{
    const auto&       sys    = w.system();
    const std::size_t max_it = ctl.max_iterations.value_or(w.config().max_iterations);
    const auto        t0     = std::chrono::steady_clock::now();

    DenseVector x;
    std::size_t iterations = 0;
    bool        converged  = true;
    try
    {
        CglsResult res = cgls_solve(sys.a.view(), sys.b, w.config().epsilon, max_it);
        x              = std::move(res.x);
        iterations     = res.iterations;
    }
    catch (const NonConvergenceError& e)
    {
        x          = e.best_iterate();
        iterations = max_it;
        converged  = false;
    }
    const double elapsed = detail::seconds_since(t0);
    if (ctl.observer)
        ctl.observer(iterations, x);
    RunReport rep = detail::finish_report(w, ctl, std::move(x), iterations, false, elapsed, 0);
    // CGLS converges on its own normal-equations criterion, not on the error
    rep.converged = converged;
    return rep;
}

RunReport
run_sequential(const Workload& w, const RunControl& ctl)
{
    switch (w.config().variant)
    {
        case Variant::ck:   return solve_ck(w, ctl);
        case Variant::rk:   return solve_rk(w, ctl);
        case Variant::rka:  return solve_rka_seq(w, ctl);
        case Variant::rkab: return solve_rkab_seq(w, ctl);
        case Variant::cgls: return solve_cgls(w, ctl);
    }
    throw_invalid("unknown variant");
}

RunReport
solve_ck(const LinearSystem& sys, const SolverConfig& cfg)
{
    return solve_ck(Workload(sys, cfg), default_control(cfg));
}

RunReport
solve_rk(const LinearSystem& sys, const SolverConfig& cfg)
{
    return solve_rk(Workload(sys, cfg), default_control(cfg));
}

RunReport
solve_rka_seq(const LinearSystem& sys, const SolverConfig& cfg)
{
    return solve_rka_seq(Workload(sys, cfg), default_control(cfg));
}

RunReport
solve_rkab_seq(const LinearSystem& sys, const SolverConfig& cfg)
{
    return solve_rkab_seq(Workload(sys, cfg), default_control(cfg));
}

} // namespace kz
