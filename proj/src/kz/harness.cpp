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

#include "kz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kz/error.hpp"
#include "kz/solvers_dist.hpp"
#include "kz/solvers_parallel.hpp"
#include "kz/solvers_seq.hpp"

namespace kz {

RunReport
run_solver(const Workload& w, const RunControl& ctl)
{
    switch (w.config().backend)
    {
        case Backend::sequential:     return run_sequential(w, ctl);
        case Backend::threads:        return run_threads(w, ctl);
        case Backend::simulated_dist: return run_simulated_dist(w, ctl);
    }
    throw_invalid("unknown backend");
}

IterationMeasurement
measure_iterations(const Workload& w, std::size_t n_seeds, std::uint64_t base_seed)
{
    if (n_seeds == 0)
        throw_invalid("seeds must be at least 1");

    IterationMeasurement m;
    m.runs.reserve(n_seeds);
    std::size_t sum = 0;
    for (std::size_t i = 0; i < n_seeds; ++i)
    {
        RunControl ctl;
        ctl.seed = base_seed + i;
        m.runs.push_back(run_solver(w, ctl));
        if (m.runs.back().converged)
        {
            ++m.n_converged;
            sum += m.runs.back().iterations;
        }
    }
    if (m.n_converged > 0)
        m.mean_iterations = (sum + m.n_converged - 1) / m.n_converged;
    return m;
}

ReplayResult
timed_replay(const Workload& w, std::size_t fixed_iterations, std::size_t n_runs,
             std::uint64_t base_seed)
{
    if (fixed_iterations == 0)
        throw_invalid("fixed iteration budget must be at least 1");
    if (n_runs == 0)
        throw_invalid("runs must be at least 1");

    ReplayResult r;
    r.runs.reserve(n_runs);
    for (std::size_t i = 0; i < n_runs; ++i)
    {
        RunControl ctl;
        ctl.seed           = base_seed + i;
        ctl.stop_on_error  = false;
        ctl.max_iterations = fixed_iterations;
        r.runs.push_back(run_solver(w, ctl));
        r.total_s += r.runs.back().wall_time_s;
    }
    return r;
}

BenchResult
bench(const Workload& w, std::size_t n_seeds, std::size_t n_runs, std::uint64_t base_seed)
{
    BenchResult b;
    b.measurement = measure_iterations(w, n_seeds, base_seed);
    if (b.measurement.mean_iterations > 0)
        b.replay = timed_replay(w, b.measurement.mean_iterations, n_runs, base_seed);
    return b;
}

std::vector<ReportRow>
BenchResult::rows() const
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<ReportRow> out;
    out.reserve(measurement.runs.size() + 1);
    for (std::size_t i = 0; i < measurement.runs.size(); ++i)
    {
        ReportRow row{RowKind::run, measurement.runs[i]};
        row.report.wall_time_s = i < replay.runs.size() ? replay.runs[i].wall_time_s : nan;
        row.report.x.clear();
        out.push_back(std::move(row));
    }

    ReportRow sum{RowKind::summary, {}};
    if (!measurement.runs.empty())
    {
        sum.report = measurement.runs.front();
        sum.report.x.clear();
    }
    sum.report.iterations  = measurement.mean_iterations;
    sum.report.converged   = measurement.all_converged();
    sum.report.wall_time_s = replay.runs.empty() ? nan : replay.total_s;
    double err = 0.0, res = 0.0;
    for (const auto& r : replay.runs)
    {
        err += r.final_error_sq;
        res += r.final_residual;
    }
    const double count        = static_cast<double>(replay.runs.size());
    sum.report.final_error_sq = replay.runs.empty() ? nan : err / count;
    sum.report.final_residual = replay.runs.empty() ? nan : res / count;
    out.push_back(std::move(sum));
    return out;
}

std::vector<TraceRecord>
trace_run(const Workload& w, std::size_t max_iterations, std::size_t step, const DenseVector& x_ref,
          std::uint64_t seed)
{
    if (step == 0)
        throw_invalid("trace step must be at least 1");
    if (x_ref.size() != w.system().cols())
        throw_dimension("reference solution length does not match column count");

    const auto&              sys = w.system();
    std::vector<TraceRecord> out;
    out.reserve(max_iterations / step + 1);

    RunControl ctl;
    ctl.seed           = seed;
    ctl.stop_on_error  = false;
    ctl.max_iterations = max_iterations;
    ctl.observer       = [&](std::size_t k, std::span<const double> x) {
        if (k % step != 0)
            return;
        out.push_back({k, std::sqrt(distance_sq(x, x_ref)), residual_norm(sys.a.view(), x, sys.b)});
    };
    run_solver(w, ctl);
    return out;
}

double
plateau(const std::vector<TraceRecord>& records, std::size_t count)
{
    if (records.empty() || count == 0)
        throw_invalid("plateau needs at least one record");
    const std::size_t take = std::min(count, records.size());
    double            sum  = 0.0;
    for (std::size_t i = records.size() - take; i < records.size(); ++i)
        sum += records[i].error_norm;
    return sum / static_cast<double>(take);
}

} // namespace kz
