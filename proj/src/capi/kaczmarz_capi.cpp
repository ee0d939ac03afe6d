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

#include "kaczmarz/kaczmarz.h"

#include <algorithm>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "kz/csv.hpp"
#include "kz/error.hpp"
#include "kz/harness.hpp"
#include "kz/spectral.hpp"
#include "kz/sysgen.hpp"

struct kz_system
{
    kz::LinearSystem sys;
};

struct kz_bench
{
    kz::BenchResult             result;
    std::vector<kz::ReportRow>  rows;
};

struct kz_trace
{
    std::vector<kz::TraceRecord> records;
};

namespace {

thread_local std::string last_error;

kz_status
fail(kz_status status, std::string msg)
{
    last_error = std::move(msg);
    return status;
}

kz_status
null_arg(const char* name)
{
    return fail(KZ_ERR_INVALID_ARGUMENT, std::string(name) + " is NULL");
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
kz_status
guarded(Fn&& fn) noexcept
{
    try
    {
        fn();
        return KZ_OK;
    }
    catch (const kz::Error& e)
    {
        return fail(static_cast<kz_status>(e.code()), e.what());
    }
    catch (const std::bad_alloc&)
    {
        return fail(KZ_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception& e)
    {
        return fail(KZ_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(KZ_ERR_INTERNAL, "unknown exception");
    }
}

kz::GeneratorConfig
to_core(const kz_generator_config& c)
{
    kz::GeneratorConfig g;
    g.m_max    = c.mother_rows;
    g.n_max    = c.mother_cols;
    g.mu_lo    = c.mu_lo;
    g.mu_hi    = c.mu_hi;
    g.sigma_lo = c.sigma_lo;
    g.sigma_hi = c.sigma_hi;
    g.seed     = c.seed;
    return g;
}

kz::SolverConfig
to_core(const kz_solver_config& c)
{
    if (c.variant < KZ_VARIANT_CK || c.variant > KZ_VARIANT_CGLS)
        kz::throw_invalid("unknown variant value");
    if (c.backend < KZ_BACKEND_SEQ || c.backend > KZ_BACKEND_DIST)
        kz::throw_invalid("unknown backend value");
    if (c.scheme < KZ_SCHEME_FULL_ACCESS || c.scheme > KZ_SCHEME_DISTRIBUTED)
        kz::throw_invalid("unknown scheme value");
    if (c.alpha_policy < KZ_ALPHA_UNIT || c.alpha_policy > KZ_ALPHA_OPTIMAL_PARTIAL)
        kz::throw_invalid("unknown alpha policy value");

    kz::SolverConfig s;
    s.variant        = static_cast<kz::Variant>(c.variant);
    s.backend        = static_cast<kz::Backend>(c.backend);
    s.scheme         = static_cast<kz::SamplingScheme>(c.scheme);
    s.alpha_policy   = static_cast<kz::AlphaPolicy>(c.alpha_policy);
    s.alpha          = c.alpha;
    s.q              = c.q;
    s.block_size     = c.block_size;
    s.epsilon        = c.epsilon;
    s.max_iterations = c.max_iterations;
    s.base_seed      = c.seed;
    return s;
}

kz_run_report
to_c(const kz::RunReport& r)
{
    kz_run_report o;
    o.variant           = static_cast<kz_variant>(r.variant);
    o.backend           = static_cast<kz_backend>(r.backend);
    o.scheme            = static_cast<kz_scheme>(r.scheme);
    o.alpha_policy      = static_cast<kz_alpha_policy>(r.alpha_policy);
    o.alpha             = r.alpha;
    o.q                 = r.q;
    o.block_size        = r.block_size;
    o.seed              = r.seed;
    o.iterations        = r.iterations;
    o.converged         = r.converged ? 1 : 0;
    o.wall_time_s       = r.wall_time_s;
    o.final_error_sq    = r.final_error_sq;
    o.final_residual    = r.final_residual;
    o.error_evaluations = r.error_evaluations;
    return o;
}

kz::RunReport
to_core(const kz_run_report& r)
{
    kz::RunReport o;
    o.variant           = static_cast<kz::Variant>(r.variant);
    o.backend           = static_cast<kz::Backend>(r.backend);
    o.scheme            = static_cast<kz::SamplingScheme>(r.scheme);
    o.alpha_policy      = static_cast<kz::AlphaPolicy>(r.alpha_policy);
    o.alpha             = r.alpha;
    o.q                 = r.q;
    o.block_size        = r.block_size;
    o.seed              = r.seed;
    o.iterations        = r.iterations;
    o.converged         = r.converged != 0;
    o.wall_time_s       = r.wall_time_s;
    o.final_error_sq    = r.final_error_sq;
    o.final_residual    = r.final_residual;
    o.error_evaluations = r.error_evaluations;
    return o;
}

int
copy_out(const std::string& s, char* buf, std::size_t len)
{
    if (buf && len > 0)
    {
        const std::size_t n = std::min(s.size(), len - 1);
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
    return static_cast<int>(s.size());
}

template <typename E, typename Parse>
kz_status
parse_name(const char* name, E* out, Parse&& parse)
{
    if (!name)
        return null_arg("name");
    if (!out)
        return null_arg("out");
    return guarded([&] { *out = static_cast<E>(parse(name)); });
}

kz_system*
wrap(kz::LinearSystem sys)
{
    return new kz_system{std::move(sys)};
}

} // namespace

extern "C" {

KZ_API const char*
kz_version(void)
{
    return "1.0.0";
}

KZ_API const char*
kz_status_string(kz_status status)
{
    switch (status)
    {
        case KZ_OK:                      return "ok";
        case KZ_ERR_DIMENSION:           return "dimension mismatch";
        case KZ_ERR_DEGENERATE_ROW:      return "degenerate row";
        case KZ_ERR_RANGE:               return "out of range";
        case KZ_ERR_PARSE:               return "parse error";
        case KZ_ERR_UNSUPPORTED_VERSION: return "unsupported version";
        case KZ_ERR_IO:                  return "i/o error";
        case KZ_ERR_NON_CONVERGENCE:     return "did not converge";
        case KZ_ERR_INVALID_ARGUMENT:    return "invalid argument";
        case KZ_ERR_PROTOCOL:            return "protocol error";
        case KZ_ERR_INTERNAL:            return "internal error";
    }
    return "unknown status";
}

KZ_API const char*
kz_last_error_message(void)
{
    return last_error.c_str();
}

KZ_API void
kz_generator_config_default(kz_generator_config* cfg)
{
    if (!cfg)
        return;
    const kz::GeneratorConfig g;
    cfg->rows        = 0;
    cfg->cols        = 0;
    cfg->mother_rows = g.m_max;
    cfg->mother_cols = g.n_max;
    cfg->mu_lo       = g.mu_lo;
    cfg->mu_hi       = g.mu_hi;
    cfg->sigma_lo    = g.sigma_lo;
    cfg->sigma_hi    = g.sigma_hi;
    cfg->seed        = g.seed;
}

KZ_API void
kz_solver_config_default(kz_solver_config* cfg)
{
    if (!cfg)
        return;
    const kz::SolverConfig s;
    cfg->variant        = static_cast<kz_variant>(s.variant);
    cfg->backend        = static_cast<kz_backend>(s.backend);
    cfg->scheme         = static_cast<kz_scheme>(s.scheme);
    cfg->alpha_policy   = static_cast<kz_alpha_policy>(s.alpha_policy);
    cfg->alpha          = s.alpha;
    cfg->q              = s.q;
    cfg->block_size     = s.block_size;
    cfg->epsilon        = s.epsilon;
    cfg->max_iterations = s.max_iterations;
    cfg->seed           = s.base_seed;
}

KZ_API const char*
kz_variant_name(kz_variant v)
{
    if (v < KZ_VARIANT_CK || v > KZ_VARIANT_CGLS)
        return "?";
    return kz::to_string(static_cast<kz::Variant>(v)).data();
}

KZ_API const char*
kz_backend_name(kz_backend b)
{
    if (b < KZ_BACKEND_SEQ || b > KZ_BACKEND_DIST)
        return "?";
    return kz::to_string(static_cast<kz::Backend>(b)).data();
}

KZ_API const char*
kz_scheme_name(kz_scheme s)
{
    if (s < KZ_SCHEME_FULL_ACCESS || s > KZ_SCHEME_DISTRIBUTED)
        return "?";
    return kz::to_string(static_cast<kz::SamplingScheme>(s)).data();
}

KZ_API const char*
kz_alpha_policy_name(kz_alpha_policy p)
{
    if (p < KZ_ALPHA_UNIT || p > KZ_ALPHA_OPTIMAL_PARTIAL)
        return "?";
    return kz::to_string(static_cast<kz::AlphaPolicy>(p)).data();
}

KZ_API kz_status
kz_parse_variant(const char* name, kz_variant* out)
{
    return parse_name(name, out, kz::parse_variant);
}

KZ_API kz_status
kz_parse_backend(const char* name, kz_backend* out)
{
    return parse_name(name, out, kz::parse_backend);
}

KZ_API kz_status
kz_parse_scheme(const char* name, kz_scheme* out)
{
    return parse_name(name, out, kz::parse_scheme);
}

KZ_API kz_status
kz_parse_alpha_policy(const char* name, kz_alpha_policy* out)
{
    return parse_name(name, out, kz::parse_alpha_policy);
}

KZ_API kz_status
kz_system_generate(const kz_generator_config* cfg, kz_system** out)
{
    if (!cfg)
        return null_arg("cfg");
    if (!out)
        return null_arg("out");
    return guarded([&] {
        const kz::GeneratorConfig g      = to_core(*cfg);
        kz::LinearSystem          mother = kz::generate_mother(g);
        const std::size_t         m      = cfg->rows == 0 ? g.m_max : cfg->rows;
        const std::size_t         n      = cfg->cols == 0 ? g.n_max : cfg->cols;
        if (m == g.m_max && n == g.n_max)
            *out = wrap(std::move(mother));
        else
            *out = wrap(kz::crop(mother, m, n, g));
    });
}

KZ_API kz_status
kz_system_from_arrays(size_t m, size_t n, const double* a, const double* b, const double* x_star,
                      kz_system** out)
{
    if (!a)
        return null_arg("a");
    if (!b)
        return null_arg("b");
    if (!out)
        return null_arg("out");
    return guarded([&] {
        if (m == 0 || n == 0 || m > std::numeric_limits<std::size_t>::max() / n)
            kz::throw_dimension("matrix dimensions must be positive");
        kz::LinearSystem sys{kz::DenseMatrix(m, n, std::vector<double>(a, a + m * n)),
                             kz::DenseVector(b, b + m),
                             std::nullopt,
                             std::nullopt,
                             true};
        if (x_star)
            sys.x_star = kz::DenseVector(x_star, x_star + n);
        *out = wrap(std::move(sys));
    });
}

KZ_API kz_status
kz_system_crop(const kz_system* sys, size_t m, size_t n, const kz_generator_config* cfg,
               kz_system** out)
{
    if (!sys)
        return null_arg("sys");
    if (!cfg)
        return null_arg("cfg");
    if (!out)
        return null_arg("out");
    return guarded([&] { *out = wrap(kz::crop(sys->sys, m, n, to_core(*cfg))); });
}

KZ_API kz_status
kz_system_make_inconsistent(const kz_system* sys, uint64_t noise_seed, double noise_std,
                            kz_system** out)
{
    if (!sys)
        return null_arg("sys");
    if (!out)
        return null_arg("out");
    return guarded(
        [&] { *out = wrap(kz::make_inconsistent(sys->sys, noise_seed, noise_std)); });
}

KZ_API kz_status
kz_system_save(const kz_system* sys, const char* path)
{
    if (!sys)
        return null_arg("sys");
    if (!path)
        return null_arg("path");
    return guarded([&] { kz::save_system(sys->sys, path); });
}

KZ_API kz_status
kz_system_load(const char* path, kz_system** out)
{
    if (!path)
        return null_arg("path");
    if (!out)
        return null_arg("out");
    return guarded([&] { *out = wrap(kz::load_system(path)); });
}

KZ_API void
kz_system_free(kz_system* sys)
{
    delete sys;
}

KZ_API size_t
kz_system_rows(const kz_system* sys)
{
    return sys ? sys->sys.rows() : 0;
}

KZ_API size_t
kz_system_cols(const kz_system* sys)
{
    return sys ? sys->sys.cols() : 0;
}

KZ_API int
kz_system_is_consistent(const kz_system* sys)
{
    return sys && sys->sys.consistent ? 1 : 0;
}

KZ_API int
kz_system_has_reference(const kz_system* sys)
{
    return sys && sys->sys.reference() ? 1 : 0;
}

KZ_API kz_status
kz_system_copy_reference(const kz_system* sys, double* out, size_t len)
{
    if (!sys)
        return null_arg("sys");
    if (!out)
        return null_arg("out");
    const kz::DenseVector* ref = sys->sys.reference();
    if (!ref)
        return fail(KZ_ERR_INVALID_ARGUMENT, "system has no reference solution");
    if (len != ref->size())
        return fail(KZ_ERR_DIMENSION, "buffer length " + std::to_string(len) +
                                          " does not match column count " +
                                          std::to_string(ref->size()));
    std::copy(ref->begin(), ref->end(), out);
    return KZ_OK;
}

KZ_API kz_status
kz_system_spectral_stats(const kz_system* sys, kz_spectral_stats* out)
{
    if (!sys)
        return null_arg("sys");
    if (!out)
        return null_arg("out");
    return guarded([&] {
        const kz::SpectralStats s = kz::spectral_stats(sys->sys.a.view());
        *out = {s.sigma_max, s.sigma_min, s.s_max, s.s_min, s.frobenius_sq};
    });
}

KZ_API kz_status
kz_optimal_alpha(double s_min, double s_max, size_t q, double* out)
{
    if (!out)
        return null_arg("out");
    return guarded([&] { *out = kz::optimal_alpha(s_min, s_max, q); });
}

KZ_API kz_status
kz_solve(const kz_system* sys, const kz_solver_config* cfg, kz_run_report* report, double* x_out,
         size_t x_len)
{
    if (!sys)
        return null_arg("sys");
    if (!cfg)
        return null_arg("cfg");
    if (!report)
        return null_arg("report");
    if (x_out && x_len != sys->sys.cols())
        return fail(KZ_ERR_DIMENSION, "x_out length " + std::to_string(x_len) +
                                          " does not match column count " +
                                          std::to_string(sys->sys.cols()));
    return guarded([&] {
        const kz::Workload w(sys->sys, to_core(*cfg));
        kz::RunControl     ctl;
        ctl.seed            = cfg->seed;
        ctl.stop_on_error   = sys->sys.reference() != nullptr;
        const kz::RunReport r = kz::run_solver(w, ctl);
        if (x_out)
            std::copy(r.x.begin(), r.x.end(), x_out);
        *report = to_c(r);
    });
}

KZ_API kz_status
kz_bench_run(const kz_system* sys, const kz_solver_config* cfg, size_t n_seeds, size_t n_runs,
             kz_bench** out)
{
    if (!sys)
        return null_arg("sys");
    if (!cfg)
        return null_arg("cfg");
    if (!out)
        return null_arg("out");
    return guarded([&] {
        const kz::Workload w(sys->sys, to_core(*cfg));
        auto               b = std::make_unique<kz_bench>();
        b->result            = kz::bench(w, n_seeds, n_runs, cfg->seed);
        b->rows              = b->result.rows();
        *out                 = b.release();
    });
}

KZ_API size_t
kz_bench_row_count(const kz_bench* bench)
{
    return bench ? bench->rows.size() : 0;
}

KZ_API kz_status
kz_bench_get_row(const kz_bench* bench, size_t index, kz_run_report* out, int* is_summary)
{
    if (!bench)
        return null_arg("bench");
    if (!out)
        return null_arg("out");
    if (index >= bench->rows.size())
        return fail(KZ_ERR_RANGE, "row " + std::to_string(index) + " out of range");
    const kz::ReportRow& row = bench->rows[index];
    *out                     = to_c(row.report);
    if (is_summary)
        *is_summary = row.kind == kz::RowKind::summary ? 1 : 0;
    return KZ_OK;
}

KZ_API int
kz_bench_all_converged(const kz_bench* bench)
{
    return bench && bench->result.measurement.all_converged() ? 1 : 0;
}

KZ_API size_t
kz_bench_mean_iterations(const kz_bench* bench)
{
    return bench ? bench->result.measurement.mean_iterations : 0;
}

KZ_API void
kz_bench_free(kz_bench* bench)
{
    delete bench;
}

KZ_API kz_status
kz_trace_run(const kz_system* sys, const kz_solver_config* cfg, size_t max_iterations, size_t step,
             kz_trace** out)
{
    if (!sys)
        return null_arg("sys");
    if (!cfg)
        return null_arg("cfg");
    if (!out)
        return null_arg("out");
    const kz::DenseVector* ref = sys->sys.reference();
    if (!ref)
        return fail(KZ_ERR_INVALID_ARGUMENT, "trace needs a reference solution (x_star or x_ls)");
    return guarded([&] {
        const kz::Workload w(sys->sys, to_core(*cfg));
        auto               t = std::make_unique<kz_trace>();
        t->records           = kz::trace_run(w, max_iterations, step, *ref, cfg->seed);
        *out                 = t.release();
    });
}

KZ_API size_t
kz_trace_size(const kz_trace* trace)
{
    return trace ? trace->records.size() : 0;
}

KZ_API kz_status
kz_trace_get(const kz_trace* trace, size_t index, kz_trace_record* out)
{
    if (!trace)
        return null_arg("trace");
    if (!out)
        return null_arg("out");
    if (index >= trace->records.size())
        return fail(KZ_ERR_RANGE, "record " + std::to_string(index) + " out of range");
    const kz::TraceRecord& r = trace->records[index];
    *out                     = {r.iteration, r.error_norm, r.residual_norm};
    return KZ_OK;
}

KZ_API kz_status
kz_trace_plateau(const kz_trace* trace, size_t count, double* out)
{
    if (!trace)
        return null_arg("trace");
    if (!out)
        return null_arg("out");
    return guarded([&] { *out = kz::plateau(trace->records, count); });
}

KZ_API void
kz_trace_free(kz_trace* trace)
{
    delete trace;
}

KZ_API const char*
kz_report_csv_header(void)
{
    return kz::report_csv_header.data();
}

KZ_API const char*
kz_trace_csv_header(void)
{
    return kz::trace_csv_header.data();
}

KZ_API int
kz_format_report_row(const kz_run_report* report, int is_summary, char* buf, size_t len)
{
    if (!report)
        return -1;
    try
    {
        return copy_out(kz::format_report_row(is_summary ? kz::RowKind::summary : kz::RowKind::run,
                                              to_core(*report)),
                        buf, len);
    }
    catch (...)
    {
        return -1;
    }
}

KZ_API int
kz_format_trace_row(const kz_trace_record* record, char* buf, size_t len)
{
    if (!record)
        return -1;
    try
    {
        return copy_out(kz::format_trace_row({record->iteration, record->error_norm,
                                              record->residual_norm}),
                        buf, len);
    }
    catch (...)
    {
        return -1;
    }
}

} // extern "C"
