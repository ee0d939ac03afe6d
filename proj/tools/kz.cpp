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

// kz: command line front end over the C API.
//
//   kz generate --rows 2000 --cols 50 --seed 7 --out s.bin
//   kz solve --system s.bin --variant rka --q 4
//   kz bench --variant rkab --q 4 --block-size 50 --seeds 10
//   kz trace --variant rka --q 20 --alpha 1 --step 100 --max-it 30000

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kaczmarz/kaczmarz.h"

namespace {

constexpr int exit_runtime_error = 1;
constexpr int exit_not_converged = 3;

// A failed library call; the message already carries the library's reason.
struct ApiFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

void
check(kz_status st, const std::string& what)
{
    if (st != KZ_OK)
        throw ApiFailure(what + ": " + kz_status_string(st) + ": " + kz_last_error_message());
}

struct SystemDeleter
{
    void operator()(kz_system* s) const { kz_system_free(s); }
};
struct BenchDeleter
{
    void operator()(kz_bench* b) const { kz_bench_free(b); }
};
struct TraceDeleter
{
    void operator()(kz_trace* t) const { kz_trace_free(t); }
};
using SystemPtr = std::unique_ptr<kz_system, SystemDeleter>;
using BenchPtr  = std::unique_ptr<kz_bench, BenchDeleter>;
using TracePtr  = std::unique_ptr<kz_trace, TraceDeleter>;

struct GenerateOptions
{
    std::size_t   rows        = 2000;
    std::size_t   cols        = 50;
    std::size_t   mother_rows = 4000;
    std::size_t   mother_cols = 500;
    double        mu_lo = -5.0, mu_hi = 5.0;
    double        sigma_lo = 1.0, sigma_hi = 20.0;
    std::uint64_t seed        = 0;
    bool          inconsistent = false;
    std::uint64_t noise_seed  = 1;
    double        noise_std   = 1.0;
    std::string   out;
};

struct SolverOptions
{
    std::string                system;
    std::string                variant = "rk";
    std::string                backend = "seq";
    std::string                scheme  = "full_access";
    std::optional<std::size_t> q;
    std::string                alpha;
    std::size_t                block_size = 1;
    double                     epsilon    = 1e-8;
    std::size_t                max_it     = 1'000'000;
    std::uint64_t              seed       = 0;
    std::string                output;
    bool                       no_header = false;

    // default system for bench/trace when --system is absent
    GenerateOptions gen;
};

void
add_generator_flags(CLI::App* app, GenerateOptions& g, const std::string& prefix)
{
    app->add_option("--" + prefix + "rows", g.rows, "Rows of the cropped system")
        ->check(CLI::PositiveNumber);
    app->add_option("--" + prefix + "cols", g.cols, "Columns of the cropped system")
        ->check(CLI::PositiveNumber);
    app->add_option("--" + prefix + "seed", g.seed, "Generator seed");
    app->add_flag("--inconsistent", g.inconsistent,
                  "Perturb b with Gaussian noise and store the least-squares solution");
    app->add_option("--noise-seed", g.noise_seed, "Seed of the noise added by --inconsistent");
}

void
add_solver_flags(CLI::App* app, SolverOptions& o)
{
    app->add_option("--variant", o.variant, "ck | rk | rka | rkab | cgls")
        ->check(CLI::IsMember({"ck", "rk", "rka", "rkab", "cgls"}));
    app->add_option("--backend", o.backend, "seq | threads | dist")
        ->check(CLI::IsMember({"seq", "threads", "dist"}));
    app->add_option("--scheme", o.scheme, "full_access | distributed")
        ->check(CLI::IsMember({"full_access", "distributed"}));
    app->add_option("--q", o.q, "Workers (threads or ranks); defaults to KZ_THREADS, else 1")
        ->check(CLI::PositiveNumber);
    app->add_option("--alpha", o.alpha, "Row weight: a number, 'opt' or 'opt-partial' (default 1)");
    app->add_option("--block-size", o.block_size, "Projections per worker block (rkab)")
        ->check(CLI::PositiveNumber);
    app->add_option("--epsilon", o.epsilon, "Stop when ||x - x_ref||^2 < epsilon")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-it", o.max_it, "Iteration budget");
    app->add_option("--seed", o.seed, "Run seed (bench: first of consecutive seeds)");
    app->add_option("--output", o.output, "Write CSV here instead of standard output");
    app->add_flag("--no-header", o.no_header, "Omit the CSV header row");
}

std::size_t
default_q()
{
    const char* env = std::getenv("KZ_THREADS");
    if (!env || !*env)
        return 1;
    char*                    end = nullptr;
    const unsigned long long v   = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0 || env[0] == '-')
        throw CLI::ValidationError("KZ_THREADS", "must be a positive integer, got '" +
                                                      std::string(env) + "'");
    return static_cast<std::size_t>(v);
}

kz_solver_config
make_solver_config(const SolverOptions& o)
{
    kz_solver_config c;
    kz_solver_config_default(&c);
    check(kz_parse_variant(o.variant.c_str(), &c.variant), "--variant");
    check(kz_parse_backend(o.backend.c_str(), &c.backend), "--backend");
    check(kz_parse_scheme(o.scheme.c_str(), &c.scheme), "--scheme");
    c.q              = o.q ? *o.q : default_q();
    c.block_size     = o.block_size;
    c.epsilon        = o.epsilon;
    c.max_iterations = o.max_it;
    c.seed           = o.seed;

    if (o.alpha.empty())
    {
        c.alpha_policy = KZ_ALPHA_UNIT;
    }
    else if (o.alpha == "opt")
    {
        c.alpha_policy = KZ_ALPHA_OPTIMAL_FULL;
    }
    else if (o.alpha == "opt-partial")
    {
        c.alpha_policy = KZ_ALPHA_OPTIMAL_PARTIAL;
    }
    else
    {
        std::size_t pos = 0;
        double      v   = 0.0;
        try
        {
            v = std::stod(o.alpha, &pos);
        }
        catch (const std::exception&)
        {
            pos = 0;
        }
        if (pos == 0 || pos != o.alpha.size() || !std::isfinite(v))
            throw CLI::ValidationError("--alpha", "expected a number, 'opt' or 'opt-partial', got '" +
                                                      o.alpha + "'");
        c.alpha_policy = KZ_ALPHA_FIXED;
        c.alpha        = v;
    }
    return c;
}

SystemPtr
generate_system(const GenerateOptions& g)
{
    kz_generator_config cfg;
    kz_generator_config_default(&cfg);
    cfg.rows        = g.rows;
    cfg.cols        = g.cols;
    cfg.mother_rows = std::max(g.mother_rows, g.rows);
    cfg.mother_cols = std::max(g.mother_cols, g.cols);
    cfg.mu_lo       = g.mu_lo;
    cfg.mu_hi       = g.mu_hi;
    cfg.sigma_lo    = g.sigma_lo;
    cfg.sigma_hi    = g.sigma_hi;
    cfg.seed        = g.seed;

    kz_system* raw = nullptr;
    check(kz_system_generate(&cfg, &raw), "generate");
    SystemPtr sys(raw);
    if (g.inconsistent)
    {
        kz_system* noisy = nullptr;
        check(kz_system_make_inconsistent(sys.get(), g.noise_seed, g.noise_std, &noisy),
              "inconsistent");
        sys.reset(noisy);
    }
    return sys;
}

SystemPtr
load_or_generate(const SolverOptions& o)
{
    if (o.system.empty())
        return generate_system(o.gen);
    kz_system* raw = nullptr;
    check(kz_system_load(o.system.c_str(), &raw), "--system " + o.system);
    return SystemPtr(raw);
}

// Standard output unless --output was given.
class CsvSink
{
public:
    explicit CsvSink(const std::string& path)
    {
        if (!path.empty())
        {
            file_.open(path, std::ios::out | std::ios::trunc);
            if (!file_)
                throw ApiFailure("--output: cannot open '" + path + "' for writing");
        }
    }

    void line(const std::string& s) { out() << s << '\n'; }

    void finish()
    {
        out().flush();
        if (!out())
            throw ApiFailure("write failed");
    }

private:
    std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

    std::ofstream file_;
};

std::string
report_row(const kz_run_report& r, bool summary)
{
    const int   n = kz_format_report_row(&r, summary ? 1 : 0, nullptr, 0);
    std::string s(static_cast<std::size_t>(n) + 1, '\0');
    kz_format_report_row(&r, summary ? 1 : 0, s.data(), s.size());
    s.resize(static_cast<std::size_t>(n));
    return s;
}

std::string
trace_row(const kz_trace_record& t)
{
    const int   n = kz_format_trace_row(&t, nullptr, 0);
    std::string s(static_cast<std::size_t>(n) + 1, '\0');
    kz_format_trace_row(&t, s.data(), s.size());
    s.resize(static_cast<std::size_t>(n));
    return s;
}

int
cmd_generate(const GenerateOptions& g)
{
    SystemPtr sys = generate_system(g);
    check(kz_system_save(sys.get(), g.out.c_str()), "--out " + g.out);
    return 0;
}

int
cmd_solve(const SolverOptions& o)
{
    const kz_solver_config cfg = make_solver_config(o);
    SystemPtr              sys = load_or_generate(o);
    kz_run_report          rep;
    check(kz_solve(sys.get(), &cfg, &rep, nullptr, 0), "solve");

    CsvSink out(o.output);
    if (!o.no_header)
        out.line(kz_report_csv_header());
    out.line(report_row(rep, false));
    out.finish();
    return 0;
}

int
cmd_bench(const SolverOptions& o, std::size_t seeds, std::size_t runs, bool strict)
{
    const kz_solver_config cfg = make_solver_config(o);
    SystemPtr              sys = load_or_generate(o);
    kz_bench*              raw = nullptr;
    check(kz_bench_run(sys.get(), &cfg, seeds, runs, &raw), "bench");
    BenchPtr b(raw);

    CsvSink out(o.output);
    if (!o.no_header)
        out.line(kz_report_csv_header());
    for (std::size_t i = 0; i < kz_bench_row_count(b.get()); ++i)
    {
        kz_run_report r;
        int           summary = 0;
        check(kz_bench_get_row(b.get(), i, &r, &summary), "bench row");
        out.line(report_row(r, summary != 0));
    }
    out.finish();

    if (!kz_bench_all_converged(b.get()))
    {
        std::cerr << "kz: warning: not every seed reached epsilon within --max-it\n";
        if (strict)
            return exit_not_converged;
    }
    return 0;
}

int
cmd_trace(const SolverOptions& o, std::size_t step)
{
    const kz_solver_config cfg = make_solver_config(o);
    SystemPtr              sys = load_or_generate(o);
    kz_trace*              raw = nullptr;
    check(kz_trace_run(sys.get(), &cfg, o.max_it, step, &raw), "trace");
    TracePtr t(raw);

    CsvSink out(o.output);
    if (!o.no_header)
        out.line(kz_trace_csv_header());
    for (std::size_t i = 0; i < kz_trace_size(t.get()); ++i)
    {
        kz_trace_record rec;
        check(kz_trace_get(t.get(), i, &rec), "trace record");
        out.line(trace_row(rec));
    }
    out.finish();
    return 0;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Kaczmarz-family dense solvers and benchmark harness", "kz"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kz_version()));

    GenerateOptions gen;
    auto*           generate = app.add_subcommand("generate", "Generate a random dense system file");
    generate->add_option("--rows", gen.rows, "Rows")->check(CLI::PositiveNumber);
    generate->add_option("--cols", gen.cols, "Columns")->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen.seed, "Generator seed");
    generate->add_option("--mother-rows", gen.mother_rows, "Rows of the mother system")
        ->check(CLI::PositiveNumber);
    generate->add_option("--mother-cols", gen.mother_cols, "Columns of the mother system")
        ->check(CLI::PositiveNumber);
    generate->add_option("--mu-lo", gen.mu_lo, "Lower bound of the row means");
    generate->add_option("--mu-hi", gen.mu_hi, "Upper bound of the row means");
    generate->add_option("--sigma-lo", gen.sigma_lo, "Lower bound of the row deviations")
        ->check(CLI::PositiveNumber);
    generate->add_option("--sigma-hi", gen.sigma_hi, "Upper bound of the row deviations")
        ->check(CLI::PositiveNumber);
    generate->add_flag("--inconsistent", gen.inconsistent,
                       "Perturb b with Gaussian noise and store the least-squares solution");
    generate->add_option("--noise-seed", gen.noise_seed, "Noise seed for --inconsistent");
    generate->add_option("--noise-std", gen.noise_std, "Noise deviation for --inconsistent")
        ->check(CLI::PositiveNumber);
    generate->add_option("--out", gen.out, "Output system file")->required();

    SolverOptions solve_opts;
    auto*         solve = app.add_subcommand("solve", "Run one solver and print one CSV row");
    solve->add_option("--system", solve_opts.system, "System file")
        ->required()
        ->check(CLI::ExistingFile);
    add_solver_flags(solve, solve_opts);

    SolverOptions bench_opts;
    std::size_t   seeds = 10, runs = 10;
    bool          strict = false;
    auto*         bench  = app.add_subcommand(
        "bench", "Measure iterations over seeds, then time fixed-budget replays");
    bench->add_option("--system", bench_opts.system, "System file (default: generated)")
        ->check(CLI::ExistingFile);
    add_solver_flags(bench, bench_opts);
    add_generator_flags(bench, bench_opts.gen, "gen-");
    bench->add_option("--seeds", seeds, "Seeds for the iteration measurement")
        ->check(CLI::PositiveNumber);
    bench->add_option("--runs", runs, "Timed replays")->check(CLI::PositiveNumber);
    bench->add_flag("--strict", strict, "Exit with status 3 if any seed fails to converge");

    SolverOptions trace_opts;
    trace_opts.max_it = 10000;
    std::size_t step  = 100;
    auto*       trace = app.add_subcommand("trace", "Record error and residual every --step iterations");
    trace->add_option("--system", trace_opts.system, "System file (default: generated)")
        ->check(CLI::ExistingFile);
    add_solver_flags(trace, trace_opts);
    add_generator_flags(trace, trace_opts.gen, "gen-");
    trace->add_option("--step", step, "Iterations between records")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
        if (generate->parsed())
            return cmd_generate(gen);
        if (solve->parsed())
            return cmd_solve(solve_opts);
        if (bench->parsed())
            return cmd_bench(bench_opts, seeds, runs, strict);
        if (trace->parsed())
            return cmd_trace(trace_opts, step);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e);
    }
    catch (const ApiFailure& e)
    {
        std::cerr << "kz: error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return exit_runtime_error;
}
