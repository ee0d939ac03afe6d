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

// Exercises the shared library through its public header only.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "kaczmarz/kaczmarz.h"

namespace {

struct SystemPtr
{
    kz_system* p = nullptr;
    ~SystemPtr() { kz_system_free(p); }
};

kz_generator_config
small_gen(size_t rows, size_t cols)
{
    kz_generator_config g;
    kz_generator_config_default(&g);
    g.mother_rows = rows;
    g.mother_cols = cols;
    g.seed        = 7;
    return g;
}

} // namespace

TEST(CApi, VersionAndStatusStrings)
{
    EXPECT_STREQ(kz_version(), "1.0.0");
    EXPECT_STREQ(kz_status_string(KZ_OK), "ok");
    EXPECT_NE(std::string(kz_status_string(KZ_ERR_PARSE)), "");
}

TEST(CApi, NamesRoundTrip)
{
    for (int v = KZ_VARIANT_CK; v <= KZ_VARIANT_CGLS; ++v)
    {
        kz_variant back;
        ASSERT_EQ(kz_parse_variant(kz_variant_name(static_cast<kz_variant>(v)), &back), KZ_OK);
        EXPECT_EQ(back, v);
    }
    kz_backend b;
    ASSERT_EQ(kz_parse_backend("dist", &b), KZ_OK);
    EXPECT_EQ(b, KZ_BACKEND_DIST);
    kz_variant v = KZ_VARIANT_RK;
    EXPECT_EQ(kz_parse_variant("nope", &v), KZ_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(v, KZ_VARIANT_RK);
    EXPECT_NE(std::string(kz_last_error_message()), "");
}

TEST(CApi, NullArgumentsAreRejected)
{
    kz_system* out = nullptr;
    EXPECT_EQ(kz_system_generate(nullptr, &out), KZ_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(out, nullptr);
    kz_system_free(nullptr);
    kz_bench_free(nullptr);
    kz_trace_free(nullptr);
}

TEST(CApi, FromArraysAndSolve)
{
    const double a[]  = {1, 0, 0, 2};
    const double b[]  = {1, 4};
    const double xs[] = {1, 2};
    SystemPtr    sys;
    ASSERT_EQ(kz_system_from_arrays(2, 2, a, b, xs, &sys.p), KZ_OK);
    EXPECT_EQ(kz_system_rows(sys.p), 2u);
    EXPECT_TRUE(kz_system_has_reference(sys.p));

    kz_solver_config cfg;
    kz_solver_config_default(&cfg);
    cfg.variant = KZ_VARIANT_CK;
    kz_run_report rep;
    double        x[2];
    ASSERT_EQ(kz_solve(sys.p, &cfg, &rep, x, 2), KZ_OK) << kz_last_error_message();
    EXPECT_EQ(rep.iterations, 2u);
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(x[0], 1.0);
    EXPECT_EQ(x[1], 2.0);

    EXPECT_EQ(kz_solve(sys.p, &cfg, &rep, x, 3), KZ_ERR_DIMENSION);
}

TEST(CApi, ZeroRowIsDegenerate)
{
    const double a[] = {1, 0, 0, 0};
    const double b[] = {1, 0};
    SystemPtr    sys;
    ASSERT_EQ(kz_system_from_arrays(2, 2, a, b, nullptr, &sys.p), KZ_OK);
    kz_solver_config cfg;
    kz_solver_config_default(&cfg);
    cfg.max_iterations = 5;
    kz_run_report rep;
    EXPECT_EQ(kz_solve(sys.p, &cfg, &rep, nullptr, 0), KZ_ERR_DEGENERATE_ROW);
    EXPECT_NE(std::string(kz_last_error_message()).find("row 1"), std::string::npos);
}

TEST(CApi, GenerateCropAndSaveLoad)
{
    auto      g = small_gen(120, 12);
    SystemPtr mother, cropped, loaded;
    ASSERT_EQ(kz_system_generate(&g, &mother.p), KZ_OK);
    ASSERT_EQ(kz_system_crop(mother.p, 60, 6, &g, &cropped.p), KZ_OK);
    EXPECT_EQ(kz_system_rows(cropped.p), 60u);
    EXPECT_EQ(kz_system_cols(cropped.p), 6u);

    SystemPtr bad;
    EXPECT_EQ(kz_system_crop(mother.p, 5, 6, &g, &bad.p), KZ_ERR_DIMENSION);
    EXPECT_EQ(bad.p, nullptr);

    const auto path = (std::filesystem::temp_directory_path() / "kz_capi_sys.bin").string();
    ASSERT_EQ(kz_system_save(cropped.p, path.c_str()), KZ_OK);
    ASSERT_EQ(kz_system_load(path.c_str(), &loaded.p), KZ_OK);
    std::vector<double> r1(6), r2(6);
    ASSERT_EQ(kz_system_copy_reference(cropped.p, r1.data(), 6), KZ_OK);
    ASSERT_EQ(kz_system_copy_reference(loaded.p, r2.data(), 6), KZ_OK);
    EXPECT_EQ(r1, r2);
    std::filesystem::remove(path);

    SystemPtr missing;
    EXPECT_EQ(kz_system_load("/nonexistent/kz.bin", &missing.p), KZ_ERR_IO);
}

TEST(CApi, GeneratedCropViaConfig)
{
    auto g = small_gen(120, 12);
    g.rows = 50;
    g.cols = 5;
    SystemPtr sys;
    ASSERT_EQ(kz_system_generate(&g, &sys.p), KZ_OK);
    EXPECT_EQ(kz_system_rows(sys.p), 50u);
    EXPECT_EQ(kz_system_cols(sys.p), 5u);
}

TEST(CApi, TruncatedFileIsParseError)
{
    const auto path = (std::filesystem::temp_directory_path() / "kz_capi_trunc.bin").string();
    std::FILE* f    = std::fopen(path.c_str(), "wb");
    ASSERT_NE(f, nullptr);
    std::fputs("KZSYS1\x02", f);
    std::fclose(f);
    SystemPtr sys;
    EXPECT_EQ(kz_system_load(path.c_str(), &sys.p), KZ_ERR_PARSE);
    std::filesystem::remove(path);
}

TEST(CApi, InconsistentSystemAndSpectral)
{
    auto      g = small_gen(300, 10);
    SystemPtr sys, noisy;
    ASSERT_EQ(kz_system_generate(&g, &sys.p), KZ_OK);
    ASSERT_EQ(kz_system_make_inconsistent(sys.p, 3, 1.0, &noisy.p), KZ_OK);
    EXPECT_FALSE(kz_system_is_consistent(noisy.p));
    EXPECT_TRUE(kz_system_has_reference(noisy.p));

    kz_spectral_stats st;
    ASSERT_EQ(kz_system_spectral_stats(sys.p, &st), KZ_OK);
    EXPECT_GT(st.sigma_max, st.sigma_min);
    double alpha = 0;
    ASSERT_EQ(kz_optimal_alpha(0.5, 0.5, 2, &alpha), KZ_OK);
    EXPECT_NEAR(alpha, 4.0 / 3.0, 1e-12);
    EXPECT_EQ(kz_optimal_alpha(0.5, 0.5, 0, &alpha), KZ_ERR_INVALID_ARGUMENT);
}

TEST(CApi, SolveAllBackends)
{
    auto      g = small_gen(200, 10);
    SystemPtr sys;
    ASSERT_EQ(kz_system_generate(&g, &sys.p), KZ_OK);
    for (kz_backend be : {KZ_BACKEND_SEQ, KZ_BACKEND_THREADS, KZ_BACKEND_DIST})
    {
        kz_solver_config cfg;
        kz_solver_config_default(&cfg);
        cfg.variant = KZ_VARIANT_RKA;
        cfg.backend = be;
        cfg.q       = 3;
        cfg.seed    = 2;
        kz_run_report rep;
        ASSERT_EQ(kz_solve(sys.p, &cfg, &rep, nullptr, 0), KZ_OK) << kz_last_error_message();
        EXPECT_TRUE(rep.converged);
        EXPECT_EQ(rep.backend, be);
        EXPECT_EQ(rep.seed, 2u);
        EXPECT_LT(rep.final_error_sq, 1e-8);
    }
}

TEST(CApi, InvalidConfigNamesField)
{
    auto      g = small_gen(50, 5);
    SystemPtr sys;
    ASSERT_EQ(kz_system_generate(&g, &sys.p), KZ_OK);
    kz_solver_config cfg;
    kz_solver_config_default(&cfg);
    cfg.variant    = KZ_VARIANT_RKAB;
    cfg.block_size = 0;
    kz_run_report rep;
    EXPECT_EQ(kz_solve(sys.p, &cfg, &rep, nullptr, 0), KZ_ERR_INVALID_ARGUMENT);
    EXPECT_NE(std::string(kz_last_error_message()).find("block_size"), std::string::npos);
}

TEST(CApi, LastErrorIsPerThread)
{
    kz_variant v;
    EXPECT_EQ(kz_parse_variant("bad-name", &v), KZ_ERR_INVALID_ARGUMENT);
    std::string other;
    std::thread([&] { other = kz_last_error_message(); }).join();
    EXPECT_EQ(other, "");
    EXPECT_NE(std::string(kz_last_error_message()), "");
}

TEST(CApi, BenchRows)
{
    auto      g = small_gen(200, 10);
    SystemPtr sys;
    ASSERT_EQ(kz_system_generate(&g, &sys.p), KZ_OK);
    kz_solver_config cfg;
    kz_solver_config_default(&cfg);
    cfg.variant    = KZ_VARIANT_RKAB;
    cfg.q          = 2;
    cfg.block_size = 4;
    kz_bench* bench = nullptr;
    ASSERT_EQ(kz_bench_run(sys.p, &cfg, 5, 3, &bench), KZ_OK);
    ASSERT_EQ(kz_bench_row_count(bench), 6u);
    EXPECT_TRUE(kz_bench_all_converged(bench));
    for (size_t i = 0; i < 6; ++i)
    {
        kz_run_report rep;
        int           summary = -1;
        ASSERT_EQ(kz_bench_get_row(bench, i, &rep, &summary), KZ_OK);
        EXPECT_EQ(summary, i == 5 ? 1 : 0);
        if (i == 5)
            EXPECT_EQ(rep.iterations, kz_bench_mean_iterations(bench));
        else
            EXPECT_EQ(rep.seed, i);
    }
    kz_run_report rep;
    EXPECT_EQ(kz_bench_get_row(bench, 6, &rep, nullptr), KZ_ERR_RANGE);
    kz_bench_free(bench);
}

TEST(CApi, TraceAndCsvRows)
{
    auto      g = small_gen(200, 10);
    SystemPtr sys;
    ASSERT_EQ(kz_system_generate(&g, &sys.p), KZ_OK);
    kz_solver_config cfg;
    kz_solver_config_default(&cfg);
    kz_trace* tr = nullptr;
    ASSERT_EQ(kz_trace_run(sys.p, &cfg, 1000, 100, &tr), KZ_OK);
    ASSERT_EQ(kz_trace_size(tr), 11u);
    kz_trace_record rec;
    ASSERT_EQ(kz_trace_get(tr, 0, &rec), KZ_OK);
    EXPECT_EQ(rec.iteration, 0u);
    double p = 0;
    ASSERT_EQ(kz_trace_plateau(tr, 10, &p), KZ_OK);
    EXPECT_GT(p, 0.0);

    char      buf[256];
    const int n = kz_format_trace_row(&rec, buf, sizeof buf);
    ASSERT_GT(n, 0);
    EXPECT_EQ(std::string(buf).rfind("0,", 0), 0u);
    char tiny[4];
    EXPECT_EQ(kz_format_trace_row(&rec, tiny, sizeof tiny), n);
    EXPECT_EQ(std::string(tiny).size(), 3u);
    kz_trace_free(tr);

    EXPECT_STREQ(kz_trace_csv_header(), "iteration,error_norm,residual_norm");
    kz_run_report rep{};
    rep.variant = KZ_VARIANT_RK;
    rep.q       = 1;
    ASSERT_GT(kz_format_report_row(&rep, 0, buf, sizeof buf), 0);
    EXPECT_EQ(std::string(buf).rfind("run,rk,seq,full_access,1,", 0), 0u);
    EXPECT_EQ(kz_format_report_row(nullptr, 0, buf, sizeof buf), -1);
}
