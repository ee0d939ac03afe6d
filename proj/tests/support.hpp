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

#ifndef KZ_TESTS_SUPPORT_HPP
#define KZ_TESTS_SUPPORT_HPP

// Helpers shared by the unit tests and the acceptance binary.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <utility>
#include <vector>

#include "kz/harness.hpp"
#include "kz/sysgen.hpp"

namespace kz::test {

inline LinearSystem
generated(std::size_t m, std::size_t n, std::uint64_t seed = 7)
{
    GeneratorConfig cfg;
    cfg.m_max = m;
    cfg.n_max = n;
    cfg.seed  = seed;
    return generate_mother(cfg);
}

inline LinearSystem
from_rows(std::size_t m, std::size_t n, std::vector<double> a, std::vector<double> b,
          std::optional<std::vector<double>> x_star = std::nullopt)
{
    return LinearSystem{DenseMatrix(m, n, std::move(a)), std::move(b), std::move(x_star),
                        std::nullopt, true};
}

inline SolverConfig
config(Variant v, std::size_t q = 1, std::size_t bs = 1, Backend be = Backend::sequential)
{
    SolverConfig c;
    c.variant    = v;
    c.q          = q;
    c.block_size = bs;
    c.backend    = be;
    return c;
}

inline RunControl
seeded(std::uint64_t seed)
{
    RunControl c;
    c.seed = seed;
    return c;
}

inline bool
bitwise_equal(const std::vector<double>& u, const std::vector<double>& v)
{
    return u.size() == v.size() &&
           (u.empty() || std::memcmp(u.data(), v.data(), u.size() * sizeof(double)) == 0);
}

inline double
max_abs_diff(const std::vector<double>& u, const std::vector<double>& v)
{
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        d = std::max(d, std::abs(u[i] - v[i]));
    return d;
}

// mean iteration count over seeds base..base+n-1
inline double
mean_iterations(const Workload& w, std::size_t n_seeds, std::uint64_t base = 0)
{
    const IterationMeasurement m = measure_iterations(w, n_seeds, base);
    double                     s = 0.0;
    for (const auto& r : m.runs)
        s += static_cast<double>(r.iterations);
    return s / static_cast<double>(m.runs.size());
}

// Symmetric eigenvalues by cyclic Jacobi rotations (dense, small n only).
inline std::vector<double>
jacobi_eigenvalues(std::vector<double> s, std::size_t n)
{
    auto at = [&](std::size_t i, std::size_t j) -> double& { return s[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep)
    {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                off += at(i, j) * at(i, j);
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                if (at(p, q) == 0.0)
                    continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t     = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c  = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k)
                {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p)         = c * akp - sn * akq;
                    at(k, q)         = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k)
                {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k)         = c * apk - sn * aqk;
                    at(q, k)         = sn * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = at(i, i);
    return ev;
}

// A^T A, formed densely (oracle use only)
inline std::vector<double>
gram(const DenseMatrix& a)
{
    const std::size_t   n = a.cols();
    std::vector<double> g(n * n, 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g[i * n + j] += a(r, i) * a(r, j);
    return g;
}

} // namespace kz::test

#endif // KZ_TESTS_SUPPORT_HPP
