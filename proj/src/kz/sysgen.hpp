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

#ifndef KZ_SYSGEN_HPP
#define KZ_SYSGEN_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "kz/linalg.hpp"

namespace kz {

struct GeneratorConfig
{
    std::size_t   m_max     = 4000;
    std::size_t   n_max     = 500;
    double        mu_lo     = -5.0;
    double        mu_hi     = 5.0;
    double        sigma_lo  = 1.0;
    double        sigma_hi  = 20.0;
    double        noise_std = 1.0;
    std::uint64_t seed      = 0;

    // Throws Error(invalid_argument) naming the offending field.
    void validate() const;
};

struct LinearSystem
{
    DenseMatrix                a;
    DenseVector                b;
    std::optional<DenseVector> x_star; // exact solution of a consistent system
    std::optional<DenseVector> x_ls;   // least-squares solution
    bool                       consistent = true;

    std::size_t rows() const noexcept { return a.rows(); }
    std::size_t cols() const noexcept { return a.cols(); }

    // x_ls when present, else x_star, else nullptr
    const DenseVector* reference() const noexcept;

    bool operator==(const LinearSystem&) const = default;
};

///
/// The largest ("mother") system: row i has entries drawn i.i.d. from
/// N(mu_i, sigma_i) with (mu_i, sigma_i) uniform over the configured ranges.
/// The solution uses one (mu, sigma) pair drawn for the whole vector from a
/// stream keyed on (seed, m, n); b = A x*.
///
LinearSystem generate_mother(const GeneratorConfig& cfg);

///
/// Top-left m x n block of `sys`. A fresh solution is drawn from the stream
/// keyed on (cfg.seed, m, n) and b recomputed, so cropping to the full size
/// reproduces the mother exactly.
///
LinearSystem crop(const LinearSystem& sys, std::size_t m, std::size_t n, const GeneratorConfig& cfg);

///
/// b <- b + xi with xi_i ~ N(0, noise_std^2); the least-squares solution is
/// computed with CGLS and stored, the exact solution dropped.
///
LinearSystem make_inconsistent(const LinearSystem& sys, std::uint64_t noise_seed,
                               double noise_std = 1.0);

// Deterministic solution vector for an m x n system (see generate_mother).
DenseVector draw_solution(const GeneratorConfig& cfg, std::size_t m, std::size_t n);

//
// Binary file format, all integers and floats little-endian:
//
//   offset 0   "KZSYS" magic, then one version byte '1'
//   offset 6   u64 m, u64 n, u32 flags (bit0 consistent, bit1 x_star, bit2 x_ls)
//   offset 26  A (m*n f64, row-major), b (m f64), [x_star (n f64)], [x_ls (n f64)]
//
// Any trailing bytes are rejected.
//
inline constexpr std::uint8_t system_format_version = '1';

std::vector<std::uint8_t> encode_system(const LinearSystem& sys);

// Throws ParseError (with byte offset) or Error(unsupported_version).
LinearSystem decode_system(std::span<const std::uint8_t> bytes);

void         save_system(const LinearSystem& sys, const std::filesystem::path& path);
LinearSystem load_system(const std::filesystem::path& path);

} // namespace kz

#endif // KZ_SYSGEN_HPP
