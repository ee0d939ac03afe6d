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

#include "kz/sysgen.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "kz/cgls.hpp"
#include "kz/error.hpp"
#include "kz/sampling.hpp"

namespace kz {

namespace {

// stream tags keep the matrix, solution and noise streams apart for one seed
constexpr std::uint64_t matrix_tag   = 0x6d61747269780000ULL;
constexpr std::uint64_t solution_tag = 0x736f6c7574696f6eULL;
constexpr std::uint64_t noise_tag    = 0x6e6f697365000000ULL;

constexpr std::uint32_t flag_consistent = 1u << 0;
constexpr std::uint32_t flag_x_star     = 1u << 1;
constexpr std::uint32_t flag_x_ls       = 1u << 2;

constexpr std::size_t header_size = 6 + 8 + 8 + 4;

} // namespace

void
GeneratorConfig::validate() const
{
    if (m_max == 0 || n_max == 0)
        throw_invalid("rows/cols must be positive");
    if (m_max < n_max)
        throw_invalid("rows must be >= cols (overdetermined systems only)");
    if (!(mu_lo <= mu_hi) || !std::isfinite(mu_lo) || !std::isfinite(mu_hi))
        throw_invalid("mu range must be finite with mu_lo <= mu_hi");
    if (!(sigma_lo > 0.0) || !(sigma_lo <= sigma_hi) || !std::isfinite(sigma_hi))
        throw_invalid("sigma range must be strictly positive with sigma_lo <= sigma_hi");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
        throw_invalid("noise_std must be finite and non-negative");
}

const DenseVector*
LinearSystem::reference() const noexcept
{
    if (x_ls)
        return &*x_ls;
    if (x_star)
        return &*x_star;
    return nullptr;
}

DenseVector
draw_solution(const GeneratorConfig& cfg, std::size_t m, std::size_t n)
{
    Prng rng(mix64(cfg.seed ^ solution_tag) ^ mix64(mix64(m) + n));
    const double mu    = rng.next_uniform(cfg.mu_lo, cfg.mu_hi);
    const double sigma = rng.next_uniform(cfg.sigma_lo, cfg.sigma_hi);
    NormalSource normal(rng);
    DenseVector  x(n);
    for (auto& e : x)
        e = normal.next(mu, sigma);
    return x;
}

LinearSystem
generate_mother(const GeneratorConfig& cfg)
{
    cfg.validate();
    Prng         rng(mix64(cfg.seed ^ matrix_tag));
    NormalSource normal(rng);

    DenseMatrix a(cfg.m_max, cfg.n_max);
    for (std::size_t i = 0; i < cfg.m_max; ++i)
    {
        const double mu    = rng.next_uniform(cfg.mu_lo, cfg.mu_hi);
        const double sigma = rng.next_uniform(cfg.sigma_lo, cfg.sigma_hi);
        for (auto& e : a.row(i))
            e = normal.next(mu, sigma);
    }

    DenseVector x = draw_solution(cfg, cfg.m_max, cfg.n_max);
    DenseVector b = multiply(a.view(), x);
    return LinearSystem{std::move(a), std::move(b), std::move(x), std::nullopt, true};
}

LinearSystem
crop(const LinearSystem& sys, std::size_t m, std::size_t n, const GeneratorConfig& cfg)
{
    if (m < n)
        throw_dimension("crop: requested " + std::to_string(m) + "x" + std::to_string(n) +
                        " is underdetermined");
    if (m == 0 || n == 0 || m > sys.rows() || n > sys.cols())
        throw_dimension("crop: " + std::to_string(m) + "x" + std::to_string(n) +
                        " does not fit in " + std::to_string(sys.rows()) + "x" +
                        std::to_string(sys.cols()));

    DenseMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
    {
        const auto src = sys.a.row(i);
        std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(n), a.row(i).begin());
    }
    DenseVector x = draw_solution(cfg, m, n);
    DenseVector b = multiply(a.view(), x);
    return LinearSystem{std::move(a), std::move(b), std::move(x), std::nullopt, true};
}

LinearSystem
make_inconsistent(const LinearSystem& sys, std::uint64_t noise_seed, double noise_std)
{
    if (!sys.consistent)
        throw_invalid("make_inconsistent: system is already inconsistent");

    Prng         rng(mix64(noise_seed ^ noise_tag));
    NormalSource normal(rng);

    LinearSystem out{sys.a, sys.b, std::nullopt, std::nullopt, false};
    for (auto& e : out.b)
        e += noise_std * normal.next();

    CglsResult ls = cgls_solve(out.a.view(), out.b, 1e-12, 50 * out.cols() + 1000);
    out.x_ls      = std::move(ls.x);
    return out;
}

//
// serialization
//

namespace {

void
put_u64(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    for (int k = 0; k < 8; ++k)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void
put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int k = 0; k < 4; ++k)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void
put_f64s(std::vector<std::uint8_t>& out, std::span<const double> v)
{
    for (double d : v)
        put_u64(out, std::bit_cast<std::uint64_t>(d));
}

class Reader
{
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    void need(std::size_t count, const char* what) const
    {
        if (remaining() < count)
            throw ParseError(pos_, std::string("truncated file while reading ") + what);
    }

    std::uint64_t u64(const char* what)
    {
        need(8, what);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k)
            v |= static_cast<std::uint64_t>(bytes_[pos_ + k]) << (8 * k);
        pos_ += 8;
        return v;
    }

    std::uint32_t u32(const char* what)
    {
        need(4, what);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k)
            v |= static_cast<std::uint32_t>(bytes_[pos_ + k]) << (8 * k);
        pos_ += 4;
        return v;
    }

    std::vector<double> f64s(std::size_t count, const char* what)
    {
        if (count > remaining() / 8)
            throw ParseError(pos_, std::string("truncated file while reading ") + what);
        std::vector<double> v(count);
        for (auto& d : v)
            d = std::bit_cast<double>(u64(what));
        return v;
    }

    std::uint8_t byte() { return bytes_[pos_++]; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t                   pos_ = 0;
};

} // namespace

std::vector<std::uint8_t>
encode_system(const LinearSystem& sys)
{
    std::vector<std::uint8_t> out;
    std::size_t payload = sys.a.data().size() + sys.b.size();
    if (sys.x_star)
        payload += sys.x_star->size();
    if (sys.x_ls)
        payload += sys.x_ls->size();
    out.reserve(header_size + 8 * payload);

    for (char c : {'K', 'Z', 'S', 'Y', 'S'})
        out.push_back(static_cast<std::uint8_t>(c));
    out.push_back(system_format_version);
    put_u64(out, sys.rows());
    put_u64(out, sys.cols());

    std::uint32_t flags = 0;
    if (sys.consistent)
        flags |= flag_consistent;
    if (sys.x_star)
        flags |= flag_x_star;
    if (sys.x_ls)
        flags |= flag_x_ls;
    put_u32(out, flags);

    put_f64s(out, sys.a.data());
    put_f64s(out, sys.b);
    if (sys.x_star)
        put_f64s(out, *sys.x_star);
    if (sys.x_ls)
        put_f64s(out, *sys.x_ls);
    return out;
}

LinearSystem
decode_system(std::span<const std::uint8_t> bytes)
{
    Reader rd(bytes);
    rd.need(6, "magic");
    for (char c : {'K', 'Z', 'S', 'Y', 'S'})
    {
        const std::size_t at = rd.offset();
        if (rd.byte() != static_cast<std::uint8_t>(c))
            throw ParseError(at, "bad magic, not a system file");
    }
    const std::uint8_t version = rd.byte();
    if (version != system_format_version)
        throw Error(ErrorCode::unsupported_version,
                    "unsupported system file version " + std::to_string(version) +
                        " (expected " + std::to_string(system_format_version) + ")");

    const std::size_t   dims_at = rd.offset();
    const std::uint64_t m       = rd.u64("row count");
    const std::uint64_t n       = rd.u64("column count");
    if (m == 0 || n == 0)
        throw ParseError(dims_at, "zero matrix dimension");
    if (n > (bytes.size() / 8) || m > (bytes.size() / 8) / n)
        throw ParseError(dims_at, "dimensions exceed file size");

    const std::size_t   flags_at = rd.offset();
    const std::uint32_t flags    = rd.u32("flags");
    if (flags & ~(flag_consistent | flag_x_star | flag_x_ls))
        throw ParseError(flags_at, "unknown flag bits");

    std::vector<double> a = rd.f64s(m * n, "matrix");
    LinearSystem        sys{DenseMatrix(m, n, std::move(a)), rd.f64s(m, "b"), std::nullopt,
                     std::nullopt, (flags & flag_consistent) != 0};
    if (flags & flag_x_star)
        sys.x_star = rd.f64s(n, "x_star");
    if (flags & flag_x_ls)
        sys.x_ls = rd.f64s(n, "x_ls");
    if (rd.remaining() != 0)
        throw ParseError(rd.offset(), "trailing bytes after system payload");
    return sys;
}

void
save_system(const LinearSystem& sys, const std::filesystem::path& path)
{
    const auto    bytes = encode_system(sys);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::io, "write to " + path.string() + " failed");
}

LinearSystem
load_system(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_system(bytes);
}

} // namespace kz
