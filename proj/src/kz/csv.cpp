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

#include "kz/csv.hpp"

#include <charconv>
#include <cstdint>
#include <vector>

#include "kz/error.hpp"

namespace kz {

namespace {

struct Field
{
    std::string_view text;
    std::size_t      offset;
};

std::vector<Field>
split_fields(std::string_view line, std::size_t expected)
{
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
        line.remove_suffix(1);
    std::vector<Field> out;
    std::size_t        start = 0;
    while (true)
    {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos)
        {
            out.push_back({line.substr(start), start});
            break;
        }
        out.push_back({line.substr(start, comma - start), start});
        start = comma + 1;
    }
    if (out.size() != expected)
        throw ParseError(out.size() < expected ? line.size() : out[expected].offset,
                         "expected " + std::to_string(expected) + " fields, got " +
                             std::to_string(out.size()));
    return out;
}

template <typename T>
T
parse_number(const Field& f, const char* name)
{
    T          v{};
    const auto end    = f.text.data() + f.text.size();
    const auto result = std::from_chars(f.text.data(), end, v);
    if (f.text.empty() || result.ec != std::errc() || result.ptr != end)
        throw ParseError(f.offset, std::string("bad ") + name + " '" + std::string(f.text) + "'");
    return v;
}

bool
parse_flag(const Field& f, const char* name)
{
    if (f.text == "1")
        return true;
    if (f.text == "0")
        return false;
    throw ParseError(f.offset, std::string("bad ") + name + " '" + std::string(f.text) + "'");
}

// the enum parsers throw invalid_argument; rows want a ParseError with offset
template <typename Fn>
auto
parse_name(const Field& f, Fn&& fn)
{
    try
    {
        return fn(f.text);
    }
    catch (const Error& e)
    {
        throw ParseError(f.offset, e.what());
    }
}

} // namespace

std::string_view
to_string(RowKind k) noexcept
{
    return k == RowKind::run ? "run" : "summary";
}

std::string
format_double(double v)
{
    char       buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string
format_report_row(RowKind kind, const RunReport& r)
{
    std::string s;
    s.reserve(160);
    s += to_string(kind);
    s += ',';
    s += to_string(r.variant);
    s += ',';
    s += to_string(r.backend);
    s += ',';
    s += to_string(r.scheme);
    s += ',';
    s += std::to_string(r.q);
    s += ',';
    s += std::to_string(r.block_size);
    s += ',';
    s += to_string(r.alpha_policy);
    s += ',';
    s += format_double(r.alpha);
    s += ',';
    s += std::to_string(r.seed);
    s += ',';
    s += std::to_string(r.iterations);
    s += ',';
    s += r.converged ? '1' : '0';
    s += ',';
    s += format_double(r.wall_time_s);
    s += ',';
    s += format_double(r.final_error_sq);
    s += ',';
    s += format_double(r.final_residual);
    return s;
}

std::string
format_trace_row(const TraceRecord& t)
{
    return std::to_string(t.iteration) + ',' + format_double(t.error_norm) + ',' +
           format_double(t.residual_norm);
}

ReportRow
parse_report_row(std::string_view line)
{
    const auto f = split_fields(line, 14);
    ReportRow  row;
    if (f[0].text == "run")
        row.kind = RowKind::run;
    else if (f[0].text == "summary")
        row.kind = RowKind::summary;
    else
        throw ParseError(f[0].offset, "bad kind '" + std::string(f[0].text) + "'");

    RunReport& r     = row.report;
    r.variant        = parse_name(f[1], parse_variant);
    r.backend        = parse_name(f[2], parse_backend);
    r.scheme         = parse_name(f[3], parse_scheme);
    r.q              = parse_number<std::size_t>(f[4], "q");
    r.block_size     = parse_number<std::size_t>(f[5], "block_size");
    r.alpha_policy   = parse_name(f[6], parse_alpha_policy);
    r.alpha          = parse_number<double>(f[7], "alpha");
    r.seed           = parse_number<std::uint64_t>(f[8], "seed");
    r.iterations     = parse_number<std::size_t>(f[9], "iterations");
    r.converged      = parse_flag(f[10], "converged");
    r.wall_time_s    = parse_number<double>(f[11], "wall_time_s");
    r.final_error_sq = parse_number<double>(f[12], "final_error_sq");
    r.final_residual = parse_number<double>(f[13], "final_residual");
    return row;
}

TraceRecord
parse_trace_row(std::string_view line)
{
    const auto  f = split_fields(line, 3);
    TraceRecord t;
    t.iteration     = parse_number<std::size_t>(f[0], "iteration");
    t.error_norm    = parse_number<double>(f[1], "error_norm");
    t.residual_norm = parse_number<double>(f[2], "residual_norm");
    return t;
}

} // namespace kz
