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

#ifndef KZ_CSV_HPP
#define KZ_CSV_HPP

//
// CSV rows for run reports and trace records. Doubles are written in the
// shortest form that reads back to the same value, so every row round-trips
// exactly. Rows carry no trailing newline.
//

#include <string>
#include <string_view>

#include "kz/solver.hpp"

namespace kz {

inline constexpr std::string_view report_csv_header =
    "kind,variant,backend,scheme,q,block_size,alpha_policy,alpha,seed,iterations,converged,"
    "wall_time_s,final_error_sq,final_residual";

inline constexpr std::string_view trace_csv_header = "iteration,error_norm,residual_norm";

enum class RowKind { run, summary };

std::string_view to_string(RowKind k) noexcept;

struct TraceRecord
{
    std::size_t iteration     = 0;
    double      error_norm    = 0.0; // ||x^(k) - x_ref||
    double      residual_norm = 0.0; // ||A x^(k) - b||

    bool operator==(const TraceRecord&) const = default;
};

// Everything of a RunReport that a CSV row carries (x and the evaluation
// counter are not written).
struct ReportRow
{
    RowKind   kind = RowKind::run;
    RunReport report;
};

std::string format_report_row(RowKind kind, const RunReport& r);
std::string format_trace_row(const TraceRecord& t);

// Throw ParseError with the byte offset of the offending field.
ReportRow   parse_report_row(std::string_view line);
TraceRecord parse_trace_row(std::string_view line);

// shortest round-trip text for a double ("nan", "inf" for non-finite values)
std::string format_double(double v);

} // namespace kz

#endif // KZ_CSV_HPP
