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

#ifndef KZ_ERROR_HPP
#define KZ_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kz {

// Mirrors the status codes of the C API one-to-one (minus KZ_OK).
enum class ErrorCode {
    dimension = 1,
    degenerate_row,
    range,
    parse,
    unsupported_version,
    io,
    non_convergence,
    invalid_argument,
    protocol,
};

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class DegenerateRowError : public Error
{
public:
    explicit DegenerateRowError(std::size_t row)
        : Error(ErrorCode::degenerate_row,
                "row " + std::to_string(row) + " has zero norm"),
          row_(row)
    {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class ParseError : public Error
{
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(ErrorCode::parse,
                what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset)
    {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Thrown by iterative kernels that ran out of iterations; carries the best
// iterate found so far.
class NonConvergenceError : public Error
{
public:
    NonConvergenceError(const std::string& what, std::vector<double> best)
        : Error(ErrorCode::non_convergence, what), best_(std::move(best))
    {}

    const std::vector<double>& best_iterate() const noexcept { return best_; }

private:
    std::vector<double> best_;
};

[[noreturn]] inline void
throw_dimension(const std::string& what)
{
    throw Error(ErrorCode::dimension, what);
}

[[noreturn]] inline void
throw_invalid(const std::string& what)
{
    throw Error(ErrorCode::invalid_argument, what);
}

} // namespace kz

#endif // KZ_ERROR_HPP
