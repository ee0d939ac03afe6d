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

#include "kz/linalg.hpp"

#include <cmath>
#include <string>

#include "kz/error.hpp"

namespace kz {

namespace {

void
check_same_length(std::size_t a, std::size_t b, const char* op)
{
    if (a != b)
        throw_dimension(std::string(op) + ": length mismatch (" + std::to_string(a) +
                        " vs " + std::to_string(b) + ")");
}

} // namespace

MatrixView
MatrixView::row_block(std::size_t lo, std::size_t hi) const
{
    if (lo > hi || hi >= rows_)
        throw Error(ErrorCode::range, "row block [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] outside matrix with " +
                                          std::to_string(rows_) + " rows");
    return {data_ + lo * cols_, hi - lo + 1, cols_};
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data))
{
    if (rows == 0 || cols == 0)
        throw_dimension("matrix dimensions must be positive");
    if (data_.size() != rows * cols)
        throw_dimension("matrix data has " + std::to_string(data_.size()) +
                        " entries, expected " + std::to_string(rows * cols));
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : DenseMatrix(rows, cols, std::vector<double>(rows * cols, 0.0))
{}

double
dot(std::span<const double> u, std::span<const double> v)
{
    check_same_length(u.size(), v.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u[i] * v[i];
    return s;
}

void
axpy_row(std::span<double> x, double scale, std::span<const double> row)
{
    check_same_length(x.size(), row.size(), "axpy_row");
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += scale * row[i];
}

RowNormCache
row_norm_cache(const MatrixView& a)
{
    RowNormCache cache;
    cache.sq_norms.resize(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        const auto r  = a.row(i);
        const double s = dot(r, r);
        if (!(s > 0.0))
            throw DegenerateRowError(i);
        cache.sq_norms[i] = s;
        cache.frobenius_sq += s;
    }
    return cache;
}

double
norm2(std::span<const double> v)
{
    return std::sqrt(dot(v, v));
}

double
distance_sq(std::span<const double> u, std::span<const double> v)
{
    check_same_length(u.size(), v.size(), "distance_sq");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        const double d = u[i] - v[i];
        s += d * d;
    }
    return s;
}

DenseVector
multiply(const MatrixView& a, std::span<const double> x)
{
    check_same_length(a.cols(), x.size(), "multiply");
    DenseVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = dot(a.row(i), x);
    return y;
}

DenseVector
multiply_transpose(const MatrixView& a, std::span<const double> x)
{
    check_same_length(a.rows(), x.size(), "multiply_transpose");
    DenseVector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        axpy_row(y, x[i], a.row(i));
    return y;
}

double
residual_norm(const MatrixView& a, std::span<const double> x, std::span<const double> b)
{
    check_same_length(a.rows(), b.size(), "residual_norm");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        const double r = dot(a.row(i), x) - b[i];
        s += r * r;
    }
    return std::sqrt(s);
}

} // namespace kz
