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

#ifndef KZ_LINALG_HPP
#define KZ_LINALG_HPP

//
// Dense row-major storage and the handful of kernels the row-action solvers
// need. All reductions accumulate sequentially in index-ascending order so
// results are reproducible bit for bit.
//

#include <cstddef>
#include <span>
#include <vector>

namespace kz {

using DenseVector = std::vector<double>;

// Non-owning view of a contiguous block of rows of a row-major matrix.
class MatrixView
{
public:
    MatrixView(const double* data, std::size_t rows, std::size_t cols)
        : data_(data), rows_(rows), cols_(cols)
    {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_ + i * cols_, cols_};
    }

    double operator()(std::size_t i, std::size_t j) const noexcept
    {
        return data_[i * cols_ + j];
    }

    // rows [lo, hi] inclusive
    MatrixView row_block(std::size_t lo, std::size_t hi) const;

private:
    const double* data_;
    std::size_t   rows_;
    std::size_t   cols_;
};

class DenseMatrix
{
public:
    // m >= 1, n >= 1, data.size() == m*n
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    DenseMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept
    {
        return {data_.data() + i * cols_, cols_};
    }

    double  operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

    MatrixView view() const noexcept { return {data_.data(), rows_, cols_}; }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t         rows_;
    std::size_t         cols_;
    std::vector<double> data_;
};

struct RowNormCache
{
    std::vector<double> sq_norms;
    double              frobenius_sq = 0.0;
};

double dot(std::span<const double> u, std::span<const double> v);

// x <- x + scale * row
void axpy_row(std::span<double> x, double scale, std::span<const double> row);

// Throws DegenerateRowError naming the first all-zero row.
RowNormCache row_norm_cache(const MatrixView& a);

double norm2(std::span<const double> v);

// ||u - v||^2
double distance_sq(std::span<const double> u, std::span<const double> v);

// y = A x
DenseVector multiply(const MatrixView& a, std::span<const double> x);

// y = A^T x
DenseVector multiply_transpose(const MatrixView& a, std::span<const double> x);

// ||A x - b||
double residual_norm(const MatrixView& a, std::span<const double> x, std::span<const double> b);

} // namespace kz

#endif // KZ_LINALG_HPP
