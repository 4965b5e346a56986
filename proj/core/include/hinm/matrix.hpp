#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hinm/errors.hpp"

namespace hinm {

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 0;

    friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(Shape shape);

/// Row-major dense matrix. Rows are output channels, columns input channels.
template <class T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (data_.size() != rows_ * cols_) {
            throw ShapeMismatch("matrix value count does not match " +
                                to_string(Shape{rows_, cols_}));
        }
    }

    /// Builds from nested rows; every row must have the same length.
    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        std::vector<T> values;
        values.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw ShapeMismatch("ragged rows");
            values.insert(values.end(), row.begin(), row.end());
        }
        return Matrix(r, c, std::move(values));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Shape shape() const noexcept { return {rows_, cols_}; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept {
        return data_[r * cols_ + c];
    }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Weights and activations. Stored as binary32 to match the HNMW file format.
using DenseMatrix = Matrix<float>;
using BoolMatrix = Matrix<std::uint8_t>;

/// Throws FormatError if any value is NaN or infinite.
void require_finite(const DenseMatrix& m);

/// Non-negative per-element importance scores.
class SaliencyMatrix {
public:
    SaliencyMatrix() = default;
    /// Throws NegativeScore on a negative or non-finite score.
    explicit SaliencyMatrix(Matrix<double> scores);

    const Matrix<double>& scores() const noexcept { return scores_; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return scores_(r, c); }
    std::size_t rows() const noexcept { return scores_.rows(); }
    std::size_t cols() const noexcept { return scores_.cols(); }
    Shape shape() const noexcept { return scores_.shape(); }
    double total() const noexcept;

    /// Multiplies every score by `factor` (> 0).
    SaliencyMatrix scaled(double factor) const;

private:
    Matrix<double> scores_;
};

/// Returns `W` with rows gathered in `order`: result row p is W row order[p].
DenseMatrix permute_rows(const DenseMatrix& w, std::span<const std::size_t> order);
/// Returns `W` with columns gathered in `order`: result column q is W column order[q].
DenseMatrix permute_columns(const DenseMatrix& w, std::span<const std::size_t> order);

/// max|a-b| / max|b|, or max|a-b| when `reference` is all zero.
double max_relative_error(const DenseMatrix& value, const DenseMatrix& reference);

}  // namespace hinm
