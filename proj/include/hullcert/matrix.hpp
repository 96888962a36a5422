#ifndef HULLCERT_MATRIX_HPP
#define HULLCERT_MATRIX_HPP

#include "error.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hullcert {

/**
 * Dense row-major matrix of finite doubles. Rows are samples, columns are
 * dimensions. Immutable once constructed; shared freely between readers.
 */
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows_ == 0 || cols_ == 0) {
            throw Error(ErrorKind::EmptyInput, "matrix must have at least one row and one column");
        }
        if (data_.size() != rows_ * cols_) {
            throw Error(ErrorKind::DimensionMismatch,
                        "matrix data length " + std::to_string(data_.size()) + " != " +
                            std::to_string(rows_) + " x " + std::to_string(cols_));
        }
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if (!std::isfinite(data_[i])) {
                throw Error(ErrorKind::NonFiniteValue, "non-finite value at row " +
                                                           std::to_string(i / cols_) + ", column " +
                                                           std::to_string(i % cols_));
            }
        }
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty() || rows.front().empty()) {
            throw Error(ErrorKind::EmptyInput, "matrix must have at least one row and one column");
        }
        const std::size_t cols = rows.front().size();
        std::vector<double> data;
        data.reserve(rows.size() * cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) {
                throw Error(ErrorKind::DimensionMismatch, "ragged row " + std::to_string(r));
            }
            data.insert(data.end(), rows[r].begin(), rows[r].end());
        }
        return Matrix(rows.size(), cols, std::move(data));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }

    /// Copies the given rows, in order, into a new matrix.
    Matrix select_rows(std::span<const std::size_t> indices) const {
        std::vector<double> out;
        out.reserve(indices.size() * cols_);
        for (auto i : indices) {
            auto r = row(i);
            out.insert(out.end(), r.begin(), r.end());
        }
        return Matrix(indices.size(), cols_, std::move(out));
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Per-sample real-valued metric results.
using ScoreVector = std::vector<double>;

/// Per-sample integer labels: class ids, or 0/1 outcomes.
using LabelVector = std::vector<std::int32_t>;

template <typename T>
inline double squared_distance(std::span<const T> a, std::span<const T> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum += diff * diff;
    }
    return sum;
}

template <typename T>
inline double euclidean_distance(std::span<const T> a, std::span<const T> b) {
    return std::sqrt(squared_distance(a, b));
}

} // namespace hullcert

#endif
