#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dfr {

/// Dense column-major matrix. Columns are contiguous, which is the access
/// pattern of every hot loop here (X^T r and sparse X beta).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept {
        return {data_.data() + j * rows_, rows_};
    }

    std::span<const double> data() const noexcept { return data_; }

    /// Appends a column; the span must have rows() entries.
    void append_col(std::span<const double> values);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// out = X beta, skipping zero coefficients.
void multiply(const Matrix& X, std::span<const double> beta, std::span<double> out);

/// out = X[:, cols] beta_local (beta_local indexed like cols), skipping zeros.
void multiply_cols(const Matrix& X, std::span<const std::size_t> cols,
                   std::span<const double> beta_local, std::span<double> out);

/// out[j] = X_j^T r for every column.
void multiply_transpose(const Matrix& X, std::span<const double> r, std::span<double> out);

/// out[k] = X_{cols[k]}^T r.
void multiply_transpose_cols(const Matrix& X, std::span<const std::size_t> cols,
                             std::span<const double> r, std::span<double> out);

/// Disjoint partition of column indices into groups.
class GroupPartition {
public:
    GroupPartition() = default;

    /// Builds the partition from a per-variable group label in [0, m).
    /// Throws std::domain_error if some label in [0, max] is unused.
    static GroupPartition from_labels(std::span<const std::size_t> labels);

    /// Contiguous groups with the given sizes.
    static GroupPartition contiguous(std::span<const std::size_t> sizes);

    std::size_t num_vars() const noexcept { return group_of_.size(); }
    std::size_t num_groups() const noexcept { return members_.size(); }
    std::size_t group_of(std::size_t var) const noexcept { return group_of_[var]; }
    std::size_t size(std::size_t g) const noexcept { return members_[g].size(); }
    std::span<const std::size_t> members(std::size_t g) const noexcept { return members_[g]; }
    std::span<const std::size_t> labels() const noexcept { return group_of_; }

    /// Throws std::domain_error unless the partition covers exactly p variables.
    void check_covers(std::size_t p) const;

private:
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::size_t> group_of_;
};

} // namespace dfr
