#include "dfr/matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dfr/kernels.hpp"

namespace dfr {

void Matrix::append_col(std::span<const double> values) {
    if (cols_ == 0 && data_.empty()) rows_ = values.size();
    if (values.size() != rows_) throw std::domain_error("append_col: row count mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++cols_;
}

void multiply(const Matrix& X, std::span<const double> beta, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const auto& k = kernels::table();
    for (std::size_t j = 0; j < X.cols(); ++j) {
        if (beta[j] != 0.0) k.axpy(beta[j], X.col(j).data(), out.data(), X.rows());
    }
}

void multiply_cols(const Matrix& X, std::span<const std::size_t> cols,
                   std::span<const double> beta_local, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const auto& k = kernels::table();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (beta_local[c] != 0.0) k.axpy(beta_local[c], X.col(cols[c]).data(), out.data(), X.rows());
    }
}

void multiply_transpose(const Matrix& X, std::span<const double> r, std::span<double> out) {
    const auto& k = kernels::table();
    for (std::size_t j = 0; j < X.cols(); ++j) out[j] = k.dot(X.col(j).data(), r.data(), X.rows());
}

void multiply_transpose_cols(const Matrix& X, std::span<const std::size_t> cols,
                             std::span<const double> r, std::span<double> out) {
    const auto& k = kernels::table();
    for (std::size_t c = 0; c < cols.size(); ++c)
        out[c] = k.dot(X.col(cols[c]).data(), r.data(), X.rows());
}

GroupPartition GroupPartition::from_labels(std::span<const std::size_t> labels) {
    GroupPartition gp;
    gp.group_of_.assign(labels.begin(), labels.end());
    std::size_t m = 0;
    for (auto g : labels) m = std::max(m, g + 1);
    gp.members_.resize(m);
    for (std::size_t i = 0; i < labels.size(); ++i) gp.members_[labels[i]].push_back(i);
    for (std::size_t g = 0; g < m; ++g) {
        if (gp.members_[g].empty())
            throw std::domain_error("group partition: group " + std::to_string(g) + " is empty");
    }
    return gp;
}

GroupPartition GroupPartition::contiguous(std::span<const std::size_t> sizes) {
    std::vector<std::size_t> labels;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        if (sizes[g] == 0) throw std::domain_error("group partition: zero-size group");
        labels.insert(labels.end(), sizes[g], g);
    }
    return from_labels(labels);
}

void GroupPartition::check_covers(std::size_t p) const {
    if (group_of_.size() != p)
        throw std::domain_error("group partition covers " + std::to_string(group_of_.size()) +
                                " variables, expected " + std::to_string(p));
}

} // namespace dfr
