#pragma once

#include <cstddef>
#include <vector>

#include "dfr/matrix.hpp"

namespace dfr {

/// Weighted sparse-group penalty
///   alpha * sum_i v_i |b_i| + (1 - alpha) * sum_g w_g sqrt(p_g) ||b_g||_2.
/// Plain SGL has v == 1 and w == 1 and adaptive == false.
struct PenaltySpec {
    double alpha = 0.95;
    std::vector<double> v;  // per variable
    std::vector<double> w;  // per group
    bool adaptive = false;

    static PenaltySpec sgl(double alpha, std::size_t p, std::size_t m);
    static PenaltySpec asgl(double alpha, std::vector<double> v, std::vector<double> w);

    /// Throws std::domain_error on alpha outside [0,1], non-positive or
    /// non-finite weights, or size mismatch with the partition.
    void validate(const GroupPartition& groups) const;
};

} // namespace dfr
