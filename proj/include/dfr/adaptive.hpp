#pragma once

#include <vector>

#include "dfr/model.hpp"

namespace dfr {

/// Exponents of the principal-component weights (b1 for variables, b2 for groups).
struct AdaptiveParams {
    double b1 = 0.1;
    double b2 = 0.1;
};

struct AdaptiveWeights {
    std::vector<double> v;   // per variable
    std::vector<double> w;   // per group
    std::vector<double> q1;  // leading right singular vector of X
    double sigma1 = 0.0;     // leading singular value
    std::size_t iterations = 0;
};

/// Loadings below this magnitude are clamped before exponentiation.
inline constexpr double kLoadingFloor = 1e-10;

/// Leading right singular vector of X by power iteration (on the smaller of
/// X^T X and X X^T), unit norm, sign fixed so the largest-magnitude entry is
/// positive. Throws std::domain_error for a zero matrix.
AdaptiveWeights leading_component(const Matrix& X, double tol = 1e-13,
                                  std::size_t max_iter = 10000);

/// v_i = |q1_i|^{-b1}, w_g = ||q1_g||_2^{-b2}.
AdaptiveWeights adaptive_weights(const GroupedDesign& design, const AdaptiveParams& params);

} // namespace dfr
