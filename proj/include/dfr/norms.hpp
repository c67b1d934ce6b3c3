#pragma once

#include <cstddef>
#include <span>

#include "dfr/matrix.hpp"
#include "dfr/penalty.hpp"

namespace dfr {

/// The epsilon-norm of x: the unique q >= 0 with
///   sum_i (|x_i| - (1 - eps) q)_+^2 = (eps q)^2.
/// eps = 0 gives the max-norm and eps = 1 the Euclidean norm.
/// Sorts |x| and scans the breakpoints, so the cost is O(d log d).
/// Throws std::domain_error for non-finite x or eps outside [0,1].
double epsilon_norm(std::span<const double> x, double eps);

/// sign(a) * max(|a| - b, 0).
inline double soft_threshold(double a, double b) noexcept {
    const double m = (a < 0 ? -a : a) - b;
    if (m <= 0.0) return 0.0;
    return a < 0 ? -m : m;
}

/// Elementwise soft threshold with a common threshold.
void soft_threshold(std::span<const double> a, double b, std::span<double> out);

/// Scaling constant and epsilon-norm parameter of one group, so that the
/// group's penalty term equals scale * (dual epsilon-norm with parameter eps).
struct GroupNormParams {
    double scale;
    double eps;
};

/// tau_g = alpha + (1 - alpha) sqrt(p_g), eps_g = (1 - alpha) sqrt(p_g) / tau_g.
GroupNormParams sgl_group_params(std::size_t group_size, double alpha);

/// Adaptive counterpart (gamma_g, eps'_g). An all-zero beta_g uses the limit
/// value (alpha / p_g) sum_i v_i + (1 - alpha) w_g sqrt(p_g).
GroupNormParams asgl_group_params(std::span<const double> beta_g, std::span<const double> v_g,
                                  double w_g, double alpha);

/// Parameters for group g under spec; for adaptive specs gamma is evaluated at
/// beta_ref (empty span means all zeros).
GroupNormParams group_params(const GroupPartition& groups, const PenaltySpec& spec, std::size_t g,
                             std::span<const double> beta_ref = {});

/// Weighted sparse-group norm of beta.
double sgl_norm(std::span<const double> beta, const GroupPartition& groups,
                const PenaltySpec& spec);

/// max_g scale_g^{-1} ||xi_g||_{eps_g}. For adaptive specs, gamma_g and eps'_g
/// are evaluated at beta_ref (zeros when empty).
double sgl_dual_norm(std::span<const double> xi, const GroupPartition& groups,
                     const PenaltySpec& spec, std::span<const double> beta_ref = {});

} // namespace dfr
