#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dfr/model.hpp"

namespace dfr {

struct FitResult {
    std::vector<double> beta;  // length p, zero outside the working set
    double intercept = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double objective = 0.0;
    double step = 0.0;  // final step size after backtracking
    std::vector<double> objective_trace;  // filled when FitConfig::record_objective
    // Work units: sum over proximal steps of n * (columns touched), a
    // hardware-independent cost measure.
    double work = 0.0;
};

/// Minimizes f(beta) + lambda * penalty(beta) over vectors supported on
/// working_set using accelerated proximal gradient with backtracking and a
/// monotone safeguard. Stops when the proximal step satisfies ||z - y|| < tol
/// and a momentum-free step from the incumbent agrees. Reaching max_iter
/// yields converged = false.
FitResult fit_at(const GroupedDesign& design, double lambda, const PenaltySpec& spec, Family family,
                 std::span<const std::size_t> working_set,
                 std::optional<std::span<const double>> warm, const FitConfig& config);

/// Power-iteration estimate of the gradient Lipschitz constant of the loss
/// restricted to cols (largest eigenvalue of X_W^T X_W / n, times 1/4 for
/// the logistic loss).
double loss_lipschitz(const GroupedDesign& design, std::span<const std::size_t> cols,
                      Family family);

/// All indices 0..p-1.
std::vector<std::size_t> full_set(std::size_t p);

/// Penalized objective f(beta) + lambda * penalty(beta) on the full design.
double penalized_objective(const GroupedDesign& design, std::span<const double> beta,
                           double lambda, const PenaltySpec& spec, Family family);

} // namespace dfr
