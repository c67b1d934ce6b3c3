#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dfr/matrix.hpp"
#include "dfr/penalty.hpp"

namespace dfr {

enum class Family { linear, logistic };

std::string_view family_name(Family f);
Family parse_family(std::string_view s);

/// Design matrix, response, and group structure. After standardize() the
/// columns have unit l2 norm; column_scales / column_means record the
/// transformation and y_center the response mean removed (linear + intercept).
struct GroupedDesign {
    Matrix X;
    std::vector<double> y;
    GroupPartition groups;
    std::vector<double> column_scales;
    std::vector<double> column_means;
    double y_center = 0.0;
    bool standardized = false;

    std::size_t n() const noexcept { return X.rows(); }
    std::size_t p() const noexcept { return X.cols(); }
    std::size_t m() const noexcept { return groups.num_groups(); }

    /// Throws std::domain_error on inconsistent dimensions or partition.
    void validate() const;
};

/// Solver settings; defaults follow the synthetic-data configuration.
struct FitConfig {
    std::size_t max_iter = 5000;
    double tol = 1e-5;
    double backtracking_factor = 0.7;
    std::size_t max_backtrack = 100;
    bool intercept = true;
    bool warm_start = true;
    bool record_objective = false;
    double lipschitz = 0.0;  // known Lipschitz constant for the working set; 0 estimates it

    static FitConfig synthetic() { return {}; }
    static FitConfig real_data() {
        FitConfig c;
        c.max_iter = 10000;
        return c;
    }
};

struct LossGradient {
    double value = 0.0;
    std::vector<double> grad;
};

/// Linear: f = ||y - X b||^2 / (2n). Logistic: f = mean(log(1 + e^eta) - y eta).
LossGradient loss_and_gradient(const GroupedDesign& design, std::span<const double> beta,
                               Family family);

/// Loss from a precomputed linear predictor eta = X beta.
double loss_from_predictor(std::span<const double> y, std::span<const double> eta, Family family);

/// Writes the derivative of the loss with respect to eta (scaled by 1/n):
///   linear: (eta - y)/n, logistic: (sigmoid(eta) - y)/n.
void predictor_residual(std::span<const double> y, std::span<const double> eta, Family family,
                        std::span<double> out);

/// Full gradient X^T residual at a given linear predictor.
std::vector<double> gradient_at_predictor(const GroupedDesign& design,
                                          std::span<const double> eta, Family family);

/// Proximal operator of step * lambda * penalty: elementwise soft threshold at
/// step*lambda*alpha*v_i, then group shrinkage at step*lambda*(1-alpha)*w_g*sqrt(p_g).
std::vector<double> sgl_prox(std::span<const double> z, double step, double lambda,
                             const GroupPartition& groups, const PenaltySpec& spec);

/// Scales every column to unit l2 norm. With intercept and the linear family,
/// y and the columns are centered first. Throws std::domain_error naming any
/// zero column.
GroupedDesign standardize(GroupedDesign design, Family family, bool intercept);

/// Numerically stable log(1 + exp(x)) and logistic sigmoid.
double softplus(double x) noexcept;
double sigmoid(double x) noexcept;

} // namespace dfr
