#include "dfr/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dfr/kernels.hpp"
#include "dfr/norms.hpp"

namespace dfr {

std::string_view family_name(Family f) { return f == Family::linear ? "linear" : "logistic"; }

Family parse_family(std::string_view s) {
    if (s == "linear" || s == "gaussian") return Family::linear;
    if (s == "logistic" || s == "binomial") return Family::logistic;
    throw std::invalid_argument("unknown family: " + std::string(s));
}

void GroupedDesign::validate() const {
    if (y.size() != X.rows()) throw std::domain_error("design: y length does not match X rows");
    groups.check_covers(X.cols());
    if (!column_scales.empty() && column_scales.size() != X.cols())
        throw std::domain_error("design: column scale count mismatch");
}

double softplus(double x) noexcept {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double loss_from_predictor(std::span<const double> y, std::span<const double> eta, Family family) {
    const double n = static_cast<double>(y.size());
    if (family == Family::linear) return 0.5 * kernels::dist_sq(y, eta) / n;
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += softplus(eta[i]) - y[i] * eta[i];
    return s / n;
}

void predictor_residual(std::span<const double> y, std::span<const double> eta, Family family,
                        std::span<double> out) {
    const double inv_n = 1.0 / static_cast<double>(y.size());
    if (family == Family::linear) {
        kernels::axpby(inv_n, eta, -inv_n, y, out);
        return;
    }
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = (sigmoid(eta[i]) - y[i]) * inv_n;
}

std::vector<double> gradient_at_predictor(const GroupedDesign& design,
                                          std::span<const double> eta, Family family) {
    std::vector<double> r(design.n()), grad(design.p());
    predictor_residual(design.y, eta, family, r);
    multiply_transpose(design.X, r, grad);
    return grad;
}

LossGradient loss_and_gradient(const GroupedDesign& design, std::span<const double> beta,
                               Family family) {
    design.validate();
    if (beta.size() != design.p()) throw std::domain_error("loss_and_gradient: beta length mismatch");
    if (family == Family::logistic) {
        for (double v : design.y)
            if (v != 0.0 && v != 1.0) throw std::domain_error("logistic response must be 0/1");
    }
    std::vector<double> eta(design.n());
    multiply(design.X, beta, eta);
    return {loss_from_predictor(design.y, eta, family), gradient_at_predictor(design, eta, family)};
}

std::vector<double> sgl_prox(std::span<const double> z, double step, double lambda,
                             const GroupPartition& groups, const PenaltySpec& spec) {
    if (z.size() != groups.num_vars()) throw std::domain_error("sgl_prox: partition mismatch");
    std::vector<double> u(z.size());
    const double t = step * lambda;
    for (std::size_t i = 0; i < z.size(); ++i) u[i] = soft_threshold(z[i], t * spec.alpha * spec.v[i]);
    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        const auto idx = groups.members(g);
        double ss = 0.0;
        for (auto i : idx) ss += u[i] * u[i];
        const double nrm = std::sqrt(ss);
        const double thr =
            t * (1.0 - spec.alpha) * spec.w[g] * std::sqrt(static_cast<double>(idx.size()));
        const double shrink = nrm <= thr ? 0.0 : 1.0 - thr / nrm;
        for (auto i : idx) u[i] *= shrink;
    }
    return u;
}

GroupedDesign standardize(GroupedDesign design, Family family, bool intercept) {
    design.validate();
    const std::size_t n = design.n(), p = design.p();
    const bool center = intercept && family == Family::linear;
    design.column_means.assign(p, 0.0);
    design.column_scales.assign(p, 1.0);
    design.y_center = 0.0;
    if (center) {
        double ym = 0.0;
        for (double v : design.y) ym += v;
        ym /= static_cast<double>(n);
        for (double& v : design.y) v -= ym;
        design.y_center = ym;
    }
    for (std::size_t j = 0; j < p; ++j) {
        auto col = design.X.col(j);
        if (center) {
            double mean = 0.0;
            for (double v : col) mean += v;
            mean /= static_cast<double>(n);
            for (double& v : col) v -= mean;
            design.column_means[j] = mean;
        }
        const double nrm = std::sqrt(kernels::sum_sq(col));
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw std::domain_error("standardize: column " + std::to_string(j) +
                                    " is zero (or constant with centering)");
        for (double& v : col) v /= nrm;
        design.column_scales[j] = nrm;
    }
    design.standardized = true;
    return design;
}

} // namespace dfr
