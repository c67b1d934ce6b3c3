#include "dfr/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfr/kernels.hpp"

namespace dfr {

namespace {

// Dense symmetric Gram matrix of the rows (n x n) or columns (p x p).
std::vector<double> gram(const Matrix& X, bool of_rows) {
    const std::size_t n = X.rows(), p = X.cols();
    if (!of_rows) {
        std::vector<double> G(p * p);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a; b < p; ++b)
                G[a * p + b] = G[b * p + a] = kernels::dot(X.col(a), X.col(b));
        return G;
    }
    std::vector<double> G(n * n, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        const auto c = X.col(j);
        for (std::size_t a = 0; a < n; ++a) {
            if (c[a] == 0.0) continue;
            kernels::axpy(c[a], c, std::span<double>(&G[a * n], n));
        }
    }
    return G;
}

} // namespace

AdaptiveWeights leading_component(const Matrix& X, double tol, std::size_t max_iter) {
    const std::size_t n = X.rows(), p = X.cols();
    const bool via_rows = n < p;
    const std::size_t d = via_rows ? n : p;
    const auto G = gram(X, via_rows);

    // Deterministic start with no special alignment to any axis.
    std::vector<double> v(d), u(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = 1.0 + 0.01 * std::sin(static_cast<double>(k) + 1.0);
    double nv = std::sqrt(kernels::sum_sq(v));
    for (double& x : v) x /= nv;

    AdaptiveWeights out;
    double lam = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        for (std::size_t a = 0; a < d; ++a) u[a] = kernels::dot({&G[a * d], d}, v);
        const double nrm = std::sqrt(kernels::sum_sq(u));
        if (nrm == 0.0) throw std::domain_error("leading_component: matrix has rank zero");
        for (std::size_t a = 0; a < d; ++a) u[a] /= nrm;
        const double delta = std::sqrt(kernels::dist_sq(u, v));
        v.swap(u);
        lam = nrm;
        if (delta < tol) break;
    }
    // Rayleigh quotient for the eigenvalue estimate.
    for (std::size_t a = 0; a < d; ++a) u[a] = kernels::dot({&G[a * d], d}, v);
    lam = kernels::dot(u, v);

    std::vector<double> q(p);
    if (via_rows) {
        // q = X^T v / ||X^T v||
        multiply_transpose(X, v, q);
        const double nq = std::sqrt(kernels::sum_sq(q));
        if (nq == 0.0) throw std::domain_error("leading_component: matrix has rank zero");
        for (double& x : q) x /= nq;
    } else {
        q = v;
    }
    std::size_t imax = 0;
    for (std::size_t j = 1; j < p; ++j)
        if (std::abs(q[j]) > std::abs(q[imax])) imax = j;
    if (q[imax] < 0.0)
        for (double& x : q) x = -x;
    out.q1 = std::move(q);
    out.sigma1 = std::sqrt(std::max(lam, 0.0));
    return out;
}

AdaptiveWeights adaptive_weights(const GroupedDesign& design, const AdaptiveParams& params) {
    design.validate();
    if (!(params.b1 >= 0.0) || !(params.b2 >= 0.0))
        throw std::domain_error("adaptive_weights: exponents must be nonnegative");
    AdaptiveWeights out = leading_component(design.X);
    const auto& q = out.q1;
    out.v.resize(design.p());
    for (std::size_t i = 0; i < design.p(); ++i)
        out.v[i] = std::pow(std::max(std::abs(q[i]), kLoadingFloor), -params.b1);
    out.w.resize(design.m());
    for (std::size_t g = 0; g < design.m(); ++g) {
        double ss = 0.0;
        for (auto i : design.groups.members(g)) ss += q[i] * q[i];
        out.w[g] = std::pow(std::max(std::sqrt(ss), kLoadingFloor), -params.b2);
    }
    return out;
}

} // namespace dfr
