#include "dfr/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dfr {

void PenaltySpec::validate(const GroupPartition& groups) const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("penalty: alpha must lie in [0,1]");
    if (v.size() != groups.num_vars())
        throw std::domain_error("penalty: variable weight count does not match the partition");
    if (w.size() != groups.num_groups())
        throw std::domain_error("penalty: group weight count does not match the partition");
    auto bad = [](double x) { return !(x > 0.0) || !std::isfinite(x); };
    if (std::any_of(v.begin(), v.end(), bad) || std::any_of(w.begin(), w.end(), bad))
        throw std::domain_error("penalty: weights must be positive and finite");
}

PenaltySpec PenaltySpec::sgl(double alpha, std::size_t p, std::size_t m) {
    return PenaltySpec{alpha, std::vector<double>(p, 1.0), std::vector<double>(m, 1.0), false};
}

PenaltySpec PenaltySpec::asgl(double alpha, std::vector<double> v, std::vector<double> w) {
    return PenaltySpec{alpha, std::move(v), std::move(w), true};
}

double epsilon_norm(std::span<const double> x, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("epsilon_norm: eps must lie in [0,1]");
    if (x.empty()) throw std::domain_error("epsilon_norm: empty vector");
    std::vector<double> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::domain_error("epsilon_norm: non-finite input");
        a[i] = std::abs(x[i]);
    }
    if (eps == 0.0) return *std::max_element(a.begin(), a.end());
    if (eps == 1.0) {
        double s = 0.0;
        for (double v : a) s += v * v;
        return std::sqrt(s);
    }
    std::sort(a.begin(), a.end(), std::greater<>());
    if (a[0] == 0.0) return 0.0;

    // With the k largest entries active, g(q) = A q^2 - 2 B q + C where
    // A = k (1-eps)^2 - eps^2, B = (1-eps) S1, C = S2. Breakpoints are
    // q_j = a_j / (1-eps); g is decreasing, g(q_1) <= 0 < g(0).
    // Find the smallest k with g(q_{k+1}) > 0: the root lies in [q_{k+1}, q_k].
    const double one_m = 1.0 - eps;
    const double ratio_sq = (eps / one_m) * (eps / one_m);
    const std::size_t d = a.size();
    double s1 = 0.0, s2 = 0.0;
    std::size_t k = 0;
    while (k < d) {
        s1 += a[k];
        s2 += a[k] * a[k];
        ++k;
        if (k == d) break;
        const double nxt = a[k];
        const double g_next = s2 - 2.0 * nxt * s1 + static_cast<double>(k) * nxt * nxt -
                              ratio_sq * nxt * nxt;
        if (g_next > 0.0) break;
    }
    const double A = static_cast<double>(k) * one_m * one_m - eps * eps;
    const double B = one_m * s1;
    const double C = s2;
    const double disc = std::max(B * B - A * C, 0.0);
    // Root on the decreasing branch of the quadratic, in cancellation-free form.
    return C / (B + std::sqrt(disc));
}

void soft_threshold(std::span<const double> a, double b, std::span<double> out) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = soft_threshold(a[i], b);
}

GroupNormParams sgl_group_params(std::size_t group_size, double alpha) {
    const double group_term = (1.0 - alpha) * std::sqrt(static_cast<double>(group_size));
    const double tau = alpha + group_term;
    return {tau, std::clamp(group_term / tau, 0.0, 1.0)};
}

GroupNormParams asgl_group_params(std::span<const double> beta_g, std::span<const double> v_g,
                                  double w_g, double alpha) {
    const double pg = static_cast<double>(v_g.size());
    const double group_term = (1.0 - alpha) * w_g * std::sqrt(pg);
    double l1 = 0.0, weighted = 0.0, vsum = 0.0;
    for (std::size_t i = 0; i < v_g.size(); ++i) {
        const double b = beta_g.empty() ? 0.0 : std::abs(beta_g[i]);
        l1 += b;
        weighted += v_g[i] * b;
        vsum += v_g[i];
    }
    // alpha ||v||_1 - (alpha/||b||_1) sum_{i != j} v_j |b_i| collapses to
    // alpha * sum_i v_i |b_i| / ||b||_1, a |b|-weighted mean of v.
    const double var_term = l1 > 0.0 ? alpha * (weighted / l1) : alpha * (vsum / pg);
    const double gamma = var_term + group_term;
    double eps = gamma > 0.0 ? group_term / gamma : 1.0;
    eps = std::clamp(eps, 0.0, 1.0);
    return {gamma, eps};
}

GroupNormParams group_params(const GroupPartition& groups, const PenaltySpec& spec, std::size_t g,
                             std::span<const double> beta_ref) {
    const auto idx = groups.members(g);
    if (!spec.adaptive) return sgl_group_params(idx.size(), spec.alpha);
    std::vector<double> bg(idx.size(), 0.0), vg(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        vg[k] = spec.v[idx[k]];
        if (!beta_ref.empty()) bg[k] = beta_ref[idx[k]];
    }
    return asgl_group_params(bg, vg, spec.w[g], spec.alpha);
}

double sgl_norm(std::span<const double> beta, const GroupPartition& groups,
                const PenaltySpec& spec) {
    if (beta.size() != groups.num_vars()) throw std::domain_error("sgl_norm: partition mismatch");
    spec.validate(groups);
    double l1 = 0.0, grp = 0.0;
    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        double ss = 0.0;
        for (auto i : groups.members(g)) {
            l1 += spec.v[i] * std::abs(beta[i]);
            ss += beta[i] * beta[i];
        }
        grp += spec.w[g] * std::sqrt(static_cast<double>(groups.size(g))) * std::sqrt(ss);
    }
    return spec.alpha * l1 + (1.0 - spec.alpha) * grp;
}

double sgl_dual_norm(std::span<const double> xi, const GroupPartition& groups,
                     const PenaltySpec& spec, std::span<const double> beta_ref) {
    if (xi.size() != groups.num_vars()) throw std::domain_error("sgl_dual_norm: partition mismatch");
    if (!beta_ref.empty() && beta_ref.size() != xi.size())
        throw std::domain_error("sgl_dual_norm: reference coefficient length mismatch");
    spec.validate(groups);
    double best = 0.0;
    std::vector<double> buf;
    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        const auto idx = groups.members(g);
        buf.resize(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) buf[k] = xi[idx[k]];
        const auto gp = group_params(groups, spec, g, beta_ref);
        best = std::max(best, epsilon_norm(buf, gp.eps) / gp.scale);
    }
    return best;
}

} // namespace dfr
