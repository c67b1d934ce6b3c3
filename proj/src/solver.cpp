#include "dfr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dfr/kernels.hpp"
#include "dfr/norms.hpp"

namespace dfr {

namespace {

// Working set reordered so each group's members are contiguous.
struct Layout {
    std::vector<std::size_t> cols;
    std::vector<double> l1_weight;  // alpha * v_i
    struct Segment {
        std::size_t begin, end;
        double weight;  // (1 - alpha) * w_g * sqrt(p_g), p_g the full group size
    };
    std::vector<Segment> segments;
};

Layout make_layout(const GroupPartition& groups, const PenaltySpec& spec,
                   std::span<const std::size_t> working_set) {
    std::vector<std::size_t> ws(working_set.begin(), working_set.end());
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    std::stable_sort(ws.begin(), ws.end(), [&](std::size_t a, std::size_t b) {
        return groups.group_of(a) < groups.group_of(b);
    });
    Layout L;
    L.cols = std::move(ws);
    L.l1_weight.resize(L.cols.size());
    for (std::size_t k = 0; k < L.cols.size(); ++k) L.l1_weight[k] = spec.alpha * spec.v[L.cols[k]];
    std::size_t k = 0;
    while (k < L.cols.size()) {
        const std::size_t g = groups.group_of(L.cols[k]);
        std::size_t e = k;
        while (e < L.cols.size() && groups.group_of(L.cols[e]) == g) ++e;
        const double wt =
            (1.0 - spec.alpha) * spec.w[g] * std::sqrt(static_cast<double>(groups.size(g)));
        L.segments.push_back({k, e, wt});
        k = e;
    }
    return L;
}

void prox_local(const Layout& L, std::span<const double> z, double t, std::span<double> out) {
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = soft_threshold(z[k], t * L.l1_weight[k]);
    for (const auto& s : L.segments) {
        double ss = 0.0;
        for (std::size_t k = s.begin; k < s.end; ++k) ss += out[k] * out[k];
        const double nrm = std::sqrt(ss);
        const double thr = t * s.weight;
        const double shrink = nrm <= thr ? 0.0 : 1.0 - thr / nrm;
        for (std::size_t k = s.begin; k < s.end; ++k) out[k] *= shrink;
    }
}

double penalty_local(const Layout& L, std::span<const double> b) {
    double l1 = 0.0, grp = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) l1 += L.l1_weight[k] * std::abs(b[k]);
    for (const auto& s : L.segments) {
        double ss = 0.0;
        for (std::size_t k = s.begin; k < s.end; ++k) ss += b[k] * b[k];
        grp += s.weight * std::sqrt(ss);
    }
    return l1 + grp;
}

} // namespace

namespace {

// Largest eigenvalue of X_W^T X_W by power iteration.
double gram_spectral_estimate(const Matrix& X, std::span<const std::size_t> cols) {
    const std::size_t w = cols.size();
    std::vector<double> v(w, 1.0 / std::sqrt(static_cast<double>(w))), Xv(X.rows()), u(w);
    double est = 0.0;
    for (int it = 0; it < 50; ++it) {
        multiply_cols(X, cols, v, Xv);
        multiply_transpose_cols(X, cols, Xv, u);
        const double nrm = std::sqrt(kernels::sum_sq(u));
        if (nrm == 0.0) return 0.0;
        for (std::size_t k = 0; k < w; ++k) v[k] = u[k] / nrm;
        if (std::abs(nrm - est) <= 1e-6 * nrm) {
            est = nrm;
            break;
        }
        est = nrm;
    }
    return est;
}

} // namespace

double loss_lipschitz(const GroupedDesign& design, std::span<const std::size_t> cols,
                      Family family) {
    double lip = gram_spectral_estimate(design.X, cols) / static_cast<double>(design.n());
    return family == Family::logistic ? 0.25 * lip : lip;
}

std::vector<std::size_t> full_set(std::size_t p) {
    std::vector<std::size_t> s(p);
    std::iota(s.begin(), s.end(), std::size_t{0});
    return s;
}

double penalized_objective(const GroupedDesign& design, std::span<const double> beta,
                           double lambda, const PenaltySpec& spec, Family family) {
    std::vector<double> eta(design.n());
    multiply(design.X, beta, eta);
    return loss_from_predictor(design.y, eta, family) +
           lambda * sgl_norm(beta, design.groups, spec);
}

FitResult fit_at(const GroupedDesign& design, double lambda, const PenaltySpec& spec, Family family,
                 std::span<const std::size_t> working_set,
                 std::optional<std::span<const double>> warm, const FitConfig& config) {
    design.validate();
    spec.validate(design.groups);
    if (!(lambda >= 0.0)) throw std::domain_error("fit_at: lambda must be nonnegative");
    const std::size_t n = design.n(), p = design.p();
    for (auto j : working_set)
        if (j >= p) throw std::domain_error("fit_at: working set index out of range");
    if (warm && warm->size() != p) throw std::domain_error("fit_at: warm start length mismatch");

    const Layout L = make_layout(design.groups, spec, working_set);
    const std::size_t w = L.cols.size();
    const double dn = static_cast<double>(n);

    FitResult res;
    res.beta.assign(p, 0.0);
    res.intercept = family == Family::linear ? design.y_center : 0.0;

    std::vector<double> x(w, 0.0);
    if (warm && config.warm_start)
        for (std::size_t k = 0; k < w; ++k) x[k] = (*warm)[L.cols[k]];

    std::vector<double> eta_x(n), eta_prev(n), eta_y(n), eta_z(n), r(n);
    multiply_cols(design.X, L.cols, x, eta_x);
    double F_x = loss_from_predictor(design.y, eta_x, family) + lambda * penalty_local(L, x);
    if (config.record_objective) res.objective_trace.push_back(F_x);

    if (w == 0) {
        res.converged = true;
        res.objective = F_x;
        return res;
    }

    const double lip = config.lipschitz > 0.0 ? config.lipschitz : loss_lipschitz(design, L.cols, family);
    double step = lip > 0.0 ? 1.0 / lip : 1.0;

    std::vector<double> y = x, x_prev = x, grad(w), z(w), tmp(w);
    eta_y = eta_x;
    eta_prev = eta_x;
    double t = 1.0;

    for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
        res.iterations = iter + 1;
        const double f_y = loss_from_predictor(design.y, eta_y, family);
        predictor_residual(design.y, eta_y, family, r);
        multiply_transpose_cols(design.X, L.cols, r, grad);
        res.work += dn * static_cast<double>(w);

        double f_z = 0.0;
        for (std::size_t bt = 0;; ++bt) {
            kernels::axpby(1.0, y, -step, grad, tmp);
            prox_local(L, tmp, step * lambda, z);
            multiply_cols(design.X, L.cols, z, eta_z);
            res.work += dn * static_cast<double>(w);
            f_z = loss_from_predictor(design.y, eta_z, family);
            double lin = 0.0, quad = 0.0;
            for (std::size_t k = 0; k < w; ++k) {
                const double d = z[k] - y[k];
                lin += grad[k] * d;
                quad += d * d;
            }
            const double bound = f_y + lin + quad / (2.0 * step);
            if (f_z <= bound + 1e-12 * std::abs(f_y) || bt + 1 >= config.max_backtrack) break;
            step *= config.backtracking_factor;
        }

        const double F_z = f_z + lambda * penalty_local(L, z);
        const double change = std::sqrt(kernels::dist_sq(z, y));

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        // Rounding slack on the monotone test.
        bool accepted = F_z <= F_x + 1e-14 * std::abs(F_x);
        if (accepted) {
            // Gradient restart: momentum pointing against the proximal step.
            double align = 0.0;
            for (std::size_t k = 0; k < w; ++k) align += (y[k] - z[k]) * (z[k] - x[k]);
            x_prev.swap(x);
            x = z;
            eta_prev.swap(eta_x);
            eta_x = eta_z;
            F_x = F_z;
            const double mom = align > 0.0 ? 0.0 : (t - 1.0) / t_next;
            kernels::axpby(1.0 + mom, x, -mom, x_prev, y);
            kernels::axpby(1.0 + mom, eta_x, -mom, eta_prev, eta_y);
            t = align > 0.0 ? 1.0 : t_next;
        } else {
            // Objective went up: drop momentum and restart from the incumbent.
            y = x;
            eta_y = eta_x;
            t = 1.0;
        }
        if (config.record_objective) res.objective_trace.push_back(F_x);
        if (change < config.tol) {
            // Confirm with a plain proximal step from the incumbent, free of momentum.
            predictor_residual(design.y, eta_x, family, r);
            multiply_transpose_cols(design.X, L.cols, r, grad);
            kernels::axpby(1.0, x, -step, grad, tmp);
            prox_local(L, tmp, step * lambda, z);
            res.work += dn * static_cast<double>(w);
            const double plain = std::sqrt(kernels::dist_sq(z, x));
            if (plain < config.tol) {
                res.converged = true;
                break;
            }
            y = x;
            eta_y = eta_x;
            t = 1.0;
        }
    }

    for (std::size_t k = 0; k < w; ++k) res.beta[L.cols[k]] = x[k];
    res.objective = F_x;
    res.step = step;
    return res;
}

} // namespace dfr
