#include "dfr/screening.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>

#include "dfr/kernels.hpp"
#include "dfr/norms.hpp"

namespace dfr {

std::string_view rule_name(RuleKind r) {
    switch (r) {
    case RuleKind::dfr_sgl: return "dfr-sgl";
    case RuleKind::dfr_asgl: return "dfr-asgl";
    case RuleKind::sparsegl: return "sparsegl";
    case RuleKind::gap_safe_sequential: return "gap-safe";
    case RuleKind::none: return "none";
    }
    return "unknown";
}

RuleKind parse_rule(std::string_view s) {
    if (s == "dfr-sgl" || s == "dfr_sgl") return RuleKind::dfr_sgl;
    if (s == "dfr-asgl" || s == "dfr_asgl") return RuleKind::dfr_asgl;
    if (s == "sparsegl") return RuleKind::sparsegl;
    if (s == "gap-safe" || s == "gap_safe" || s == "gap_safe_sequential")
        return RuleKind::gap_safe_sequential;
    if (s == "none") return RuleKind::none;
    throw std::invalid_argument("unknown screening rule: " + std::string(s));
}

IndexSet active_vars(std::span<const double> beta, double threshold) {
    IndexSet out;
    for (std::size_t i = 0; i < beta.size(); ++i)
        if (std::abs(beta[i]) > threshold) out.push_back(i);
    return out;
}

IndexSet active_groups(std::span<const double> beta, const GroupPartition& groups,
                       double threshold) {
    return groups_of(active_vars(beta, threshold), groups);
}

IndexSet groups_of(const IndexSet& vars, const GroupPartition& groups) {
    std::vector<char> mark(groups.num_groups(), 0);
    for (auto i : vars) mark[groups.group_of(i)] = 1;
    IndexSet out;
    for (std::size_t g = 0; g < mark.size(); ++g)
        if (mark[g]) out.push_back(g);
    return out;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IndexSet set_complement(const IndexSet& a, std::size_t universe) {
    IndexSet out;
    std::size_t k = 0;
    for (std::size_t i = 0; i < universe; ++i) {
        if (k < a.size() && a[k] == i) {
            ++k;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

std::vector<double> gradient_at_zero(const GroupedDesign& design, Family family) {
    std::vector<double> eta(design.n(), 0.0);
    return gradient_at_predictor(design, eta, family);
}

double path_start_sgl(const GroupedDesign& design, const PenaltySpec& spec, Family family) {
    if (spec.adaptive) throw std::domain_error("path_start_sgl: adaptive penalty given");
    const auto grad = gradient_at_zero(design, family);
    return sgl_dual_norm(grad, design.groups, spec);
}

double asgl_group_start(std::span<const double> c_g, std::span<const double> v_g, double w_g,
                        double alpha) {
    double cmax = 0.0, css = 0.0, ratio_max = 0.0;
    for (std::size_t i = 0; i < c_g.size(); ++i) {
        cmax = std::max(cmax, std::abs(c_g[i]));
        css += c_g[i] * c_g[i];
        ratio_max = std::max(ratio_max, std::abs(c_g[i]) / v_g[i]);
    }
    if (cmax == 0.0) return 0.0;
    // With alpha = 1 the group term vanishes and h hits zero exactly where the
    // last coordinate is thresholded away.
    if (alpha >= 1.0) return ratio_max;
    const double pg = static_cast<double>(c_g.size());
    const double group_coef = pg * w_g * w_g * (1.0 - alpha) * (1.0 - alpha);
    auto h = [&](double lam) {
        double s = 0.0;
        for (std::size_t i = 0; i < c_g.size(); ++i) {
            const double u = soft_threshold(c_g[i], lam * v_g[i] * alpha);
            s += u * u;
        }
        return s - group_coef * lam * lam;
    };
    double lo = 0.0;
    double hi = std::sqrt(css / group_coef);  // ||S(c, .)|| <= ||c|| so h(hi) <= 0
    if (alpha > 0.0) hi = std::min(hi, ratio_max / alpha);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double path_start_asgl(const GroupedDesign& design, const PenaltySpec& spec, Family family) {
    spec.validate(design.groups);
    const auto grad = gradient_at_zero(design, family);
    double best = 0.0;
    std::vector<double> c, v;
    for (std::size_t g = 0; g < design.m(); ++g) {
        const auto idx = design.groups.members(g);
        c.resize(idx.size());
        v.resize(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            c[k] = -grad[idx[k]];
            v[k] = spec.v[idx[k]];
        }
        best = std::max(best, asgl_group_start(c, v, spec.w[g], spec.alpha));
    }
    return best;
}

double path_start(const GroupedDesign& design, const PenaltySpec& spec, Family family) {
    return spec.adaptive ? path_start_asgl(design, spec, family)
                         : path_start_sgl(design, spec, family);
}

namespace {

std::vector<double> gather(std::span<const double> x, std::span<const std::size_t> idx) {
    std::vector<double> out(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out[k] = x[idx[k]];
    return out;
}

} // namespace

IndexSet dfr_group_screen(std::span<const double> grad_prev, double lambda_k, double lambda_next,
                          const PenaltySpec& spec, const GroupPartition& groups,
                          std::span<const double> beta_prev) {
    const double delta = 2.0 * lambda_next - lambda_k;
    IndexSet out;
    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        const auto gp = group_params(groups, spec, g, beta_prev);
        const double stat = epsilon_norm(gather(grad_prev, groups.members(g)), gp.eps);
        if (stat > gp.scale * delta) out.push_back(g);
    }
    return out;
}

IndexSet dfr_variable_screen(std::span<const double> grad_prev, double lambda_k,
                             double lambda_next, const PenaltySpec& spec,
                             const GroupPartition& groups, const IndexSet& candidate_groups,
                             const IndexSet& active_vars_prev) {
    const double delta = 2.0 * lambda_next - lambda_k;
    IndexSet out;
    for (auto g : candidate_groups) {
        for (auto i : groups.members(g)) {
            if (std::binary_search(active_vars_prev.begin(), active_vars_prev.end(), i)) continue;
            if (std::abs(grad_prev[i]) > spec.alpha * spec.v[i] * delta) out.push_back(i);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

IndexSet kkt_check(std::span<const double> grad_next, double lambda_next, const PenaltySpec& spec,
                   const GroupPartition& groups, const IndexSet& excluded) {
    IndexSet out;
    for (auto i : excluded) {
        const std::size_t g = groups.group_of(i);
        const double grp_thr = lambda_next * (1.0 - spec.alpha) * spec.w[g] *
                               std::sqrt(static_cast<double>(groups.size(g)));
        if (std::abs(soft_threshold(grad_next[i], grp_thr)) > lambda_next * spec.alpha * spec.v[i])
            out.push_back(i);
    }
    return out;
}

IndexSet kkt_check_complete(std::span<const double> grad_next, std::span<const double> beta,
                            double lambda_next, const PenaltySpec& spec,
                            const GroupPartition& groups, const IndexSet& excluded) {
    IndexSet out = kkt_check(grad_next, lambda_next, spec, groups, excluded);
    std::vector<int> state(groups.num_groups(), -1);  // -1 unknown, 0 passes, 1 fails
    for (auto i : excluded) {
        const std::size_t g = groups.group_of(i);
        if (state[g] < 0) {
            bool active = false;
            double s = 0.0;
            for (auto j : groups.members(g)) {
                if (beta[j] != 0.0) active = true;
                const double u = soft_threshold(grad_next[j], lambda_next * spec.alpha * spec.v[j]);
                s += u * u;
            }
            const double grp_thr = lambda_next * (1.0 - spec.alpha) * spec.w[g] *
                                   std::sqrt(static_cast<double>(groups.size(g)));
            // Active group: a zero coordinate has a zero group subgradient.
            state[g] = active || std::sqrt(s) > grp_thr ? 1 : 0;
        }
        if (state[g] == 1 && std::abs(grad_next[i]) > lambda_next * spec.alpha * spec.v[i])
            out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

double soft_threshold_norm(std::span<const double> x, std::span<const std::size_t> idx, double b) {
    double s = 0.0;
    for (auto i : idx) {
        const double u = soft_threshold(x[i], b);
        s += u * u;
    }
    return std::sqrt(s);
}

} // namespace

IndexSet sparsegl_group_screen(std::span<const double> grad_prev, double lambda_k,
                               double lambda_next, double alpha, const GroupPartition& groups) {
    IndexSet out;
    const double delta = 2.0 * lambda_next - lambda_k;
    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        const double stat = soft_threshold_norm(grad_prev, groups.members(g), lambda_k * alpha);
        if (stat > std::sqrt(static_cast<double>(groups.size(g))) * (1.0 - alpha) * delta)
            out.push_back(g);
    }
    return out;
}

IndexSet sparsegl_kkt_check(std::span<const double> grad, double lambda, double alpha,
                            const GroupPartition& groups, const IndexSet& excluded_groups) {
    IndexSet out;
    for (auto g : excluded_groups) {
        const double stat = soft_threshold_norm(grad, groups.members(g), lambda * alpha);
        if (stat > std::sqrt(static_cast<double>(groups.size(g))) * (1.0 - alpha) * lambda)
            out.push_back(g);
    }
    return out;
}

std::vector<double> group_spectral_norms(const Matrix& X, const GroupPartition& groups) {
    std::vector<double> out(groups.num_groups());
    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        const auto idx = groups.members(g);
        const std::size_t d = idx.size();
        std::vector<double> gram(d * d);
        double frob_sq = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = a; b < d; ++b) {
                const double v = kernels::dot(X.col(idx[a]), X.col(idx[b]));
                gram[a * d + b] = gram[b * d + a] = v;
            }
            frob_sq += gram[a * d + a];
        }
        std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d))), u(d);
        double est = 0.0;
        for (int it = 0; it < 5000; ++it) {
            for (std::size_t a = 0; a < d; ++a) u[a] = kernels::dot({&gram[a * d], d}, v);
            const double nrm = std::sqrt(kernels::sum_sq(u));
            if (nrm == 0.0) break;
            for (std::size_t a = 0; a < d; ++a) v[a] = u[a] / nrm;
            const bool done = std::abs(nrm - est) <= 1e-14 * nrm;
            est = nrm;
            if (done) break;
        }
        // Power iteration approaches from below; the Frobenius norm is a hard cap.
        out[g] = std::min(std::sqrt(est) * (1.0 + 1e-8), std::sqrt(frob_sq));
    }
    return out;
}

GapSafeResult gap_safe_screen_sequential(const GroupedDesign& design,
                                         std::span<const double> beta_prev, double lambda_next,
                                         double alpha, const GroupPartition& groups,
                                         std::span<const double> block_norms) {
    const std::size_t n = design.n(), p = design.p();
    if (beta_prev.size() != p) throw std::domain_error("gap_safe: beta length mismatch");
    if (!(lambda_next > 0.0)) throw std::domain_error("gap_safe: lambda must be positive");
    std::vector<double> norms_local;
    if (block_norms.empty()) {
        norms_local = group_spectral_norms(design.X, groups);
        block_norms = norms_local;
    }
    const PenaltySpec spec = PenaltySpec::sgl(alpha, p, groups.num_groups());
    const double lam = static_cast<double>(n) * lambda_next;

    std::vector<double> rho(n), xt_rho(p);
    multiply(design.X, beta_prev, rho);
    for (std::size_t i = 0; i < n; ++i) rho[i] = design.y[i] - rho[i];
    multiply_transpose(design.X, rho, xt_rho);
    const double dual_scale = std::max(lam, sgl_dual_norm(xt_rho, groups, spec));

    const double primal = 0.5 * kernels::sum_sq(rho) + lam * sgl_norm(beta_prev, groups, spec);
    double diff_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = rho[i] / dual_scale - design.y[i] / lam;
        diff_sq += d * d;
    }
    const double dual = 0.5 * kernels::sum_sq(design.y) - 0.5 * lam * lam * diff_sq;

    GapSafeResult res;
    res.gap = std::max(primal - dual, 0.0);
    res.radius = std::sqrt(2.0 * res.gap) / lam;

    std::vector<double> corr(p);
    for (std::size_t j = 0; j < p; ++j) corr[j] = xt_rho[j] / dual_scale;

    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        const auto idx = groups.members(g);
        double cmax = 0.0;
        for (auto i : idx) cmax = std::max(cmax, std::abs(corr[i]));
        const double rx = res.radius * block_norms[g];
        const double T = cmax > alpha ? soft_threshold_norm(corr, idx, alpha) + rx
                                      : std::max(cmax + rx - alpha, 0.0);
        if (T < (1.0 - alpha) * std::sqrt(static_cast<double>(idx.size()))) continue;
        res.keep_groups.push_back(g);
        for (auto i : idx) {
            const double col_norm = std::sqrt(kernels::sum_sq(design.X.col(i)));
            if (std::abs(corr[i]) + res.radius * col_norm >= alpha) res.keep_vars.push_back(i);
        }
    }
    std::sort(res.keep_vars.begin(), res.keep_vars.end());
    return res;
}

IndexSet theoretical_group_screen(std::span<const double> grad_next, double lambda_next,
                                  const PenaltySpec& spec, const GroupPartition& groups,
                                  std::span<const double> beta_next, double rel_slack) {
    IndexSet out;
    for (std::size_t g = 0; g < groups.num_groups(); ++g) {
        const auto gp = group_params(groups, spec, g, beta_next);
        const double stat = epsilon_norm(gather(grad_next, groups.members(g)), gp.eps);
        if (stat >= (1.0 - rel_slack) * gp.scale * lambda_next) out.push_back(g);
    }
    return out;
}

IndexSet theoretical_variable_screen(std::span<const double> grad_next, double lambda_next,
                                     const PenaltySpec& spec, const GroupPartition& groups,
                                     const IndexSet& candidate_groups) {
    IndexSet out;
    for (auto g : candidate_groups)
        for (auto i : groups.members(g))
            if (std::abs(grad_next[i]) > lambda_next * spec.alpha * spec.v[i]) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace dfr
