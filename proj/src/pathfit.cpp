#include "dfr/pathfit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dfr/kernels.hpp"

namespace dfr {

std::vector<double> build_path(double lambda1, const PathConfig& config) {
    if (config.path_length < 2) throw std::domain_error("build_path: path length must be >= 2");
    if (!(lambda1 > 0.0) || !std::isfinite(lambda1))
        throw std::domain_error("build_path: lambda1 must be positive");
    if (!(config.min_frac > 0.0 && config.min_frac <= 1.0))
        throw std::domain_error("build_path: min_frac must lie in (0,1]");
    const std::size_t l = config.path_length;
    std::vector<double> out(l);
    const double log_ratio = std::log(config.min_frac);
    for (std::size_t k = 0; k < l; ++k)
        out[k] = lambda1 * std::exp(log_ratio * static_cast<double>(k) / static_cast<double>(l - 1));
    out.back() = lambda1 * config.min_frac;
    return out;
}

double PathSolution::total_time_ms() const {
    return std::accumulate(timings_ms.begin(), timings_ms.end(), 0.0);
}

double PathSolution::total_work() const { return std::accumulate(work.begin(), work.end(), 0.0); }

std::size_t PathSolution::total_kkt_violations() const {
    std::size_t s = 0;
    for (const auto& st : screen_states)
        for (const auto& k : st.kkt_violations) s += k.size();
    return s;
}

namespace {

using Clock = std::chrono::steady_clock;

void check_rule(RuleKind rule, const PenaltySpec& spec, Family family) {
    switch (rule) {
    case RuleKind::dfr_sgl:
        if (spec.adaptive) throw std::invalid_argument("dfr-sgl needs a non-adaptive penalty");
        break;
    case RuleKind::dfr_asgl:
        if (!spec.adaptive) throw std::invalid_argument("dfr-asgl needs an adaptive penalty");
        break;
    case RuleKind::sparsegl:
        if (spec.adaptive) throw std::invalid_argument("sparsegl needs a non-adaptive penalty");
        break;
    case RuleKind::gap_safe_sequential:
        if (family != Family::linear)
            throw std::invalid_argument("gap-safe screening: linear regression only");
        if (spec.adaptive) throw std::invalid_argument("gap-safe needs a non-adaptive penalty");
        break;
    case RuleKind::none: break;
    }
}

IndexSet vars_of_groups(const IndexSet& gs, const GroupPartition& groups) {
    IndexSet out;
    for (auto g : gs)
        for (auto i : groups.members(g)) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

// Groups not entirely contained in the optimization set.
IndexSet groups_not_covered(const IndexSet& opt, const GroupPartition& groups) {
    std::vector<std::size_t> count(groups.num_groups(), 0);
    for (auto i : opt) ++count[groups.group_of(i)];
    IndexSet out;
    for (std::size_t g = 0; g < groups.num_groups(); ++g)
        if (count[g] < groups.size(g)) out.push_back(g);
    return out;
}

} // namespace

PathSolution fit_path(const GroupedDesign& design, const PenaltySpec& spec, Family family,
                      RuleKind rule, const PathConfig& path_config, const FitConfig& fit_config) {
    const double lambda1 = path_start(design, spec, family);
    return fit_path(design, spec, family, rule, build_path(lambda1, path_config), fit_config,
                    path_config.kkt);
}

PathSolution fit_path(const GroupedDesign& design, const PenaltySpec& spec, Family family,
                      RuleKind rule, std::span<const double> lambdas,
                      const FitConfig& fit_config, KktMode kkt) {
    design.validate();
    spec.validate(design.groups);
    check_rule(rule, spec, family);
    if (lambdas.empty()) throw std::domain_error("fit_path: empty lambda grid");
    for (std::size_t k = 1; k < lambdas.size(); ++k)
        if (lambdas[k] > lambdas[k - 1]) throw std::domain_error("fit_path: lambda grid must be non-increasing");

    const std::size_t n = design.n(), p = design.p();
    const auto& groups = design.groups;
    const auto all_vars = full_set(p);
    IndexSet all_groups(groups.num_groups());
    std::iota(all_groups.begin(), all_groups.end(), std::size_t{0});

    PathSolution sol;
    sol.rule = rule;
    sol.lambda_max = path_start(design, spec, family);
    sol.lambdas.assign(lambdas.begin(), lambdas.end());

    std::vector<double> block_norms;
    if (rule == RuleKind::gap_safe_sequential) block_norms = group_spectral_norms(design.X, groups);

    // The full-set Lipschitz constant is reused by every full-space fit.
    double full_lip = 0.0;
    auto config_for = [&](const IndexSet& opt) {
        FitConfig c = fit_config;
        if (opt.size() == p && c.lipschitz <= 0.0) {
            if (full_lip <= 0.0) full_lip = loss_lipschitz(design, all_vars, family);
            c.lipschitz = full_lip;
        }
        return c;
    };

    const bool needs_gradient = rule != RuleKind::none;
    std::vector<double> eta(n);
    std::vector<double> beta_prev(p, 0.0), grad_prev;
    IndexSet active_prev;

    auto record = [&](std::vector<double> beta, double intercept, ScreenState st, double ms,
                      double work, std::size_t iters, bool conv) {
        sol.betas.push_back(std::move(beta));
        sol.intercepts.push_back(intercept);
        sol.screen_states.push_back(std::move(st));
        sol.timings_ms.push_back(ms);
        sol.work.push_back(work);
        sol.iterations.push_back(iters);
        sol.converged.push_back(conv ? 1 : 0);
    };

    // First point: the null model when lambda_1 reaches the path start.
    {
        const auto t0 = Clock::now();
        ScreenState st;
        FitResult fr;
        if (lambdas[0] >= sol.lambda_max * (1.0 - 1e-12)) {
            fr.beta.assign(p, 0.0);
            fr.intercept = family == Family::linear ? design.y_center : 0.0;
            fr.converged = true;
            if (rule == RuleKind::none) {
                st.candidate_groups = all_groups;
                st.candidate_vars = all_vars;
                st.optimization_set = all_vars;
            }
        } else {
            fr = fit_at(design, lambdas[0], spec, family, all_vars, std::nullopt, config_for(all_vars));
            st.candidate_groups = all_groups;
            st.candidate_vars = all_vars;
            st.optimization_set = all_vars;
        }
        st.active_vars = active_vars(fr.beta);
        st.active_groups = groups_of(st.active_vars, groups);
        if (needs_gradient) {
            multiply(design.X, fr.beta, eta);
            grad_prev = gradient_at_predictor(design, eta, family);
        }
        beta_prev = fr.beta;
        active_prev = st.active_vars;
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        record(std::move(fr.beta), fr.intercept, std::move(st), ms, fr.work, fr.iterations,
               fr.converged);
    }

    for (std::size_t k = 1; k < lambdas.size(); ++k) {
        const auto t0 = Clock::now();
        const double lam_k = lambdas[k - 1], lam = lambdas[k];
        ScreenState st;

        switch (rule) {
        case RuleKind::none:
            st.candidate_groups = all_groups;
            st.candidate_vars = all_vars;
            break;
        case RuleKind::dfr_sgl:
        case RuleKind::dfr_asgl:
            st.candidate_groups = dfr_group_screen(grad_prev, lam_k, lam, spec, groups, beta_prev);
            st.candidate_vars = dfr_variable_screen(grad_prev, lam_k, lam, spec, groups,
                                                    st.candidate_groups, active_prev);
            break;
        case RuleKind::sparsegl:
            // Group-level only: previously active groups enter whole.
            st.candidate_groups = set_union(
                sparsegl_group_screen(grad_prev, lam_k, lam, spec.alpha, groups),
                groups_of(active_prev, groups));
            st.candidate_vars = vars_of_groups(st.candidate_groups, groups);
            break;
        case RuleKind::gap_safe_sequential: {
            auto gs = gap_safe_screen_sequential(design, beta_prev, lam, spec.alpha, groups,
                                                 block_norms);
            st.candidate_groups = std::move(gs.keep_groups);
            st.candidate_vars = std::move(gs.keep_vars);
            break;
        }
        }
        IndexSet opt = rule == RuleKind::none ? all_vars : set_union(st.candidate_vars, active_prev);

        FitResult fr = fit_at(design, lam, spec, family, opt, beta_prev, config_for(opt));
        double work = fr.work;
        std::size_t iters = fr.iterations;
        bool conv = fr.converged;
        std::vector<double> grad;

        if (needs_gradient) {
            std::size_t rounds = 0;
            while (true) {
                multiply(design.X, fr.beta, eta);
                grad = gradient_at_predictor(design, eta, family);
                work += static_cast<double>(n) * static_cast<double>(p);
                IndexSet viol;
                if (rule == RuleKind::sparsegl) {
                    const auto bad = sparsegl_kkt_check(grad, lam, spec.alpha, groups,
                                                        groups_not_covered(opt, groups));
                    st.kkt_group_violations += bad.size();
                    for (auto i : vars_of_groups(bad, groups))
                        if (!std::binary_search(opt.begin(), opt.end(), i)) viol.push_back(i);
                } else {
                    const auto excluded = set_complement(opt, p);
                    viol = kkt == KktMode::complete
                               ? kkt_check_complete(grad, fr.beta, lam, spec, groups, excluded)
                               : kkt_check(grad, lam, spec, groups, excluded);
                }
                if (viol.empty()) break;
                st.kkt_violations.push_back(viol);
                if (++rounds > kMaxRepairRounds) {
                    st.fallback_full = true;
                    opt = all_vars;
                } else {
                    opt = set_union(opt, viol);
                }
                const FitResult refit = fit_at(design, lam, spec, family, opt, fr.beta, config_for(opt));
                work += refit.work;
                iters += refit.iterations;
                conv = refit.converged;
                fr = refit;
                if (st.fallback_full) {
                    multiply(design.X, fr.beta, eta);
                    grad = gradient_at_predictor(design, eta, family);
                    break;
                }
            }
        }

        st.optimization_set = std::move(opt);
        st.active_vars = active_vars(fr.beta);
        st.active_groups = groups_of(st.active_vars, groups);
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

        beta_prev = fr.beta;
        active_prev = st.active_vars;
        grad_prev = std::move(grad);
        record(std::move(fr.beta), fr.intercept, std::move(st), ms, work, iters, conv);
    }
    return sol;
}

} // namespace dfr
