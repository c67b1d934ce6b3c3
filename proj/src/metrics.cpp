#include "dfr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dfr/kernels.hpp"

namespace dfr {

std::string_view timer_name(Timer t) { return t == Timer::wall ? "wall" : "work"; }

Timer parse_timer(std::string_view s) {
    if (s == "wall") return Timer::wall;
    if (s == "work") return Timer::work;
    throw std::invalid_argument("unknown timer '" + std::string(s) + "' (wall, work)");
}

MeanSe mean_se(std::span<const double> values) {
    MeanSe r;
    if (values.empty()) return r;
    double s = 0.0;
    for (double v : values) s += v;
    r.mean = s / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - r.mean) * (v - r.mean);
        const double k = static_cast<double>(values.size());
        r.se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    }
    return r;
}

RunMetrics compute_metrics(const PathSolution& screened, const PathSolution& baseline,
                           const GroupedDesign& design, Timer timer) {
    const std::size_t l = screened.lambdas.size();
    if (l == 0 || baseline.lambdas.size() != l)
        throw std::domain_error("compute_metrics: lambda grids differ in length");
    for (std::size_t k = 0; k < l; ++k)
        if (std::abs(screened.lambdas[k] - baseline.lambdas[k]) >
            1e-12 * std::max(1.0, std::abs(baseline.lambdas[k])))
            throw std::domain_error("compute_metrics: lambda grids differ at point " +
                                    std::to_string(k));
    const std::size_t n = design.n(), p = design.p(), m = design.m();
    if (screened.betas.size() != l || baseline.betas.size() != l)
        throw std::domain_error("compute_metrics: missing coefficient vectors");

    RunMetrics r;
    const double base_cost = timer == Timer::wall ? baseline.total_time_ms() : baseline.total_work();
    const double screen_cost =
        timer == Timer::wall ? screened.total_time_ms() : screened.total_work();
    r.improvement_factor = screen_cost > 0.0 ? base_cost / screen_cost : 1.0;

    std::vector<double> diff(n), fit(n);
    double l2_sum = 0.0;
    std::size_t failed = 0;
    for (std::size_t k = 0; k < l; ++k) {
        const auto& st = screened.screen_states.at(k);
        r.card_Av.push_back(st.active_vars.size());
        r.card_Cv.push_back(st.candidate_vars.size());
        r.card_Ov.push_back(st.optimization_set.size());
        std::size_t kv = 0;
        for (const auto& v : st.kkt_violations) kv += v.size();
        r.card_Kv.push_back(kv);
        r.kkt_violations_total += kv;
        r.card_Ag.push_back(st.active_groups.size());
        r.card_Cg.push_back(st.candidate_groups.size());
        r.card_Og.push_back(groups_of(st.optimization_set, design.groups).size());

        const auto& bs = screened.betas[k];
        const auto& bb = baseline.betas[k];
        if (bs.size() != p || bb.size() != p)
            throw std::domain_error("compute_metrics: coefficient length mismatch");
        std::vector<double> delta(p);
        for (std::size_t i = 0; i < p; ++i) delta[i] = bs[i] - bb[i];
        multiply(design.X, delta, diff);
        const double shift = screened.intercepts.at(k) - baseline.intercepts.at(k);
        for (double& v : diff) v += shift;
        const double d = std::sqrt(kernels::sum_sq(diff));
        l2_sum += d;
        r.l2_max = std::max(r.l2_max, d);
        if (!screened.converged.at(k)) ++failed;
    }
    r.l2_to_noscreen = l2_sum / static_cast<double>(l);
    r.failed_convergence = static_cast<double>(failed) / static_cast<double>(l);

    const std::size_t first = l > 1 ? 1 : 0;
    double ov = 0.0, og = 0.0, eff = 0.0;
    std::size_t eff_count = 0;
    for (std::size_t k = first; k < l; ++k) {
        ov += static_cast<double>(r.card_Ov[k]) / static_cast<double>(p);
        og += static_cast<double>(r.card_Og[k]) / static_cast<double>(m);
        if (r.card_Av[k] > 0) {
            eff += static_cast<double>(r.card_Ov[k]) / static_cast<double>(r.card_Av[k]);
            ++eff_count;
        }
    }
    const double count = static_cast<double>(l - first);
    r.input_prop_vars = ov / count;
    r.input_prop_groups = og / count;
    r.efficiency_vars = eff_count ? eff / static_cast<double>(eff_count) : 1.0;
    return r;
}

} // namespace dfr
