#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dfr/adaptive.hpp"
#include "dfr/datagen.hpp"

namespace dfr::cli {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t grid_index, std::size_t rep) {
    return splitmix(splitmix(splitmix(seed) ^ grid_index) ^ rep);
}

struct CellParams {
    GenSpec gen;
    double alpha;
    AdaptiveParams weights;
};

CellParams cell_params(const BenchOptions& o, double g) {
    CellParams c{GenSpec{}, o.alpha, {o.b1, o.b2}};
    c.gen.family = o.family;
    if (o.scenario == "sparsity-sweep" || o.scenario == "correlation-sweep")
        c.gen.layout = GroupLayout::uneven;
    if (o.scenario == "interaction") {
        c.gen.n = 80;
        c.gen.p = 400;
        c.gen.group_sizes = interaction_benchmark_sizes();
    }
    if (o.n) c.gen.n = *o.n;
    if (o.p) c.gen.p = *o.p;

    if (o.scenario == "alpha-sweep") c.alpha = g;
    else if (o.scenario == "signal-sweep") c.gen.signal_mean = g;
    else if (o.scenario == "p-sweep") c.gen.p = static_cast<std::size_t>(g);
    else if (o.scenario == "sparsity-sweep") c.gen.group_sparsity = c.gen.var_sparsity = g;
    else if (o.scenario == "correlation-sweep") c.gen.rho = g;
    else if (o.scenario == "weights-sweep") c.weights = {g, g};
    else if (o.scenario == "interaction") c.gen.interaction_order = static_cast<int>(g);
    return c;
}

std::vector<BenchRow> run_cell(const BenchOptions& o, std::size_t gi, std::size_t rep) {
    const double g = o.grid[gi];
    CellParams c = cell_params(o, g);
    c.gen.seed = cell_seed(o.seed, gi, rep);
    const auto data = generate(c.gen);
    const auto design = standardize(data.design, o.family, true);

    const PathConfig pc{o.path_length, o.min_frac};
    const FitConfig fc = FitConfig::synthetic();
    const bool need_sgl = std::any_of(o.rules.begin(), o.rules.end(),
                                      [](const std::string& r) { return r != "dfr-asgl"; });
    const bool need_asgl = std::find(o.rules.begin(), o.rules.end(), "dfr-asgl") != o.rules.end();

    std::vector<BenchRow> rows;
    auto add = [&](const std::string& rule, RunMetrics m) {
        rows.push_back({o.scenario, g, rep, rule, std::move(m)});
    };

    if (need_sgl) {
        const auto spec = PenaltySpec::sgl(c.alpha, design.p(), design.m());
        const auto base = fit_path(design, spec, o.family, RuleKind::none, pc, fc);
        add("none", compute_metrics(base, base, design, o.timer));
        for (const auto& r : o.rules) {
            if (r == "dfr-asgl") continue;
            const auto sol = fit_path(design, spec, o.family, parse_rule(r), pc, fc);
            add(r, compute_metrics(sol, base, design, o.timer));
        }
    }
    if (need_asgl) {
        const auto w = adaptive_weights(design, c.weights);
        const auto spec = PenaltySpec::asgl(c.alpha, w.v, w.w);
        const auto base = fit_path(design, spec, o.family, RuleKind::none, pc, fc);
        add("none-adaptive", compute_metrics(base, base, design, o.timer));
        const auto sol = fit_path(design, spec, o.family, RuleKind::dfr_asgl, pc, fc);
        add("dfr-asgl", compute_metrics(sol, base, design, o.timer));
    }
    return rows;
}

} // namespace

std::vector<std::string> scenario_names() {
    return {"alpha-sweep",       "signal-sweep",  "p-sweep",    "sparsity-sweep",
            "correlation-sweep", "weights-sweep", "interaction"};
}

std::vector<double> default_grid(const std::string& s) {
    if (s == "alpha-sweep") return {0.05, 0.25, 0.5, 0.75, 0.95};
    if (s == "signal-sweep") return {0, 2, 4, 6, 8};
    if (s == "p-sweep") return {250, 500, 1000, 2000};
    if (s == "sparsity-sweep") return {0.1, 0.2, 0.3, 0.4, 0.5};
    if (s == "correlation-sweep") return {0, 0.2, 0.4, 0.6, 0.8};
    if (s == "weights-sweep") return {0.1, 0.3, 0.5, 0.7, 0.9};
    if (s == "interaction") return {2, 3};
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

std::vector<std::string> default_rules(const std::string& s) {
    if (s == "weights-sweep") return {"dfr-asgl"};
    return {"dfr-sgl", "dfr-asgl", "sparsegl"};
}

BenchOptions resolve(BenchOptions o) {
    const auto names = scenario_names();
    if (std::find(names.begin(), names.end(), o.scenario) == names.end())
        throw std::invalid_argument("unknown scenario '" + o.scenario + "'");
    if (o.grid.empty()) o.grid = default_grid(o.scenario);
    if (o.rules.empty()) o.rules = default_rules(o.scenario);
    for (const auto& r : o.rules) {
        const RuleKind k = parse_rule(r);
        if (k == RuleKind::none) throw std::invalid_argument("the no-screen baseline always runs; drop 'none' from --rules");
        if (k == RuleKind::gap_safe_sequential && o.family != Family::linear)
            throw std::invalid_argument("gap-safe screening: linear regression only");
    }
    if (o.repetitions == 0) throw std::invalid_argument("--repetitions must be positive");
    if (o.threads == 0) throw std::invalid_argument("--threads must be positive");
    if (o.scenario == "interaction" && o.p)
        throw std::invalid_argument("--p is fixed by the interaction scenario");
    for (double g : o.grid) {
        if (o.scenario == "interaction" && g != 2.0 && g != 3.0)
            throw std::invalid_argument("interaction grid values must be 2 or 3");
        if (o.scenario == "p-sweep" && !(g >= 1.0 && g == static_cast<double>(static_cast<std::size_t>(g))))
            throw std::invalid_argument("p-sweep grid values must be positive integers");
    }
    return o;
}

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
    const BenchOptions o = resolve(opts);
    const std::size_t cells = o.grid.size() * o.repetitions;
    std::vector<std::vector<BenchRow>> out(cells);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < cells;) {
            try {
                out[c] = run_cell(o, c / o.repetitions, c % o.repetitions);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cells;
            }
        }
    };
    const std::size_t nt = std::min(o.threads, cells);
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<BenchRow> rows;
    for (auto& cell : out)
        for (auto& r : cell) rows.push_back(std::move(r));
    return rows;
}

} // namespace dfr::cli
