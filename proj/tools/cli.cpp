#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "dfr/adaptive.hpp"
#include "dfr/csv_io.hpp"
#include "dfr/datagen.hpp"
#include "dfr/kernels.hpp"
#include "dfr/metrics.hpp"
#include "dfr/pathfit.hpp"

namespace dfr::cli {

namespace fs = std::filesystem;
using io::format_double;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string str(double v) { return format_double(v); }
std::string str(std::size_t v) { return std::to_string(v); }
std::string str(bool v) { return v ? "true" : "false"; }

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        if constexpr (std::is_same_v<T, std::string>) s += v[i];
        else s += str(v[i]);
    }
    return s;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw io::IoError("cannot create output directory '" + dir.string() + "'");
}

// ---- generate ----

struct GenerateArgs {
    GenSpec spec;
    std::string layout = "even";
    std::string family = "linear";
    std::string out = ".";
};

void add_generate(CLI::App& app, GenerateArgs& a) {
    auto* s = &a.spec;
    app.add_option("--out", a.out, "Output directory")->capture_default_str();
    app.add_option("--n", s->n, "Observations")->capture_default_str();
    app.add_option("--p", s->p, "Marginal variables")->capture_default_str();
    app.add_option("--layout", a.layout, "Group layout")
        ->check(CLI::IsMember({"even", "uneven"}))->capture_default_str();
    app.add_option("--group-size", s->even_group_size, "Group size (even layout)")->capture_default_str();
    app.add_option("--groups", s->uneven_groups, "Number of groups (uneven layout)")->capture_default_str();
    app.add_option("--rho", s->rho, "Within-group correlation")->capture_default_str();
    app.add_option("--group-sparsity", s->group_sparsity, "Fraction of active groups")->capture_default_str();
    app.add_option("--var-sparsity", s->var_sparsity, "Fraction of active variables per active group")
        ->capture_default_str();
    app.add_option("--signal-mean", s->signal_mean, "Signal mean")->capture_default_str();
    app.add_option("--signal-sd", s->signal_sd, "Signal standard deviation")->capture_default_str();
    app.add_option("--family", a.family, "linear or logistic")
        ->check(CLI::IsMember({"linear", "logistic"}))->capture_default_str();
    app.add_option("--interaction-order", s->interaction_order, "1, 2 or 3")
        ->check(CLI::Range(1, 3))->capture_default_str();
    app.add_option("--interaction-sparsity", s->interaction_sparsity,
                   "Fraction of active interaction columns per active group")->capture_default_str();
    app.add_option("--seed", s->seed, "Random seed")->capture_default_str();
}

int cmd_generate(GenerateArgs a, std::ostream& out) {
    a.spec.layout = a.layout == "even" ? GroupLayout::even : GroupLayout::uneven;
    a.spec.family = parse_family(a.family);
    const fs::path dir(a.out);
    try {
        a.spec.validate();
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    ensure_dir(dir);
    const auto data = generate(a.spec);
    io::write_matrix(dir / "X.csv", data.design.X);
    io::write_vector(dir / "y.csv", data.design.y);
    io::write_groups(dir / "groups.csv", data.design.groups);
    io::write_vector(dir / "beta_true.csv", data.beta_true);

    const auto& s = a.spec;
    io::Manifest m{{"command", "generate"},
                   {"out", a.out},
                   {"n", str(s.n)},
                   {"p", str(s.p)},
                   {"p_total", str(data.design.p())},
                   {"m", str(data.design.m())},
                   {"layout", a.layout},
                   {"group_size", str(s.even_group_size)},
                   {"groups", str(s.uneven_groups)},
                   {"group_sizes", join(data.base_group_sizes)},
                   {"rho", str(s.rho)},
                   {"group_sparsity", str(s.group_sparsity)},
                   {"var_sparsity", str(s.var_sparsity)},
                   {"signal_mean", str(s.signal_mean)},
                   {"signal_sd", str(s.signal_sd)},
                   {"family", a.family},
                   {"interaction_order", std::to_string(s.interaction_order)},
                   {"interaction_sparsity", str(s.interaction_sparsity)},
                   {"seed", std::to_string(s.seed)}};
    io::write_manifest(dir / "manifest.txt", m);
    out << "wrote " << data.design.n() << "x" << data.design.p() << " design to " << dir.string()
        << "\n";
    return kExitOk;
}

// ---- fit ----

struct FitArgs {
    std::string data;
    std::string x, y, groups;
    std::string out = ".";
    std::string rule = "dfr-sgl";
    std::string penalty;  // sgl or asgl; default follows the rule
    std::string family = "linear";
    double alpha = 0.95;
    double b1 = 0.1, b2 = 0.1;
    std::size_t path_length = 50;
    double min_frac = 0.1;
    std::size_t max_iter = 5000;
    double tol = 1e-5;
    bool intercept = true;
};

void add_fit(CLI::App& app, FitArgs& a) {
    app.add_option("--data", a.data, "Directory holding X.csv, y.csv and groups.csv");
    app.add_option("--x", a.x, "Design matrix CSV (overrides --data)");
    app.add_option("--y", a.y, "Response CSV (overrides --data)");
    app.add_option("--groups", a.groups, "Group CSV (overrides --data)");
    app.add_option("--out", a.out, "Output directory")->capture_default_str();
    app.add_option("--rule", a.rule, "Screening rule")
        ->check(CLI::IsMember({"dfr-sgl", "dfr-asgl", "sparsegl", "gap-safe", "none"}))
        ->capture_default_str();
    app.add_option("--penalty", a.penalty, "sgl or asgl (default: asgl for dfr-asgl, else sgl)")
        ->check(CLI::IsMember({"sgl", "asgl"}));
    app.add_option("--family", a.family, "linear or logistic")
        ->check(CLI::IsMember({"linear", "logistic"}))->capture_default_str();
    app.add_option("--alpha", a.alpha, "Mixing parameter")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app.add_option("--b1", a.b1, "Adaptive variable-weight exponent")->capture_default_str();
    app.add_option("--b2", a.b2, "Adaptive group-weight exponent")->capture_default_str();
    app.add_option("--path-length", a.path_length, "Number of lambda values")->capture_default_str();
    app.add_option("--min-frac", a.min_frac, "Last lambda as a fraction of the first")->capture_default_str();
    app.add_option("--max-iter", a.max_iter, "Solver iteration limit")->capture_default_str();
    app.add_option("--tol", a.tol, "Solver tolerance")->capture_default_str();
    app.add_option("--intercept", a.intercept, "Fit an intercept (linear family)")->capture_default_str();
}

fs::path pick(const std::string& explicit_path, const std::string& dir, const char* name) {
    if (!explicit_path.empty()) return explicit_path;
    if (dir.empty()) throw UsageError(std::string("missing --data or --") + name);
    return fs::path(dir) / (std::string(name) + ".csv");
}

int cmd_fit(FitArgs a, std::ostream& out) {
    const Family family = parse_family(a.family);
    const RuleKind rule = parse_rule(a.rule);
    if (rule == RuleKind::gap_safe_sequential && family != Family::linear)
        throw UsageError("gap-safe screening: linear regression only");
    if (a.penalty.empty()) a.penalty = rule == RuleKind::dfr_asgl ? "asgl" : "sgl";
    const bool adaptive = a.penalty == "asgl";
    if (rule == RuleKind::dfr_asgl && !adaptive) throw UsageError("dfr-asgl needs --penalty asgl");
    if (adaptive && rule != RuleKind::dfr_asgl && rule != RuleKind::none)
        throw UsageError("--penalty asgl works with --rule dfr-asgl or none");

    GroupedDesign raw;
    raw.X = io::read_matrix(pick(a.x, a.data, "X"));
    raw.y = io::read_vector(pick(a.y, a.data, "y"));
    raw.groups = io::read_groups(pick(a.groups, a.data, "groups"));
    try {
        raw.validate();
    } catch (const std::domain_error& e) {
        throw UsageError(std::string("inconsistent input: ") + e.what());
    }
    if (family == Family::logistic)
        for (double v : raw.y)
            if (v != 0.0 && v != 1.0) throw UsageError("logistic family needs a 0/1 response");

    const auto design = standardize(std::move(raw), family, a.intercept);
    PenaltySpec spec = PenaltySpec::sgl(a.alpha, design.p(), design.m());
    if (adaptive) {
        const auto w = adaptive_weights(design, {a.b1, a.b2});
        spec = PenaltySpec::asgl(a.alpha, w.v, w.w);
    }
    FitConfig fc = FitConfig::synthetic();
    fc.max_iter = a.max_iter;
    fc.tol = a.tol;
    fc.intercept = a.intercept;
    const PathConfig pc{a.path_length, a.min_frac};
    const auto sol = fit_path(design, spec, family, rule, pc, fc);

    const fs::path dir(a.out);
    ensure_dir(dir);
    {
        std::ofstream f(dir / "path.csv");
        if (!f) throw io::IoError("cannot open '" + (dir / "path.csv").string() + "' for writing");
        f << "lambda,converged,iterations,card_Av,card_Cv,card_Ov,kkt_violations,wall_ms\n";
        for (std::size_t k = 0; k < sol.lambdas.size(); ++k) {
            const auto& st = sol.screen_states[k];
            std::size_t kv = 0;
            for (const auto& v : st.kkt_violations) kv += v.size();
            f << format_double(sol.lambdas[k]) << ',' << int(sol.converged[k]) << ','
              << sol.iterations[k] << ',' << st.active_vars.size() << ','
              << st.candidate_vars.size() << ',' << st.optimization_set.size() << ',' << kv << ','
              << format_double(sol.timings_ms[k]) << '\n';
        }
        if (!f) throw io::IoError("write failed for '" + (dir / "path.csv").string() + "'");
    }
    // Coefficients on the scale of the input columns.
    io::Rows betas, intercepts;
    for (std::size_t k = 0; k < sol.lambdas.size(); ++k) {
        std::vector<double> b(design.p());
        double b0 = sol.intercepts[k];
        for (std::size_t i = 0; i < design.p(); ++i) {
            b[i] = sol.betas[k][i] / design.column_scales[i];
            b0 -= design.column_means[i] * b[i];
        }
        betas.push_back(std::move(b));
        intercepts.push_back({b0});
    }
    io::write_csv(dir / "beta.csv", betas);
    io::write_csv(dir / "intercept.csv", intercepts);

    io::Manifest m{{"command", "fit"},
                   {"data", a.data},
                   {"x", pick(a.x, a.data, "X").string()},
                   {"y", pick(a.y, a.data, "y").string()},
                   {"groups", pick(a.groups, a.data, "groups").string()},
                   {"out", a.out},
                   {"rule", a.rule},
                   {"penalty", a.penalty},
                   {"family", a.family},
                   {"alpha", str(a.alpha)},
                   {"b1", str(a.b1)},
                   {"b2", str(a.b2)},
                   {"path_length", str(a.path_length)},
                   {"min_frac", str(a.min_frac)},
                   {"max_iter", str(a.max_iter)},
                   {"tol", str(a.tol)},
                   {"intercept", str(a.intercept)},
                   {"n", str(design.n())},
                   {"p", str(design.p())},
                   {"m", str(design.m())},
                   {"lambda_max", str(sol.lambda_max)},
                   {"kernel_backend", std::string(kernels::backend_name(kernels::active_backend()))}};
    io::write_manifest(dir / "manifest.txt", m);
    out << "fitted " << sol.lambdas.size() << " lambdas with " << a.rule << " in "
        << std::fixed << std::setprecision(3) << sol.total_time_ms() << " ms\n";
    return kExitOk;
}

// ---- bench ----

struct BenchArgs {
    BenchOptions opts;
    std::string rules, grid, timer = "wall", family = "linear", out = ".";
    std::size_t n = 0, p = 0;
};

void add_bench(CLI::App& app, BenchArgs& a) {
    auto* o = &a.opts;
    app.add_option("--scenario", o->scenario, "Benchmark scenario")
        ->check(CLI::IsMember(scenario_names()))->capture_default_str();
    app.add_option("--repetitions", o->repetitions, "Datasets per grid value")->capture_default_str();
    app.add_option("--seed", o->seed, "Base random seed")->capture_default_str();
    app.add_option("--rules", a.rules, "Comma-separated screening rules (default per scenario)");
    app.add_option("--grid", a.grid, "Comma-separated grid values (default per scenario)");
    app.add_option("--n", a.n, "Override the number of observations");
    app.add_option("--p", a.p, "Override the number of variables");
    app.add_option("--threads", o->threads, "Worker threads across cells")->capture_default_str();
    app.add_option("--timer", a.timer, "wall or work (deterministic solver work units)")
        ->check(CLI::IsMember({"wall", "work"}))->capture_default_str();
    app.add_option("--family", a.family, "linear or logistic")
        ->check(CLI::IsMember({"linear", "logistic"}))->capture_default_str();
    app.add_option("--alpha", o->alpha, "Mixing parameter outside the alpha sweep")->capture_default_str();
    app.add_option("--b1", o->b1, "Adaptive exponent outside the weights sweep")->capture_default_str();
    app.add_option("--b2", o->b2, "Adaptive exponent outside the weights sweep")->capture_default_str();
    app.add_option("--path-length", o->path_length, "Number of lambda values")->capture_default_str();
    app.add_option("--min-frac", o->min_frac, "Last lambda as a fraction of the first")->capture_default_str();
    app.add_option("--out", a.out, "Output directory")->capture_default_str();
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) parts.push_back(item);
    return parts;
}

int cmd_bench(BenchArgs a, std::ostream& out) {
    auto& o = a.opts;
    o.rules = split(a.rules);
    for (const auto& g : split(a.grid)) {
        try {
            std::size_t used = 0;
            o.grid.push_back(std::stod(g, &used));
            if (used != g.size()) throw std::invalid_argument(g);
        } catch (const std::exception&) {
            throw UsageError("bad grid value '" + g + "'");
        }
    }
    if (a.n) o.n = a.n;
    if (a.p) o.p = a.p;
    o.timer = parse_timer(a.timer);
    o.family = parse_family(a.family);
    try {
        o = resolve(o);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const fs::path dir(a.out);
    ensure_dir(dir);
    const auto rows = run_bench(o);

    {
        std::ofstream f(dir / "bench.csv");
        if (!f) throw io::IoError("cannot open '" + (dir / "bench.csv").string() + "' for writing");
        f << "scenario,grid_value,repetition,rule,improvement_factor,input_prop_vars,"
             "input_prop_groups,l2_to_noscreen,kkt_violations_total,failed_convergence\n";
        for (const auto& r : rows) {
            const auto& m = r.metrics;
            f << r.scenario << ',' << format_double(r.grid_value) << ',' << r.repetition << ','
              << r.rule << ',' << format_double(m.improvement_factor) << ','
              << format_double(m.input_prop_vars) << ',' << format_double(m.input_prop_groups)
              << ',' << format_double(m.l2_to_noscreen) << ',' << m.kkt_violations_total << ','
              << format_double(m.failed_convergence) << '\n';
        }
        if (!f) throw io::IoError("write failed for '" + (dir / "bench.csv").string() + "'");
    }

    // Summary: one row per (grid value, rule) in first-seen order.
    std::vector<std::pair<double, std::string>> keys;
    std::map<std::pair<double, std::string>, std::vector<const RunMetrics*>> cells;
    for (const auto& r : rows) {
        auto key = std::make_pair(r.grid_value, r.rule);
        if (!cells.count(key)) keys.push_back(key);
        cells[key].push_back(&r.metrics);
    }
    using Getter = double (*)(const RunMetrics&);
    const std::pair<const char*, Getter> fields[] = {
        {"improvement_factor", [](const RunMetrics& m) { return m.improvement_factor; }},
        {"input_prop_vars", [](const RunMetrics& m) { return m.input_prop_vars; }},
        {"input_prop_groups", [](const RunMetrics& m) { return m.input_prop_groups; }},
        {"l2_to_noscreen", [](const RunMetrics& m) { return m.l2_to_noscreen; }},
        {"kkt_violations_total",
         [](const RunMetrics& m) { return static_cast<double>(m.kkt_violations_total); }},
        {"failed_convergence", [](const RunMetrics& m) { return m.failed_convergence; }},
    };
    {
        std::ofstream f(dir / "summary.csv");
        if (!f) throw io::IoError("cannot open '" + (dir / "summary.csv").string() + "' for writing");
        f << "scenario,grid_value,rule,repetitions";
        for (const auto& [name, get] : fields) f << ',' << name << "_mean," << name << "_se";
        f << '\n';
        for (const auto& key : keys) {
            const auto& ms = cells[key];
            f << o.scenario << ',' << format_double(key.first) << ',' << key.second << ','
              << ms.size();
            for (const auto& [name, get] : fields) {
                std::vector<double> vals;
                for (const auto* m : ms) vals.push_back(get(*m));
                const auto s = mean_se(vals);
                f << ',' << format_double(s.mean) << ',' << format_double(s.se);
            }
            f << '\n';
        }
        if (!f) throw io::IoError("write failed for '" + (dir / "summary.csv").string() + "'");
    }

    std::vector<std::string> grid_text;
    for (double g : o.grid) grid_text.push_back(format_double(g));
    io::Manifest m{{"command", "bench"},
                   {"scenario", o.scenario},
                   {"repetitions", str(o.repetitions)},
                   {"seed", std::to_string(o.seed)},
                   {"rules", join(o.rules)},
                   {"grid", join(grid_text)},
                   {"n", o.n ? str(*o.n) : "scenario default"},
                   {"p", o.p ? str(*o.p) : "scenario default"},
                   {"threads", str(o.threads)},
                   {"timer", std::string(timer_name(o.timer))},
                   {"family", a.family},
                   {"alpha", str(o.alpha)},
                   {"b1", str(o.b1)},
                   {"b2", str(o.b2)},
                   {"path_length", str(o.path_length)},
                   {"min_frac", str(o.min_frac)},
                   {"out", a.out},
                   {"kernel_backend", std::string(kernels::backend_name(kernels::active_backend()))}};
    io::write_manifest(dir / "manifest.txt", m);
    out << "wrote " << rows.size() << " rows to " << (dir / "bench.csv").string() << "\n";
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sparse-group lasso paths with dual feature reduction screening"};
    app.require_subcommand(1);
    std::string backend = "auto";
    app.add_option("--backend", backend, "Kernel backend: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))->capture_default_str();

    GenerateArgs gen;
    FitArgs fit;
    BenchArgs bench;
    auto* g = app.add_subcommand("generate", "Write a synthetic grouped dataset");
    auto* f = app.add_subcommand("fit", "Fit a regularization path");
    auto* b = app.add_subcommand("bench", "Run a screening benchmark scenario");
    add_generate(*g, gen);
    add_fit(*f, fit);
    add_bench(*b, bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (backend != "auto") kernels::set_backend(backend == "avx2" ? kernels::Backend::avx2
                                                                      : kernels::Backend::scalar);
        if (g->parsed()) return cmd_generate(gen, out);
        if (f->parsed()) return cmd_fit(fit, out);
        return cmd_bench(bench, out);
    } catch (const io::IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const io::FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace dfr::cli
