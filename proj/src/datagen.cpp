#include "dfr/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace dfr {

namespace {

std::size_t choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::size_t ceil_count(double frac, std::size_t total) {
    auto c = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(total) - 1e-12));
    return std::clamp<std::size_t>(c, 1, total);
}

// k distinct indices from [0, n), sorted.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<std::size_t> resolve_sizes(const GenSpec& spec, std::mt19937_64& rng) {
    if (!spec.group_sizes.empty()) return spec.group_sizes;
    if (spec.layout == GroupLayout::uneven)
        return random_group_sizes(spec.p, spec.uneven_groups, spec.uneven_min, spec.uneven_max,
                                  rng());
    std::vector<std::size_t> sizes(spec.p / spec.even_group_size, spec.even_group_size);
    if (spec.p % spec.even_group_size) sizes.push_back(spec.p % spec.even_group_size);
    return sizes;
}

} // namespace

void GenSpec::validate() const {
    if (n == 0 || p == 0) throw std::domain_error("GenSpec: n and p must be positive");
    if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("GenSpec: rho must lie in [0,1)");
    if (!(group_sparsity > 0.0 && group_sparsity <= 1.0))
        throw std::domain_error("GenSpec: group_sparsity must lie in (0,1]");
    if (!(var_sparsity > 0.0 && var_sparsity <= 1.0))
        throw std::domain_error("GenSpec: var_sparsity must lie in (0,1]");
    if (!(interaction_sparsity > 0.0 && interaction_sparsity <= 1.0))
        throw std::domain_error("GenSpec: interaction_sparsity must lie in (0,1]");
    if (!(signal_sd >= 0.0) || !std::isfinite(signal_mean))
        throw std::domain_error("GenSpec: invalid signal distribution");
    if (interaction_order < 1 || interaction_order > 3)
        throw std::domain_error("GenSpec: interaction_order must be 1, 2 or 3");
    if (!group_sizes.empty()) {
        std::size_t total = 0;
        for (auto s : group_sizes) {
            if (s == 0) throw std::domain_error("GenSpec: empty group");
            total += s;
        }
        if (total != p) throw std::domain_error("GenSpec: group sizes must sum to p");
    } else if (layout == GroupLayout::even) {
        if (even_group_size == 0) throw std::domain_error("GenSpec: group size must be positive");
    } else {
        if (uneven_groups == 0 || uneven_min == 0 || uneven_min > uneven_max ||
            uneven_groups * uneven_min > p || uneven_groups * uneven_max < p)
            throw std::domain_error("GenSpec: uneven layout cannot cover p=" + std::to_string(p));
    }
}

std::size_t expanded_dimension(std::span<const std::size_t> group_sizes, int order) {
    if (order < 1 || order > 3) throw std::domain_error("expanded_dimension: order must be 1..3");
    std::size_t total = 0;
    for (auto s : group_sizes) {
        total += s;
        if (order >= 2) total += choose(s, 2);
        if (order >= 3) total += choose(s, 3);
    }
    return total;
}

std::vector<std::size_t> interaction_benchmark_sizes() {
    std::vector<std::size_t> sizes;
    const std::pair<std::size_t, std::size_t> spec[] = {{4, 20}, {5, 6},  {7, 3}, {9, 1},
                                                        {11, 17}, {14, 2}, {15, 3}};
    for (auto [size, count] : spec) sizes.insert(sizes.end(), count, size);
    return sizes;
}

std::vector<std::size_t> random_group_sizes(std::size_t p, std::size_t m, std::size_t lo,
                                            std::size_t hi, std::uint64_t seed) {
    if (m == 0 || lo == 0 || lo > hi || m * lo > p || m * hi < p)
        throw std::domain_error("random_group_sizes: infeasible bounds");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> sizes(m, lo);
    std::vector<std::size_t> open(m);
    std::iota(open.begin(), open.end(), std::size_t{0});
    for (std::size_t left = p - m * lo; left > 0; --left) {
        std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
        const std::size_t slot = pick(rng);
        if (++sizes[open[slot]] == hi) {
            open[slot] = open.back();
            open.pop_back();
        }
    }
    return sizes;
}

GeneratedData generate(const GenSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    GeneratedData out;
    out.base_group_sizes = resolve_sizes(spec, rng);
    const auto& sizes = out.base_group_sizes;
    const std::size_t m = sizes.size(), n = spec.n, p = spec.p;
    const std::size_t p_total = expanded_dimension(sizes, spec.interaction_order);
    if (p_total > kMaxExpandedColumns)
        throw std::domain_error("generate: interaction expansion gives " + std::to_string(p_total) +
                                " columns, above the limit");

    std::vector<std::size_t> start(m + 1, 0);
    for (std::size_t g = 0; g < m; ++g) start[g + 1] = start[g] + sizes[g];

    // Shared-factor equicorrelation, row by row.
    Matrix X(n, p);
    const double a = std::sqrt(spec.rho), b = std::sqrt(1.0 - spec.rho);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t g = 0; g < m; ++g) {
            const double z = normal(rng);
            for (std::size_t j = start[g]; j < start[g + 1]; ++j) X(i, j) = a * z + b * normal(rng);
        }

    std::vector<std::size_t> labels(p);
    for (std::size_t g = 0; g < m; ++g)
        std::fill(labels.begin() + start[g], labels.begin() + start[g + 1], g);

    // Interaction columns per group: pairs then triples of distinct columns.
    std::vector<std::vector<std::size_t>> inter_cols(m);
    if (spec.interaction_order >= 2) {
        std::vector<double> col(n);
        for (std::size_t g = 0; g < m; ++g) {
            const std::size_t s = start[g], e = start[g + 1];
            for (std::size_t j = s; j < e; ++j)
                for (std::size_t k = j + 1; k < e; ++k) {
                    for (std::size_t i = 0; i < n; ++i) col[i] = X(i, j) * X(i, k);
                    inter_cols[g].push_back(X.cols());
                    X.append_col(col);
                    labels.push_back(g);
                }
            if (spec.interaction_order >= 3)
                for (std::size_t j = s; j < e; ++j)
                    for (std::size_t k = j + 1; k < e; ++k)
                        for (std::size_t l = k + 1; l < e; ++l) {
                            for (std::size_t i = 0; i < n; ++i) col[i] = X(i, j) * X(i, k) * X(i, l);
                            inter_cols[g].push_back(X.cols());
                            X.append_col(col);
                            labels.push_back(g);
                        }
        }
    }

    std::normal_distribution<double> signal(spec.signal_mean, spec.signal_sd);
    out.beta_true.assign(X.cols(), 0.0);
    const auto active = sample_without_replacement(m, ceil_count(spec.group_sparsity, m), rng);
    for (auto g : active) {
        for (auto j : sample_without_replacement(sizes[g], ceil_count(spec.var_sparsity, sizes[g]), rng))
            out.beta_true[start[g] + j] = signal(rng);
        const auto& ic = inter_cols[g];
        if (!ic.empty())
            for (auto j : sample_without_replacement(ic.size(),
                                                     ceil_count(spec.interaction_sparsity, ic.size()), rng))
                out.beta_true[ic[j]] = signal(rng);
    }

    std::vector<double> eta(n, 0.0);
    multiply(X, out.beta_true, eta);
    out.design.y.resize(n);
    if (spec.family == Family::linear) {
        for (std::size_t i = 0; i < n; ++i) out.design.y[i] = eta[i] + normal(rng);
    } else {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double prob = sigmoid(eta[i] + normal(rng));
            out.design.y[i] = unif(rng) < prob ? 1.0 : 0.0;
        }
    }
    out.design.X = std::move(X);
    out.design.groups = GroupPartition::from_labels(labels);
    out.design.column_scales.assign(out.design.X.cols(), 1.0);
    out.design.column_means.assign(out.design.X.cols(), 0.0);
    return out;
}

} // namespace dfr
