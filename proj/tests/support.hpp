#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dfr/model.hpp"

namespace dfr::test {

inline std::vector<double> normal_vector(std::size_t d, std::mt19937_64& rng, double sd = 1.0) {
    std::normal_distribution<double> N(0.0, sd);
    std::vector<double> v(d);
    for (auto& x : v) x = N(rng);
    return v;
}

inline std::vector<std::size_t> even_sizes(std::size_t p, std::size_t m) {
    std::vector<std::size_t> s(m, p / m);
    for (std::size_t g = 0; g < p % m; ++g) ++s[g];
    return s;
}

/// Gaussian design with a sparse signal in the first group's leading
/// variables, standardized for the family.
inline GroupedDesign random_design(std::size_t n, std::size_t p, std::size_t m, std::uint64_t seed,
                                   Family family = Family::linear, bool intercept = true,
                                   double signal = 1.5) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    GroupedDesign d;
    d.X = Matrix(n, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < n; ++i) d.X(i, j) = N(rng);
    const auto sizes = even_sizes(p, m);
    d.groups = GroupPartition::contiguous(sizes);
    std::vector<double> beta(p, 0.0);
    for (std::size_t j = 0; j < std::min<std::size_t>(p, 3); ++j) beta[j] = signal * (j % 2 ? -1 : 1);
    if (p > sizes[0] + 1) beta[sizes[0]] = signal;
    d.y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < p; ++j) eta += d.X(i, j) * beta[j];
        if (family == Family::linear) {
            d.y[i] = eta + N(rng);
        } else {
            std::bernoulli_distribution B(1.0 / (1.0 + std::exp(-eta)));
            d.y[i] = B(rng) ? 1.0 : 0.0;
        }
    }
    return standardize(std::move(d), family, intercept);
}

/// Root of sum (|x_i| - (1-eps) q)_+^2 = (eps q)^2 by plain bisection.
inline double epsilon_norm_bisection(std::span<const double> x, double eps) {
    double l1 = 0.0;
    for (double v : x) l1 += std::abs(v);
    auto g = [&](double q) {
        double s = 0.0;
        for (double v : x) {
            const double r = std::abs(v) - (1.0 - eps) * q;
            if (r > 0) s += r * r;
        }
        return s - eps * eps * q * q;
    };
    double lo = 0.0, hi = l1 / (1.0 - eps) + 1.0;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace dfr::test
