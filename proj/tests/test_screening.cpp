#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

#include "dfr/norms.hpp"
#include "dfr/pathfit.hpp"
#include "dfr/screening.hpp"
#include "dfr/solver.hpp"
#include "support.hpp"

using namespace dfr;

namespace {

FitConfig tight() {
    FitConfig c;
    c.tol = 1e-10;
    c.max_iter = 200000;
    return c;
}

bool contains(const IndexSet& big, const IndexSet& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

double inf_norm(std::span<const double> x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST_SUITE("screening") {

TEST_CASE("rule names round trip") {
    for (auto r : {RuleKind::dfr_sgl, RuleKind::dfr_asgl, RuleKind::sparsegl,
                   RuleKind::gap_safe_sequential, RuleKind::none})
        CHECK(parse_rule(rule_name(r)) == r);
    CHECK_THROWS_AS(parse_rule("strong"), std::invalid_argument);
}

TEST_CASE("index set helpers") {
    const std::vector<double> beta{0, 1e-9, -2, 0, 3e-8, 0};
    CHECK(active_vars(beta) == IndexSet{2, 4});
    const std::vector<std::size_t> sizes{2, 2, 2};
    const auto G = GroupPartition::contiguous(sizes);
    CHECK(active_groups(beta, G) == IndexSet{1, 2});
    CHECK(groups_of({0, 1, 5}, G) == IndexSet{0, 2});
    CHECK(set_union({1, 3}, {2, 3, 5}) == IndexSet{1, 2, 3, 5});
    CHECK(set_complement({1, 3}, 5) == IndexSet{0, 2, 4});
}

TEST_CASE("path start examples") {
    auto d = test::random_design(20, 40, 4, 41);
    GroupedDesign z = d;
    std::fill(z.y.begin(), z.y.end(), 0.0);
    CHECK(path_start(z, PenaltySpec::sgl(0.95, 40, 4), Family::linear) == 0.0);

    const auto grad = gradient_at_zero(d, Family::linear);
    CHECK(path_start(d, PenaltySpec::sgl(1.0, 40, 4), Family::linear) == doctest::Approx(inf_norm(grad)).epsilon(1e-14));

    const auto unit = PenaltySpec::asgl(0.95, std::vector<double>(40, 1.0), std::vector<double>(4, 1.0));
    CHECK(std::abs(path_start(d, unit, Family::linear) - path_start(d, PenaltySpec::sgl(0.95, 40, 4), Family::linear)) < 1e-8);

    std::mt19937_64 rng(3);
    std::vector<double> v(40), w(4);
    for (auto& x : v) x = std::uniform_real_distribution<double>(0.5, 2)(rng);
    for (auto& x : w) x = std::uniform_real_distribution<double>(0.5, 2)(rng);
    double ref = 0;
    for (std::size_t i = 0; i < 40; ++i) ref = std::max(ref, std::abs(grad[i]) / v[i]);
    CHECK(path_start(d, PenaltySpec::asgl(1.0, v, w), Family::linear) == doctest::Approx(ref).epsilon(1e-14));
    CHECK_THROWS_AS(path_start_sgl(d, PenaltySpec::asgl(0.9, v, w), Family::linear), std::domain_error);
}

TEST_CASE("path start brackets the null model for both penalties") {
    std::mt19937_64 rng(4);
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto d = test::random_design(20, 40, 4, 500 + s);
        std::vector<double> v(40), w(4);
        for (auto& x : v) x = std::uniform_real_distribution<double>(0.5, 2)(rng);
        for (auto& x : w) x = std::uniform_real_distribution<double>(0.5, 2)(rng);
        for (const auto& spec : {PenaltySpec::sgl(0.95, 40, 4), PenaltySpec::asgl(0.95, v, w)}) {
            const double l1 = path_start(d, spec, Family::linear);
            const auto above = fit_at(d, 1.001 * l1, spec, Family::linear, full_set(40), std::nullopt, tight());
            CHECK(active_vars(above.beta).empty());
            const auto below = fit_at(d, 0.95 * l1, spec, Family::linear, full_set(40), std::nullopt, tight());
            CHECK(!active_vars(below.beta).empty());
        }
    }
}

TEST_CASE("group rule examples") {
    const std::vector<std::size_t> sizes{3, 3};
    const auto G = GroupPartition::contiguous(sizes);
    const std::vector<double> zero(6, 0.0);
    CHECK(dfr_group_screen(zero, 1.0, 1.0, PenaltySpec::sgl(0.95, 6, 2), G, {}).empty());
    CHECK(sparsegl_group_screen(zero, 1.0, 1.0, 0.95, G).empty());
    CHECK(dfr_variable_screen(zero, 1.0, 0.9, PenaltySpec::sgl(0.95, 6, 2), G, {}, {}).empty());
}

TEST_CASE("strong rule reductions at the mixing extremes") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> L(0.2, 1.0), F(0.6, 1.0);
    for (int t = 0; t < 100; ++t) {
        const auto sizes = test::even_sizes(30, 5);
        const auto G = GroupPartition::contiguous(sizes);
        const auto grad = test::normal_vector(30, rng);
        const double lk = L(rng), ln = lk * F(rng), delta = 2 * ln - lk;

        // alpha = 0: group lasso strong rule.
        IndexSet gl;
        for (std::size_t g = 0; g < 5; ++g) {
            double s = 0;
            for (auto i : G.members(g)) s += grad[i] * grad[i];
            if (std::sqrt(s) > std::sqrt(double(G.size(g))) * delta) gl.push_back(g);
        }
        CHECK(dfr_group_screen(grad, lk, ln, PenaltySpec::sgl(0.0, 30, 5), G, {}) == gl);
        CHECK(sparsegl_group_screen(grad, lk, ln, 0.0, G) == gl);

        // alpha = 1: lasso strong rule over all variables.
        const auto spec1 = PenaltySpec::sgl(1.0, 30, 5);
        IndexSet lasso;
        for (std::size_t i = 0; i < 30; ++i)
            if (std::abs(grad[i]) > delta) lasso.push_back(i);
        const auto cg = dfr_group_screen(grad, lk, ln, spec1, G, {});
        CHECK(dfr_variable_screen(grad, lk, ln, spec1, G, cg, {}) == lasso);
    }
}

TEST_CASE("variable rule skips already active variables") {
    const std::vector<std::size_t> sizes{3};
    const auto G = GroupPartition::contiguous(sizes);
    const std::vector<double> grad{5, 5, 0};
    const auto spec = PenaltySpec::sgl(0.5, 3, 1);
    CHECK(dfr_variable_screen(grad, 1.0, 0.9, spec, G, {0}, {1}) == IndexSet{0});
}

TEST_CASE("kkt check examples") {
    const std::vector<std::size_t> sizes{2, 2};
    const auto G = GroupPartition::contiguous(sizes);
    const auto spec = PenaltySpec::sgl(1.0, 4, 2);
    CHECK(kkt_check(std::vector<double>(4, 0.0), 0.5, spec, G, {0, 1, 2, 3}).empty());
    const std::vector<double> grad{0.1, 0.75, 0.0, -0.2};
    CHECK(kkt_check(grad, 0.5, spec, G, {0, 1, 2, 3}) == IndexSet{1});
    CHECK(kkt_check(grad, 0.5, spec, G, {0, 2, 3}).empty());
}

TEST_CASE("complete kkt check flags zeros of active groups") {
    // Group {0,1} active with beta_0 != 0; coordinate 1 sits at zero with a
    // gradient above lambda alpha but below the soft-threshold test.
    const std::vector<std::size_t> sizes{2};
    const auto G = GroupPartition::contiguous(sizes);
    const auto spec = PenaltySpec::sgl(0.5, 2, 1);
    const std::vector<double> beta{1.0, 0.0}, grad{-0.9, 0.6};
    const double lam = 1.0;
    CHECK(kkt_check(grad, lam, spec, G, {1}).empty());
    CHECK(kkt_check_complete(grad, beta, lam, spec, G, {1}) == IndexSet{1});
}

TEST_CASE("converged full solution passes both checks") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto d = test::random_design(40, 60, 6, 600 + s);
        const auto spec = PenaltySpec::sgl(0.95, 60, 6);
        const double lam = 0.5 * path_start(d, spec, Family::linear);
        const auto res = fit_at(d, lam, spec, Family::linear, full_set(60), std::nullopt, tight());
        const auto grad = loss_and_gradient(d, res.beta, Family::linear).grad;
        const auto zeros = set_complement(active_vars(res.beta, 0.0), 60);
        CHECK(kkt_check(grad, lam, spec, d.groups, zeros).empty());
        CHECK(kkt_check_complete(grad, res.beta, lam, spec, d.groups, zeros).empty());
        CHECK(sparsegl_kkt_check(grad, lam, 0.95, d.groups, set_complement(active_groups(res.beta, d.groups), 6)).empty());
    }
}

TEST_CASE("strong rules contain the next active sets on small instances") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto d = test::random_design(40, 60, 6, 700 + s);
        const auto spec = PenaltySpec::sgl(0.95, 60, 6);
        const double l1 = path_start(d, spec, Family::linear);
        const double lk = 0.6 * l1, ln = 0.55 * l1;
        const auto prev = fit_at(d, lk, spec, Family::linear, full_set(60), std::nullopt, tight());
        const auto next = fit_at(d, ln, spec, Family::linear, full_set(60), std::nullopt, tight());
        const auto grad = loss_and_gradient(d, prev.beta, Family::linear).grad;
        const auto av_prev = active_vars(prev.beta);
        const auto cg = dfr_group_screen(grad, lk, ln, spec, d.groups, prev.beta);
        CHECK(contains(cg, active_groups(next.beta, d.groups)));
        const auto cv = dfr_variable_screen(grad, lk, ln, spec, d.groups, cg, av_prev);
        CHECK(contains(set_union(cv, av_prev), active_vars(next.beta)));
        const std::vector<double> grid{lk, ln};
        const auto sp = fit_path(d, spec, Family::linear, RuleKind::sparsegl, grid, tight());
        CHECK(test::max_abs_diff(sp.betas[1], next.beta) < 1e-6);
    }
}

TEST_CASE("gap safe rule examples and safety") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto d = test::random_design(40, 60, 6, 800 + s);
        const auto spec = PenaltySpec::sgl(0.95, 60, 6);
        const double l1 = path_start(d, spec, Family::linear);

        // At the path start with beta = 0 everything is zero; nothing to lose.
        const auto start = gap_safe_screen_sequential(d, std::vector<double>(60, 0.0), l1, 0.95, d.groups);
        CHECK(start.gap >= 0.0);

        const double lam = 0.4 * l1;
        const auto opt = fit_at(d, lam, spec, Family::linear, full_set(60), std::nullopt, tight());
        const auto at_opt = gap_safe_screen_sequential(d, opt.beta, lam, 0.95, d.groups);
        CHECK(at_opt.radius < 1e-3);
        CHECK(contains(at_opt.keep_vars, active_vars(opt.beta)));

        const auto prev = fit_at(d, 0.5 * l1, spec, Family::linear, full_set(60), std::nullopt, tight());
        const auto seq = gap_safe_screen_sequential(d, prev.beta, lam, 0.95, d.groups);
        CHECK(contains(seq.keep_vars, active_vars(opt.beta)));
        CHECK(contains(seq.keep_groups, active_groups(opt.beta, d.groups)));
    }
}

TEST_CASE("gap safe rejects bad input") {
    auto d = test::random_design(20, 10, 2, 9);
    CHECK_THROWS_AS(gap_safe_screen_sequential(d, std::vector<double>(3, 0.0), 0.1, 0.9, d.groups), std::domain_error);
    CHECK_THROWS_AS(gap_safe_screen_sequential(d, std::vector<double>(10, 0.0), 0.0, 0.9, d.groups), std::domain_error);
}

TEST_CASE("block spectral norms bound the columns") {
    auto d = test::random_design(30, 12, 3, 10);
    const auto norms = group_spectral_norms(d.X, d.groups);
    for (std::size_t g = 0; g < 3; ++g) {
        CHECK(norms[g] >= 1.0 - 1e-12);
        CHECK(norms[g] <= std::sqrt(double(d.groups.size(g))) + 1e-12);
    }
}

TEST_CASE("exact-gradient rules recover the active sets") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto d = test::random_design(60, 40, 4, 900 + s, Family::linear, true, 3.0);
        const auto spec = PenaltySpec::sgl(0.9, 40, 4);
        const double lam = 0.3 * path_start(d, spec, Family::linear);
        const auto res = fit_at(d, lam, spec, Family::linear, full_set(40), std::nullopt, tight());
        const auto grad = loss_and_gradient(d, res.beta, Family::linear).grad;
        const auto cg = theoretical_group_screen(grad, lam, spec, d.groups, res.beta, 1e-6);
        CHECK(cg == active_groups(res.beta, d.groups));
        CHECK(theoretical_variable_screen(grad, lam, spec, d.groups, cg) == active_vars(res.beta));
    }
}

}
