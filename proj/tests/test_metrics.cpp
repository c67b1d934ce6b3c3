#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "dfr/metrics.hpp"
#include "support.hpp"

using namespace dfr;

TEST_SUITE("metrics") {

TEST_CASE("timer names") {
    CHECK(parse_timer("wall") == Timer::wall);
    CHECK(parse_timer("work") == Timer::work);
    CHECK(timer_name(Timer::work) == "work");
    CHECK_THROWS_AS(parse_timer("cpu"), std::invalid_argument);
}

TEST_CASE("self comparison") {
    auto d = test::random_design(40, 60, 6, 81);
    const auto spec = PenaltySpec::sgl(0.95, 60, 6);
    const auto base = fit_path(d, spec, Family::linear, RuleKind::none, {10, 0.1}, FitConfig{});
    for (Timer t : {Timer::wall, Timer::work}) {
        const auto m = compute_metrics(base, base, d, t);
        CHECK(m.improvement_factor == 1.0);
        CHECK(m.l2_to_noscreen == 0.0);
        CHECK(m.l2_max == 0.0);
        CHECK(m.input_prop_vars == 1.0);
        CHECK(m.input_prop_groups == 1.0);
        CHECK(m.kkt_violations_total == 0);
    }
}

TEST_CASE("screened run against the baseline") {
    auto d = test::random_design(50, 200, 20, 82);
    const auto spec = PenaltySpec::sgl(0.95, 200, 20);
    const PathConfig pc{20, 0.1};
    const auto base = fit_path(d, spec, Family::linear, RuleKind::none, pc, FitConfig{});
    const auto scr = fit_path(d, spec, Family::linear, RuleKind::dfr_sgl, pc, FitConfig{});
    const auto m = compute_metrics(scr, base, d, Timer::work);
    CHECK(m.improvement_factor == doctest::Approx(base.total_work() / scr.total_work()));
    CHECK(m.improvement_factor > 1.0);
    CHECK(m.input_prop_vars < 1.0);
    CHECK(m.input_prop_vars > 0.0);
    CHECK(m.card_Ov.size() == 20);
    double mean = 0;
    for (std::size_t k = 1; k < 20; ++k) mean += m.card_Ov[k] / 200.0;
    CHECK(m.input_prop_vars == doctest::Approx(mean / 19).epsilon(1e-14));
    for (std::size_t k = 0; k < 20; ++k) {
        CHECK(m.card_Ov[k] >= m.card_Av[k]);
        CHECK(m.card_Og[k] <= 20);
    }
    CHECK(m.efficiency_vars >= 1.0);
    CHECK(m.l2_max >= m.l2_to_noscreen);
}

TEST_CASE("grid mismatch is rejected") {
    auto d = test::random_design(30, 20, 4, 83);
    const auto spec = PenaltySpec::sgl(0.95, 20, 4);
    const auto a = fit_path(d, spec, Family::linear, RuleKind::none, {5, 0.1}, FitConfig{});
    const auto b = fit_path(d, spec, Family::linear, RuleKind::none, {6, 0.1}, FitConfig{});
    const auto c = fit_path(d, spec, Family::linear, RuleKind::none, {5, 0.2}, FitConfig{});
    CHECK_THROWS_AS(compute_metrics(a, b, d), std::domain_error);
    CHECK_THROWS_AS(compute_metrics(a, c, d), std::domain_error);
}

TEST_CASE("mean and standard error") {
    const std::vector<double> v{1, 2, 3, 4};
    const auto s = mean_se(v);
    CHECK(s.mean == 2.5);
    CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-15));
    const std::vector<double> one{7};
    CHECK(mean_se(one).se == 0.0);
    CHECK(mean_se(one).mean == 7.0);
}

}
