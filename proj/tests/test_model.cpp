#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dfr/model.hpp"
#include "dfr/norms.hpp"
#include "support.hpp"

using namespace dfr;

namespace {

double fd_rel_error(const GroupedDesign& d, Family fam, std::mt19937_64& rng) {
    const auto beta = test::normal_vector(d.p(), rng, 0.5);
    const auto lg = loss_and_gradient(d, beta, fam);
    const double h = 1e-6;
    double num = 0, den = 0;
    for (std::size_t j = 0; j < d.p(); ++j) {
        auto bp = beta, bm = beta;
        bp[j] += h;
        bm[j] -= h;
        const double fd = (loss_and_gradient(d, bp, fam).value - loss_and_gradient(d, bm, fam).value) / (2 * h);
        num += (fd - lg.grad[j]) * (fd - lg.grad[j]);
        den += lg.grad[j] * lg.grad[j];
    }
    return std::sqrt(num / den);
}

// Prox of sum_i a_i |u_i| + c2 ||u||_2 by Dykstra's splitting, which only
// needs the two separate proxes.
Eigen::VectorXd dykstra_prox(const Eigen::VectorXd& z, const Eigen::VectorXd& a, double c2) {
    const long d = z.size();
    Eigen::VectorXd x = z, p = Eigen::VectorXd::Zero(d), q = Eigen::VectorXd::Zero(d), y(d);
    for (int it = 0; it < 200000; ++it) {
        const Eigen::VectorXd w = x + p;
        const double nw = w.norm();
        y = nw <= c2 ? Eigen::VectorXd::Zero(d) : Eigen::VectorXd(w * (1 - c2 / nw));
        p = w - y;
        const Eigen::VectorXd v = y + q;
        Eigen::VectorXd xn(d);
        for (long i = 0; i < d; ++i) xn[i] = soft_threshold(v[i], a[i]);
        q = v - xn;
        const double delta = (xn - x).norm();
        x = xn;
        if (delta < 1e-15 && (x - y).norm() < 1e-13) break;
    }
    return x;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("family names round trip") {
    CHECK(parse_family("linear") == Family::linear);
    CHECK(parse_family("logistic") == Family::logistic);
    CHECK(family_name(Family::logistic) == "logistic");
    CHECK_THROWS(parse_family("poisson"));
}

TEST_CASE("gradient at zero, linear") {
    auto d = test::random_design(30, 12, 3, 1);
    const auto lg = loss_and_gradient(d, std::vector<double>(12, 0.0), Family::linear);
    for (std::size_t j = 0; j < 12; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < 30; ++i) s += d.X(i, j) * d.y[i];
        CHECK(lg.grad[j] == doctest::Approx(-s / 30).epsilon(1e-12));
    }
}

TEST_CASE("gradient at zero, logistic") {
    auto d = test::random_design(30, 12, 3, 2, Family::logistic);
    const auto lg = loss_and_gradient(d, std::vector<double>(12, 0.0), Family::logistic);
    for (std::size_t j = 0; j < 12; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < 30; ++i) s += d.X(i, j) * (0.5 - d.y[i]);
        CHECK(lg.grad[j] == doctest::Approx(s / 30).epsilon(1e-12));
    }
    CHECK(lg.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("gradients match central differences") {
    std::mt19937_64 rng(99);
    for (Family fam : {Family::linear, Family::logistic}) {
        for (int t = 0; t < 20; ++t) {
            auto d = test::random_design(25, 15, 3, 100 + t, fam);
            CHECK(fd_rel_error(d, fam, rng) < 1e-5);
        }
    }
}

TEST_CASE("loss and gradient reject mismatched beta") {
    auto d = test::random_design(10, 6, 2, 4);
    CHECK_THROWS_AS(loss_and_gradient(d, std::vector<double>(5, 0.0), Family::linear), std::domain_error);
}

TEST_CASE("stable logistic helpers") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
    CHECK(softplus(800.0) == 800.0);
    CHECK(softplus(-800.0) >= 0.0);
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(sigmoid(800.0) == 1.0);
}

TEST_CASE("prox examples") {
    const std::vector<std::size_t> sizes{2, 2};
    const auto G = GroupPartition::contiguous(sizes);
    const auto spec = PenaltySpec::sgl(0.5, 4, 2);
    const std::vector<double> z{1.0, -2.0, 0.3, 0.1};
    CHECK(sgl_prox(z, 1.0, 0.0, G, spec) == z);
    const auto tiny = sgl_prox(std::vector<double>{0.1, -0.1, 0.05, 0.0}, 1.0, 1.0, G, spec);
    for (double x : tiny) CHECK(x == 0.0);
}

TEST_CASE("prox matches a direct minimization") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0.05, 1.5), W(0.5, 2.0);
    for (int t = 0; t < 100; ++t) {
        const std::vector<std::size_t> sizes{3};
        const auto G = GroupPartition::contiguous(sizes);
        const auto z = test::normal_vector(3, rng, 2.0);
        const double alpha = std::uniform_real_distribution<double>(0, 1)(rng);
        const double step = U(rng), lambda = U(rng);
        std::vector<double> v{W(rng), W(rng), W(rng)};
        const double w = W(rng);
        const auto spec = PenaltySpec::asgl(alpha, v, {w});
        const auto got = sgl_prox(z, step, lambda, G, spec);
        Eigen::VectorXd ez(3), ea(3);
        for (int i = 0; i < 3; ++i) ez[i] = z[i], ea[i] = step * lambda * alpha * v[i];
        const auto ref = dykstra_prox(ez, ea, step * lambda * (1 - alpha) * w * std::sqrt(3.0));
        for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-6);
    }
}

TEST_CASE("standardize examples") {
    GroupedDesign d;
    d.X = Matrix(4, 2);
    for (int i = 0; i < 4; ++i) d.X(i, 0) = 2.0, d.X(i, 1) = i == 0 ? 1.0 : 0.0;
    d.y = {1, 2, 3, 4};
    const std::vector<std::size_t> sizes{2};
    d.groups = GroupPartition::contiguous(sizes);
    const auto s = standardize(d, Family::linear, false);
    for (int i = 0; i < 4; ++i) CHECK(s.X(i, 0) == 0.5);
    CHECK(s.X(0, 1) == 1.0);
    CHECK(s.column_scales[0] == 4.0);
    CHECK(s.y == d.y);

    // Centering makes the constant column vanish.
    try {
        standardize(d, Family::linear, true);
        FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("0") != std::string::npos);
    }
}

TEST_CASE("standardize gives unit columns and centered data") {
    std::mt19937_64 rng(6);
    GroupedDesign d;
    d.X = Matrix(20, 8);
    for (std::size_t j = 0; j < 8; ++j)
        for (std::size_t i = 0; i < 20; ++i) d.X(i, j) = 3.0 + 2.0 * std::normal_distribution<double>()(rng);
    d.y = test::normal_vector(20, rng);
    const std::vector<std::size_t> sizes{4, 4};
    d.groups = GroupPartition::contiguous(sizes);
    const auto s = standardize(d, Family::linear, true);
    double ysum = 0;
    for (double v : s.y) ysum += v;
    CHECK(std::abs(ysum) < 1e-12);
    for (std::size_t j = 0; j < 8; ++j) {
        double ss = 0, sum = 0;
        for (std::size_t i = 0; i < 20; ++i) ss += s.X(i, j) * s.X(i, j), sum += s.X(i, j);
        CHECK(std::abs(std::sqrt(ss) - 1.0) < 1e-12);
        CHECK(std::abs(sum) < 1e-12);
    }
    CHECK(s.standardized);
}

TEST_CASE("design validation") {
    auto d = test::random_design(10, 6, 2, 4);
    d.y.pop_back();
    CHECK_THROWS_AS(d.validate(), std::domain_error);
}

}
