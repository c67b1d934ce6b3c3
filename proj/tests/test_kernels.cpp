#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

#include "dfr/kernels.hpp"
#include "dfr/solver.hpp"
#include "support.hpp"

using namespace dfr;
using kernels::Backend;

TEST_SUITE("kernels") {

TEST_CASE("scalar backend is always available and selectable") {
    CHECK(kernels::backend_available(Backend::scalar));
    const auto before = kernels::active_backend();
    kernels::set_backend(Backend::scalar);
    CHECK(kernels::active_backend() == Backend::scalar);
    kernels::set_backend(before);
}

TEST_CASE("avx2 matches the scalar reference on every length") {
    if (!kernels::backend_available(Backend::avx2)) {
        MESSAGE("avx2 not available on this machine; skipped");
        return;
    }
    const auto& S = kernels::table(Backend::scalar);
    const auto& A = kernels::table(Backend::avx2);
    std::mt19937_64 rng(7);
    for (std::size_t n = 0; n <= 67; ++n) {
        auto x = test::normal_vector(n, rng), y = test::normal_vector(n, rng);
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]) + x[i] * x[i] + y[i] * y[i];
        const double tol = 1e-14 * (scale + 1.0);
        CHECK(std::abs(S.dot(x.data(), y.data(), n) - A.dot(x.data(), y.data(), n)) <= tol);
        CHECK(std::abs(S.sum_sq(x.data(), n) - A.sum_sq(x.data(), n)) <= tol);
        CHECK(std::abs(S.dist_sq(x.data(), y.data(), n) - A.dist_sq(x.data(), y.data(), n)) <= 4 * tol);

        auto y1 = y, y2 = y;
        S.axpy(0.37, x.data(), y1.data(), n);
        A.axpy(0.37, x.data(), y2.data(), n);
        CHECK(test::max_abs_diff(y1, y2) <= 1e-15 * 8);

        std::vector<double> o1(n), o2(n);
        S.axpby(1.3, x.data(), -0.4, y.data(), o1.data(), n);
        A.axpby(1.3, x.data(), -0.4, y.data(), o2.data(), n);
        CHECK(test::max_abs_diff(o1, o2) <= 1e-15 * 16);
    }
}

TEST_CASE("avx2 kernels handle unaligned offsets") {
    if (!kernels::backend_available(Backend::avx2)) return;
    std::mt19937_64 rng(11);
    auto buf = test::normal_vector(203, rng);
    const auto& S = kernels::table(Backend::scalar);
    const auto& A = kernels::table(Backend::avx2);
    for (std::size_t off = 0; off < 4; ++off) {
        const double* p = buf.data() + off;
        const double* q = buf.data() + 100 + off;
        CHECK(S.dot(p, q, 99) == doctest::Approx(A.dot(p, q, 99)).epsilon(1e-13));
        CHECK(S.sum_sq(p, 99) == doctest::Approx(A.sum_sq(p, 99)).epsilon(1e-13));
    }
}

TEST_CASE("solver output agrees across backends") {
    if (!kernels::backend_available(Backend::avx2)) return;
    const auto before = kernels::active_backend();
    auto d = test::random_design(40, 30, 5, 3);
    const auto spec = PenaltySpec::sgl(0.9, d.p(), d.m());
    const auto ws = full_set(d.p());
    FitConfig cfg;
    cfg.tol = 1e-9;
    cfg.max_iter = 50000;
    kernels::set_backend(Backend::scalar);
    const auto s = fit_at(d, 0.02, spec, Family::linear, ws, std::nullopt, cfg);
    kernels::set_backend(Backend::avx2);
    const auto a = fit_at(d, 0.02, spec, Family::linear, ws, std::nullopt, cfg);
    kernels::set_backend(before);
    CHECK(s.converged);
    CHECK(a.converged);
    CHECK(test::max_abs_diff(s.beta, a.beta) < 1e-7);
}

TEST_CASE("unknown backend request throws") {
    if (kernels::backend_available(Backend::avx2)) return;
    CHECK_THROWS_AS(kernels::set_backend(Backend::avx2), std::invalid_argument);
}

}
