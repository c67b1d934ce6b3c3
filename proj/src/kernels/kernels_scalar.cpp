#include "dfr/kernels.hpp"

namespace dfr::kernels::scalar {

// Four independent accumulators keep the reference path reasonably fast
// without relying on the compiler to reassociate.
double dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

double sum_sq(const double* a, std::size_t n) { return dot(a, a, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

double dist_sq(const double* x, const double* y, std::size_t n) {
    double s0 = 0.0, s1 = 0.0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const double d0 = x[i] - y[i];
        const double d1 = x[i + 1] - y[i + 1];
        s0 += d0 * d0;
        s1 += d1 * d1;
    }
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s0 += d * d;
    }
    return s0 + s1;
}

} // namespace dfr::kernels::scalar
