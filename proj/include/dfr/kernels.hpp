#pragma once

// Dense vector kernels used by the solver and screening inner loops.
//
// Every kernel has a portable scalar reference implementation; an AVX2/FMA
// variant is compiled in on x86-64 and selected at runtime when the CPU
// supports it. The two backends agree up to floating-point reassociation.

#include <cstddef>
#include <span>
#include <string_view>

namespace dfr::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b);

/// True when the backend was compiled in and the running CPU supports it.
bool backend_available(Backend b);

/// Backend used by the free functions below. Defaults to the fastest available.
Backend active_backend();

/// Forces a backend; throws std::invalid_argument if it is unavailable.
void set_backend(Backend b);

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum_sq)(const double* a, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out[i] = a * x[i] + b * y[i]
    void (*axpby)(double a, const double* x, double b, const double* y, double* out,
                  std::size_t n);
    // sum_i (x[i] - y[i])^2
    double (*dist_sq)(const double* x, const double* y, std::size_t n);
};

const KernelTable& table(Backend b);
const KernelTable& table();

inline double dot(std::span<const double> a, std::span<const double> b) {
    return table().dot(a.data(), b.data(), a.size());
}
inline double sum_sq(std::span<const double> a) { return table().sum_sq(a.data(), a.size()); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    table().axpy(alpha, x.data(), y.data(), x.size());
}
inline void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
                  std::span<double> out) {
    table().axpby(a, x.data(), b, y.data(), out.data(), x.size());
}
inline double dist_sq(std::span<const double> x, std::span<const double> y) {
    return table().dist_sq(x.data(), y.data(), x.size());
}

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
double dist_sq(const double* x, const double* y, std::size_t n);
} // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
double dist_sq(const double* x, const double* y, std::size_t n);
} // namespace avx2

} // namespace dfr::kernels
