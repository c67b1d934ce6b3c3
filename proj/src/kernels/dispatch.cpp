#include <atomic>
#include <stdexcept>
#include <string>

#include "dfr/kernels.hpp"

namespace dfr::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::dot, &scalar::sum_sq, &scalar::axpy, &scalar::axpby,
                              &scalar::dist_sq};
#ifdef DFR_HAVE_AVX2
constexpr KernelTable kAvx2{&avx2::dot, &avx2::sum_sq, &avx2::axpy, &avx2::axpby,
                            &avx2::dist_sq};
#endif

bool cpu_has_avx2() {
#if defined(DFR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{detect()};
    return b;
}

} // namespace

std::string_view backend_name(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    static const bool has = cpu_has_avx2();
    return has;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_available(b))
        throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(b)));
    current().store(b, std::memory_order_relaxed);
}

const KernelTable& table(Backend b) {
#ifdef DFR_HAVE_AVX2
    if (b == Backend::avx2) return kAvx2;
#else
    (void)b;
#endif
    return kScalar;
}

const KernelTable& table() { return table(active_backend()); }

} // namespace dfr::kernels
