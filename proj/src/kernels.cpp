#include "fracrecon/kernels.hpp"

#include <atomic>

namespace fracrecon::kernels {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
    // Four independent accumulators: same association as the vector path.
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    double s = (s0 + s2) + (s1 + s3);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_scalar(const double* a, std::size_t n) noexcept {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i];
        s1 += a[i + 1];
        s2 += a[i + 2];
        s3 += a[i + 3];
    }
    double s = (s0 + s2) + (s1 + s3);
    for (; i < n; ++i) s += a[i];
    return s;
}

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t) noexcept;
using SumFn = double (*)(const double*, std::size_t) noexcept;

struct Table {
    DotFn dot;
    SumFn sum;
};

bool detect_avx2() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Table table_for(Backend b) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    if (b == Backend::Avx2) return {dot_avx2, sum_avx2};
#endif
    (void)b;
    return {dot_scalar, sum_scalar};
}

std::atomic<int>& backend_slot() noexcept {
    static std::atomic<int> slot{static_cast<int>(detect_avx2() ? Backend::Avx2 : Backend::Scalar)};
    return slot;
}

}  // namespace

bool avx2_available() noexcept {
    static const bool ok = detect_avx2();
    return ok;
}

Backend active_backend() noexcept { return static_cast<Backend>(backend_slot().load(std::memory_order_relaxed)); }

bool set_backend(Backend b) noexcept {
    if (b == Backend::Avx2 && !avx2_available()) return false;
    backend_slot().store(static_cast<int>(b), std::memory_order_relaxed);
    return true;
}

std::string_view backend_name(Backend b) noexcept { return b == Backend::Avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) noexcept { return table_for(active_backend()).dot(a, b, n); }

double sum(const double* a, std::size_t n) noexcept { return table_for(active_backend()).sum(a, n); }

}  // namespace fracrecon::kernels
