#pragma once

#include <cstddef>
#include <string_view>

// Small dense reductions used by quadrature sums, series evaluation and the
// normal-equation assembly. A scalar reference and an AVX2/FMA variant exist;
// the variant is picked once at startup from CPUID and can be pinned for tests.
namespace fracrecon::kernels {

enum class Backend { Scalar, Avx2 };

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept;
double sum_scalar(const double* a, std::size_t n) noexcept;

#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* a, const double* b, std::size_t n) noexcept;
double sum_avx2(const double* a, std::size_t n) noexcept;
#endif

bool avx2_available() noexcept;

Backend active_backend() noexcept;

// Returns false (and leaves the backend unchanged) if Avx2 is requested on a CPU without it.
bool set_backend(Backend b) noexcept;

std::string_view backend_name(Backend b) noexcept;

double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;

}  // namespace fracrecon::kernels
