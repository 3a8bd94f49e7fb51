#pragma once

// Data-parallel inner loops used by the measure, staircase and quadrature
// code. Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The variant is picked once at first use from CPUID; setting
// FRACTAL_CALC_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace fractal::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b) noexcept;

/// Backend used by the dispatching entry points below.
Backend active_backend() noexcept;

/// True when `b` can run on this machine.
bool backend_available(Backend b) noexcept;

/// Compensated sum of xs.
double sum(std::span<const double> xs, Backend b);

/// out[i] = x[i]^alpha for x[i] > 0, 0 otherwise. alpha > 0.
void pow_map(std::span<const double> x, double alpha, std::span<double> out, Backend b);

/// Compensated sum of x[i]^alpha over x[i] > 0. alpha > 0.
double pow_sum(std::span<const double> x, double alpha, Backend b);

/// Left-endpoint Stieltjes sum: sum_i f[i] * (s[i+1] - s[i]).
/// Requires s.size() == f.size() + 1.
double stieltjes_sum(std::span<const double> f, std::span<const double> s, Backend b);

inline double sum(std::span<const double> xs) { return sum(xs, active_backend()); }
inline void pow_map(std::span<const double> x, double alpha, std::span<double> out) {
    pow_map(x, alpha, out, active_backend());
}
inline double pow_sum(std::span<const double> x, double alpha) {
    return pow_sum(x, alpha, active_backend());
}
inline double stieltjes_sum(std::span<const double> f, std::span<const double> s) {
    return stieltjes_sum(f, s, active_backend());
}

namespace scalar {
double sum(std::span<const double> xs);
void pow_map(std::span<const double> x, double alpha, std::span<double> out);
double pow_sum(std::span<const double> x, double alpha);
double stieltjes_sum(std::span<const double> f, std::span<const double> s);
}  // namespace scalar

#if defined(FRACTAL_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> xs);
void pow_map(std::span<const double> x, double alpha, std::span<double> out);
double pow_sum(std::span<const double> x, double alpha);
double stieltjes_sum(std::span<const double> f, std::span<const double> s);
}  // namespace avx2
#endif

}  // namespace fractal::kernels
