#include "fractal/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace fractal::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(FRACTAL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend select_backend() noexcept {
    if (const char* env = std::getenv("FRACTAL_CALC_SIMD"); env && std::string_view(env) == "scalar")
        return Backend::scalar;
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::avx2: return "avx2";
        case Backend::scalar: return "scalar";
    }
    return "scalar";
}

Backend active_backend() noexcept {
    static const Backend chosen = select_backend();
    return chosen;
}

bool backend_available(Backend b) noexcept {
    if (b == Backend::scalar) return true;
    static const bool avx2 = cpu_has_avx2();
    return avx2;
}

#if defined(FRACTAL_HAVE_AVX2)
#define FRACTAL_DISPATCH(call)                                    \
    if (b == Backend::avx2 && backend_available(Backend::avx2)) \
        return avx2::call;                                        \
    return scalar::call
#else
#define FRACTAL_DISPATCH(call) return scalar::call
#endif

double sum(std::span<const double> xs, Backend b) { FRACTAL_DISPATCH(sum(xs)); }

void pow_map(std::span<const double> x, double alpha, std::span<double> out, Backend b) {
    FRACTAL_DISPATCH(pow_map(x, alpha, out));
}

double pow_sum(std::span<const double> x, double alpha, Backend b) {
    FRACTAL_DISPATCH(pow_sum(x, alpha));
}

double stieltjes_sum(std::span<const double> f, std::span<const double> s, Backend b) {
    FRACTAL_DISPATCH(stieltjes_sum(f, s));
}

#undef FRACTAL_DISPATCH

}  // namespace fractal::kernels
