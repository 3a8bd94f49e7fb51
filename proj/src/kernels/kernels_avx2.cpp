// Compiled with -mavx2 -mfma -ffp-contract=off; only reached after the
// dispatcher has confirmed AVX2+FMA at runtime.

#include "fractal/kernels.hpp"

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstdint>

namespace fractal::kernels::avx2 {

namespace {

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Per-lane Kahan accumulator.
struct KahanLanes {
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();

    void add(__m256d x) {
        const __m256d y = _mm256_sub_pd(x, comp);
        const __m256d t = _mm256_add_pd(sum, y);
        comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
        sum = t;
    }

    void drain_into(Neumaier& acc) const {
        alignas(32) double s[4];
        alignas(32) double c[4];
        _mm256_store_pd(s, sum);
        _mm256_store_pd(c, comp);
        for (int k = 0; k < 4; ++k) {
            acc.add(s[k]);
            acc.add(-c[k]);
        }
    }
};

inline __m256d polevl(__m256d x, const double* coef, int degree) {
    __m256d r = _mm256_set1_pd(coef[0]);
    for (int i = 1; i <= degree; ++i) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(coef[i]));
    return r;
}

// Leading coefficient 1 is implied.
inline __m256d p1evl(__m256d x, const double* coef, int degree) {
    __m256d r = _mm256_add_pd(x, _mm256_set1_pd(coef[0]));
    for (int i = 1; i < degree; ++i) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(coef[i]));
    return r;
}

// Natural log for normal, finite, positive lanes (Cephes rational form).
__m256d log_pd(__m256d x) {
    static constexpr double P[] = {
        1.01875663804580931796E-4, 4.97494994976747001425E-1, 4.70579119878881725854E0,
        1.44989225341610930846E1,  1.79368678507819816313E1,  7.70838733755885391666E0,
    };
    static constexpr double Q[] = {
        1.12873587189167450590E1, 4.52279145837532221105E1, 8.29875266912776603211E1,
        7.11544750618563894466E1, 2.31251620126765340583E1,
    };

    const __m256i bits = _mm256_castpd_si256(x);
    // Biased exponent converted to double through the 2^52 trick.
    const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
    const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_castpd_si256(two52))), two52);
    e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));

    // Mantissa in [0.5, 1).
    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
    const __m256i half_bits = _mm256_set1_epi64x(0x3fe0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

    const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d lt = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(lt, one));
    // x = 2m - 1 when m < sqrt(1/2), else m - 1.
    m = _mm256_add_pd(m, _mm256_and_pd(lt, m));
    const __m256d xr = _mm256_sub_pd(m, one);

    const __m256d z = _mm256_mul_pd(xr, xr);
    __m256d y = _mm256_mul_pd(xr, _mm256_div_pd(_mm256_mul_pd(z, polevl(xr, P, 5)), p1evl(xr, Q, 5)));
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
    __m256d r = _mm256_add_pd(xr, y);
    r = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
    return r;
}

// exp for lanes with |x| <= 700 (Cephes Pade form).
__m256d exp_pd(__m256d x) {
    static constexpr double P[] = {
        1.26177193074810590878E-4, 3.02994407707441961300E-2, 9.99999999999999999910E-1,
    };
    static constexpr double Q[] = {
        3.00198505138664455042E-6, 2.52448340349684104192E-3,
        2.27265548208155028766E-1, 2.00000000000000000009E0,
    };
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125E-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212E-6);

    const __m256d n = _mm256_floor_pd(_mm256_fmadd_pd(log2e, x, _mm256_set1_pd(0.5)));
    x = _mm256_fnmadd_pd(n, c1, x);
    x = _mm256_fnmadd_pd(n, c2, x);
    const __m256d xx = _mm256_mul_pd(x, x);
    const __m256d px = _mm256_mul_pd(x, polevl(xx, P, 2));
    __m256d r = _mm256_div_pd(px, _mm256_sub_pd(polevl(xx, Q, 3), px));
    r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

    const __m128i ni = _mm256_cvtpd_epi32(n);
    const __m256i biased = _mm256_add_epi64(_mm256_cvtepi32_epi64(ni), _mm256_set1_epi64x(1023));
    const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
    return _mm256_mul_pd(r, scale);
}

// Computes x^alpha for one block of four lanes. Returns false when the block
// has lanes the vector path does not cover (subnormal, non-finite, or an
// exponent argument outside +-700); the caller then uses std::pow.
inline bool pow_block(__m256d x, __m256d alpha, __m256d& out) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d positive = _mm256_cmp_pd(x, zero, _CMP_GT_OQ);
    const __m256d tiny = _mm256_cmp_pd(x, _mm256_set1_pd(DBL_MIN), _CMP_LT_OQ);
    const __m256d huge = _mm256_cmp_pd(x, _mm256_set1_pd(DBL_MAX), _CMP_NLE_UQ);
    const __m256d bad = _mm256_or_pd(_mm256_and_pd(positive, tiny), huge);
    if (_mm256_movemask_pd(bad) != 0) return false;

    const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), x, positive);
    const __m256d arg = _mm256_mul_pd(alpha, log_pd(safe));
    const __m256d abs_arg = _mm256_andnot_pd(_mm256_set1_pd(-0.0), arg);
    if (_mm256_movemask_pd(_mm256_cmp_pd(abs_arg, _mm256_set1_pd(700.0), _CMP_GT_OQ)) != 0)
        return false;
    out = _mm256_and_pd(positive, exp_pd(arg));
    return true;
}

}  // namespace

double sum(std::span<const double> xs) {
    KahanLanes lanes;
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) lanes.add(_mm256_loadu_pd(xs.data() + i));
    Neumaier acc;
    lanes.drain_into(acc);
    for (; i < xs.size(); ++i) acc.add(xs[i]);
    return acc.value();
}

void pow_map(std::span<const double> x, double alpha, std::span<double> out) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) {
        __m256d r;
        if (pow_block(_mm256_loadu_pd(x.data() + i), a, r)) {
            _mm256_storeu_pd(out.data() + i, r);
        } else {
            for (std::size_t k = i; k < i + 4; ++k) out[k] = x[k] > 0.0 ? std::pow(x[k], alpha) : 0.0;
        }
    }
    for (; i < x.size(); ++i) out[i] = x[i] > 0.0 ? std::pow(x[i], alpha) : 0.0;
}

double pow_sum(std::span<const double> x, double alpha) {
    const __m256d a = _mm256_set1_pd(alpha);
    KahanLanes lanes;
    Neumaier acc;
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) {
        __m256d r;
        if (pow_block(_mm256_loadu_pd(x.data() + i), a, r)) {
            lanes.add(r);
        } else {
            for (std::size_t k = i; k < i + 4; ++k)
                if (x[k] > 0.0) acc.add(std::pow(x[k], alpha));
        }
    }
    lanes.drain_into(acc);
    for (; i < x.size(); ++i)
        if (x[i] > 0.0) acc.add(std::pow(x[i], alpha));
    return acc.value();
}

double stieltjes_sum(std::span<const double> f, std::span<const double> s) {
    KahanLanes lanes;
    std::size_t i = 0;
    for (; i + 4 <= f.size(); i += 4) {
        const __m256d fv = _mm256_loadu_pd(f.data() + i);
        const __m256d lo = _mm256_loadu_pd(s.data() + i);
        const __m256d hi = _mm256_loadu_pd(s.data() + i + 1);
        lanes.add(_mm256_mul_pd(fv, _mm256_sub_pd(hi, lo)));
    }
    Neumaier acc;
    lanes.drain_into(acc);
    for (; i < f.size(); ++i) acc.add(f[i] * (s[i + 1] - s[i]));
    return acc.value();
}

}  // namespace fractal::kernels::avx2
