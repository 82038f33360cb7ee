#include "focir/simd/dot.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

#include "eft.hpp"

namespace focir::simd::avx2 {

bool compiled() noexcept { return true; }

namespace {

struct Acc {
    __m256d p = _mm256_setzero_pd();
    __m256d s = _mm256_setzero_pd();
};

inline void accumulate(Acc& acc, __m256d x, __m256d y) noexcept {
    const __m256d h = _mm256_mul_pd(x, y);
    const __m256d r = _mm256_fmsub_pd(x, y, h);
    const __m256d sum = _mm256_add_pd(acc.p, h);
    const __m256d bb = _mm256_sub_pd(sum, acc.p);
    const __m256d q =
        _mm256_add_pd(_mm256_sub_pd(acc.p, _mm256_sub_pd(sum, bb)), _mm256_sub_pd(h, bb));
    acc.p = sum;
    acc.s = _mm256_add_pd(acc.s, _mm256_add_pd(q, r));
}

}  // namespace

double dot_compensated(const double* a, const double* b, std::size_t n) noexcept {
    // Four independent accumulators hide the TwoSum dependency chain.
    Acc acc[4];
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        accumulate(acc[0], _mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        accumulate(acc[1], _mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        accumulate(acc[2], _mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8));
        accumulate(acc[3], _mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12));
    }
    for (; i + 4 <= n; i += 4) {
        accumulate(acc[0], _mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    }

    alignas(32) double sums[16];
    alignas(32) double comps[16];
    for (int k = 0; k < 4; ++k) {
        _mm256_store_pd(sums + 4 * k, acc[k].p);
        _mm256_store_pd(comps + 4 * k, acc[k].s);
    }
    return detail::finish(sums, comps, 16, a + i, b + i, n - i);
}

}  // namespace focir::simd::avx2

#else

namespace focir::simd::avx2 {
bool compiled() noexcept { return false; }
double dot_compensated(const double* a, const double* b, std::size_t n) noexcept {
    return scalar::dot_compensated(a, b, n);
}
}  // namespace focir::simd::avx2

#endif
