#include "focir/simd/dot.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

#include "eft.hpp"

namespace focir::simd::neon {

bool compiled() noexcept { return true; }

namespace {

struct Acc {
    float64x2_t p = vdupq_n_f64(0.0);
    float64x2_t s = vdupq_n_f64(0.0);
};

inline void accumulate(Acc& acc, float64x2_t x, float64x2_t y) noexcept {
    const float64x2_t h = vmulq_f64(x, y);
    // fma(x, y, -h): exact residual of the product.
    const float64x2_t r = vfmaq_f64(vnegq_f64(h), x, y);
    const float64x2_t sum = vaddq_f64(acc.p, h);
    const float64x2_t bb = vsubq_f64(sum, acc.p);
    const float64x2_t q = vaddq_f64(vsubq_f64(acc.p, vsubq_f64(sum, bb)), vsubq_f64(h, bb));
    acc.p = sum;
    acc.s = vaddq_f64(acc.s, vaddq_f64(q, r));
}

}  // namespace

double dot_compensated(const double* a, const double* b, std::size_t n) noexcept {
    Acc acc[4];
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        accumulate(acc[0], vld1q_f64(a + i), vld1q_f64(b + i));
        accumulate(acc[1], vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        accumulate(acc[2], vld1q_f64(a + i + 4), vld1q_f64(b + i + 4));
        accumulate(acc[3], vld1q_f64(a + i + 6), vld1q_f64(b + i + 6));
    }
    for (; i + 2 <= n; i += 2) {
        accumulate(acc[0], vld1q_f64(a + i), vld1q_f64(b + i));
    }

    double sums[8];
    double comps[8];
    for (int k = 0; k < 4; ++k) {
        vst1q_f64(sums + 2 * k, acc[k].p);
        vst1q_f64(comps + 2 * k, acc[k].s);
    }
    return detail::finish(sums, comps, 8, a + i, b + i, n - i);
}

}  // namespace focir::simd::neon

#else

namespace focir::simd::neon {
bool compiled() noexcept { return false; }
double dot_compensated(const double* a, const double* b, std::size_t n) noexcept {
    return scalar::dot_compensated(a, b, n);
}
}  // namespace focir::simd::neon

#endif
