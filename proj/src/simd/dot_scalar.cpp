#include "eft.hpp"
#include "focir/simd/dot.hpp"

namespace focir::simd::scalar {

double dot_compensated(const double* a, const double* b, std::size_t n) noexcept {
    double p = 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) detail::dot2_step(a[i], b[i], p, c);
    return p + c;
}

}  // namespace focir::simd::scalar
