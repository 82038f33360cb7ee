#pragma once

// Compensated dot-product kernels used by the history convolution of the
// fractional-order simulator. Every variant implements the Dot2 scheme
// (error-free product via FMA + TwoSum accumulation), so results agree with
// the scalar reference to a few ulps of the exact sum independent of
// summation order.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace focir::simd {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view to_string(Isa isa) noexcept;

/// Every variant compiled in and supported by the running CPU.
[[nodiscard]] std::vector<Isa> available_isas();

/// Best available variant; honours FOCIR_SIMD=scalar for debugging.
[[nodiscard]] Isa active_isa();

/// Compensated sum of a[i] * b[i]. Sizes must match (DimensionError otherwise).
[[nodiscard]] double dot_compensated(std::span<const double> a, std::span<const double> b);

/// Same, pinned to one variant. Throws std::invalid_argument if `isa` is not available.
[[nodiscard]] double dot_compensated(Isa isa, std::span<const double> a,
                                     std::span<const double> b);

namespace scalar {
double dot_compensated(const double* a, const double* b, std::size_t n) noexcept;
}

namespace avx2 {
bool compiled() noexcept;
double dot_compensated(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace avx2

namespace neon {
bool compiled() noexcept;
double dot_compensated(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace neon

}  // namespace focir::simd
