#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "focir/errors.hpp"
#include "focir/simd/dot.hpp"

namespace focir::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if (defined(__GNUC__) || defined(__clang__)) && (defined(__x86_64__) || defined(__i386__))
    return avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* forced = std::getenv("FOCIR_SIMD"); forced != nullptr &&
                                                        std::string(forced) == "scalar") {
        return Isa::scalar;
    }
    if (cpu_has_avx2()) {
        return Isa::avx2;
    }
    if (neon::compiled()) {
        return Isa::neon;
    }
    return Isa::scalar;
}

using Kernel = double (*)(const double*, const double*, std::size_t) noexcept;

Kernel kernel_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::avx2: return &avx2::dot_compensated;
        case Isa::neon: return &neon::dot_compensated;
        case Isa::scalar: break;
    }
    return &scalar::dot_compensated;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        case Isa::scalar: break;
    }
    return "scalar";
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::scalar};
    if (cpu_has_avx2()) {
        out.push_back(Isa::avx2);
    }
    if (neon::compiled()) {
        out.push_back(Isa::neon);
    }
    return out;
}

Isa active_isa() {
    static const Isa isa = detect();
    return isa;
}

double dot_compensated(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("dot_compensated: operand sizes differ");
    }
    static const Kernel kernel = kernel_for(active_isa());
    return kernel(a.data(), b.data(), a.size());
}

double dot_compensated(Isa isa, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("dot_compensated: operand sizes differ");
    }
    const auto avail = available_isas();
    if (std::find(avail.begin(), avail.end(), isa) == avail.end()) {
        throw std::invalid_argument("SIMD variant not available: " + std::string(to_string(isa)));
    }
    return kernel_for(isa)(a.data(), b.data(), a.size());
}

}  // namespace focir::simd
