#include "tamed/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tamed::kernels {

namespace {

bool cpu_has(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(TAMED_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(TAMED_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa select_isa() {
    if (const char* env = std::getenv("TAMED_SIMD"); env && std::string(env) == "scalar") {
        return Isa::Scalar;
    }
    if (cpu_has(Isa::Avx2)) return Isa::Avx2;
    if (cpu_has(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
        if (cpu_has(isa)) out.push_back(isa);
    }
    return out;
}

const KernelTable& table(Isa isa) {
    if (!cpu_has(isa)) {
        throw std::invalid_argument("kernel variant '" + std::string(isa_name(isa)) +
                                    "' is not available");
    }
    switch (isa) {
#if defined(TAMED_HAVE_AVX2)
        case Isa::Avx2: return avx2::kTable;
#endif
#if defined(TAMED_HAVE_NEON)
        case Isa::Neon: return neon::kTable;
#endif
        default: return scalar::kTable;
    }
}

Isa active_isa() {
    static const Isa selected = select_isa();
    return selected;
}

const KernelTable& active() {
    static const KernelTable& t = table(active_isa());
    return t;
}

void block_sum(std::span<const double> fine, std::span<double> coarse, std::size_t factor,
               std::size_t dim) {
    if (factor == 0 || dim == 0 || fine.size() < coarse.size() * factor) {
        throw std::invalid_argument("block_sum: input shorter than factor * output");
    }
    active().block_sum(fine.data(), coarse.data(), coarse.size(), factor, dim);
}

double max_abs_diff_strided(std::span<const double> coarse, std::span<const double> fine,
                            std::size_t stride) {
    if (coarse.empty()) return 0.0;
    if (stride == 0 || (coarse.size() - 1) * stride >= fine.size()) {
        throw std::invalid_argument("max_abs_diff_strided: fine input too short for stride");
    }
    return active().max_abs_diff_strided(coarse.data(), fine.data(), coarse.size(), stride);
}

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

void tame_batch(std::span<const double> drift, std::span<double> out, double h_pow_alpha) {
    if (out.size() != drift.size()) {
        throw std::invalid_argument("tame_batch: output size mismatch");
    }
    active().tame_batch(drift.data(), out.data(), drift.size(), h_pow_alpha);
}

}  // namespace tamed::kernels
