#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace tamed::kernels {

// Data-parallel inner loops of the path engine. Every ISA variant performs
// the same IEEE operations in the same per-element order as the scalar
// reference (no FMA contraction), so results are bit-identical whichever
// variant is selected at runtime.

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    /// out[q] = sum_{i<factor} in[base(q) + i*dim], base(q) = (q/dim)*factor*dim + q%dim,
    /// summed left to right starting from +0.0.
    void (*block_sum)(const double* in, double* out, std::size_t out_len, std::size_t factor,
                      std::size_t dim);
    /// max_n |coarse[n] - fine[n*stride]| for n < count; NaN terms are skipped.
    double (*max_abs_diff_strided)(const double* coarse, const double* fine, std::size_t count,
                                   std::size_t stride);
    /// max_n |x[n]|; NaN terms are skipped.
    double (*max_abs)(const double* x, std::size_t count);
    /// out[i] = b[i] / (1 + h_pow_alpha*|b[i]|).
    void (*tame_batch)(const double* b, double* out, std::size_t count, double h_pow_alpha);
};

/// Variants compiled into this build and supported by the running CPU.
std::vector<Isa> available_isas();

/// Throws std::invalid_argument if `isa` is not available.
const KernelTable& table(Isa isa);

/// Widest available variant, chosen once. Setting TAMED_SIMD=scalar in the
/// environment pins the scalar reference.
Isa active_isa();
const KernelTable& active();

void block_sum(std::span<const double> fine, std::span<double> coarse, std::size_t factor,
               std::size_t dim);
double max_abs_diff_strided(std::span<const double> coarse, std::span<const double> fine,
                            std::size_t stride);
double max_abs(std::span<const double> x);
void tame_batch(std::span<const double> drift, std::span<double> out, double h_pow_alpha);

namespace scalar {
extern const KernelTable kTable;
}
#if defined(TAMED_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif
#if defined(TAMED_HAVE_NEON)
namespace neon {
extern const KernelTable kTable;
}
#endif

}  // namespace tamed::kernels
