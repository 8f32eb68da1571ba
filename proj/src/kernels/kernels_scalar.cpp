#include "tamed/kernels.hpp"

#include <cmath>

namespace tamed::kernels::scalar {

namespace {

void block_sum(const double* in, double* out, std::size_t out_len, std::size_t factor,
               std::size_t dim) {
    for (std::size_t q = 0; q < out_len; ++q) {
        const std::size_t base = (q / dim) * factor * dim + q % dim;
        double acc = 0.0;
        for (std::size_t i = 0; i < factor; ++i) acc += in[base + i * dim];
        out[q] = acc;
    }
}

double max_abs_diff_strided(const double* coarse, const double* fine, std::size_t count,
                            std::size_t stride) {
    double acc = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
        const double d = std::fabs(coarse[n] - fine[n * stride]);
        acc = d > acc ? d : acc;
    }
    return acc;
}

double max_abs(const double* x, std::size_t count) {
    double acc = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
        const double d = std::fabs(x[n]);
        acc = d > acc ? d : acc;
    }
    return acc;
}

void tame_batch(const double* b, double* out, std::size_t count, double h_pow_alpha) {
    for (std::size_t i = 0; i < count; ++i) out[i] = b[i] / (1.0 + h_pow_alpha * std::fabs(b[i]));
}

}  // namespace

const KernelTable kTable{block_sum, max_abs_diff_strided, max_abs, tame_batch};

}  // namespace tamed::kernels::scalar
