#include "tamed/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace tamed::kernels::neon {

namespace {

// vmaxq_f64 propagates NaN, unlike the scalar rule; select explicitly.
inline float64x2_t keep_max(float64x2_t d, float64x2_t acc) {
    return vbslq_f64(vcgtq_f64(d, acc), d, acc);
}

inline double reduce_max(float64x2_t acc) {
    double m = 0.0;
    const double a = vgetq_lane_f64(acc, 0);
    const double b = vgetq_lane_f64(acc, 1);
    m = a > m ? a : m;
    m = b > m ? b : m;
    return m;
}

void block_sum(const double* in, double* out, std::size_t out_len, std::size_t factor,
               std::size_t dim) {
    std::size_t q = 0;
    for (; q + 2 <= out_len; q += 2) {
        const std::size_t b0 = (q / dim) * factor * dim + q % dim;
        const std::size_t b1 = ((q + 1) / dim) * factor * dim + (q + 1) % dim;
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t i = 0; i < factor; ++i) {
            float64x2_t v = vdupq_n_f64(in[b0 + i * dim]);
            v = vsetq_lane_f64(in[b1 + i * dim], v, 1);
            acc = vaddq_f64(acc, v);
        }
        vst1q_f64(out + q, acc);
    }
    for (; q < out_len; ++q) {
        const std::size_t base = (q / dim) * factor * dim + q % dim;
        double acc = 0.0;
        for (std::size_t i = 0; i < factor; ++i) acc += in[base + i * dim];
        out[q] = acc;
    }
}

double max_abs_diff_strided(const double* coarse, const double* fine, std::size_t count,
                            std::size_t stride) {
    std::size_t n = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; n + 2 <= count; n += 2) {
        float64x2_t f = vdupq_n_f64(fine[n * stride]);
        f = vsetq_lane_f64(fine[(n + 1) * stride], f, 1);
        acc = keep_max(vabsq_f64(vsubq_f64(vld1q_f64(coarse + n), f)), acc);
    }
    double m = reduce_max(acc);
    for (; n < count; ++n) {
        const double d = std::fabs(coarse[n] - fine[n * stride]);
        m = d > m ? d : m;
    }
    return m;
}

double max_abs(const double* x, std::size_t count) {
    std::size_t n = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; n + 2 <= count; n += 2) acc = keep_max(vabsq_f64(vld1q_f64(x + n)), acc);
    double m = reduce_max(acc);
    for (; n < count; ++n) {
        const double d = std::fabs(x[n]);
        m = d > m ? d : m;
    }
    return m;
}

void tame_batch(const double* b, double* out, std::size_t count, double h_pow_alpha) {
    std::size_t i = 0;
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t scale = vdupq_n_f64(h_pow_alpha);
    for (; i + 2 <= count; i += 2) {
        const float64x2_t v = vld1q_f64(b + i);
        const float64x2_t denom = vaddq_f64(one, vmulq_f64(scale, vabsq_f64(v)));
        vst1q_f64(out + i, vdivq_f64(v, denom));
    }
    for (; i < count; ++i) out[i] = b[i] / (1.0 + h_pow_alpha * std::fabs(b[i]));
}

}  // namespace

const KernelTable kTable{block_sum, max_abs_diff_strided, max_abs, tame_batch};

}  // namespace tamed::kernels::neon
