// Built with -mavx2 only (no -mfma); called solely after a runtime CPU check.
#include "tamed/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace tamed::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// Lane-wise `d > acc ? d : acc`, the same selection rule as the scalar loop.
inline __m256d keep_max(__m256d d, __m256d acc) { return _mm256_max_pd(d, acc); }

inline double reduce_max(__m256d acc) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = 0.0;
    for (double v : lanes) m = v > m ? v : m;
    return m;
}

void block_sum(const double* in, double* out, std::size_t out_len, std::size_t factor,
               std::size_t dim) {
    std::size_t q = 0;
    const __m256i step = _mm256_set1_epi64x(static_cast<long long>(dim));
    for (; q + 4 <= out_len; q += 4) {
        alignas(32) long long base[4];
        for (std::size_t l = 0; l < 4; ++l) {
            const std::size_t ql = q + l;
            base[l] = static_cast<long long>((ql / dim) * factor * dim + ql % dim);
        }
        __m256i idx = _mm256_load_si256(reinterpret_cast<const __m256i*>(base));
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < factor; ++i) {
            acc = _mm256_add_pd(acc, _mm256_i64gather_pd(in, idx, 8));
            idx = _mm256_add_epi64(idx, step);
        }
        _mm256_storeu_pd(out + q, acc);
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
    __m256d acc = _mm256_setzero_pd();
    const auto s = static_cast<long long>(stride);
    __m256i idx = _mm256_set_epi64x(3 * s, 2 * s, s, 0);
    const __m256i advance = _mm256_set1_epi64x(4 * s);
    for (; n + 4 <= count; n += 4) {
        const __m256d f = _mm256_i64gather_pd(fine, idx, 8);
        const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(coarse + n), f));
        acc = keep_max(d, acc);
        idx = _mm256_add_epi64(idx, advance);
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
    __m256d acc = _mm256_setzero_pd();
    for (; n + 4 <= count; n += 4) acc = keep_max(abs_pd(_mm256_loadu_pd(x + n)), acc);
    double m = reduce_max(acc);
    for (; n < count; ++n) {
        const double d = std::fabs(x[n]);
        m = d > m ? d : m;
    }
    return m;
}

void tame_batch(const double* b, double* out, std::size_t count, double h_pow_alpha) {
    std::size_t i = 0;
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d scale = _mm256_set1_pd(h_pow_alpha);
    for (; i + 4 <= count; i += 4) {
        const __m256d v = _mm256_loadu_pd(b + i);
        const __m256d denom = _mm256_add_pd(one, _mm256_mul_pd(scale, abs_pd(v)));
        _mm256_storeu_pd(out + i, _mm256_div_pd(v, denom));
    }
    for (; i < count; ++i) out[i] = b[i] / (1.0 + h_pow_alpha * std::fabs(b[i]));
}

}  // namespace

const KernelTable kTable{block_sum, max_abs_diff_strided, max_abs, tame_batch};

}  // namespace tamed::kernels::avx2
