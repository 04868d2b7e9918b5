#include <immintrin.h>

#include "qrsmem/gf_kernels.hpp"

namespace qrsmem::kernels {

// Eight lanes per step: gather log(x), add log(c), gather exp, mask zeros.
void axpy_avx2(const FieldCtx& f, Elem c, const Elem* x, Elem* acc, std::size_t len) {
    if (c == 0) return;
    const std::int32_t* logt = f.log_table32();
    const std::int32_t* expt = f.exp_table32();
    const __m256i logc = _mm256_set1_epi32(logt[c]);
    const __m256i zero = _mm256_setzero_si256();
    std::size_t j = 0;
    for (; j + 8 <= len; j += 8) {
        const __m128i xv16 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(x + j));
        const __m256i xv = _mm256_cvtepu16_epi32(xv16);
        const __m256i lx = _mm256_i32gather_epi32(logt, xv, 4);
        const __m256i prod = _mm256_i32gather_epi32(expt, _mm256_add_epi32(lx, logc), 4);
        const __m256i keep = _mm256_cmpeq_epi32(xv, zero);
        const __m256i res = _mm256_andnot_si256(keep, prod);
        const __m128i lo = _mm256_castsi256_si128(res);
        const __m128i hi = _mm256_extracti128_si256(res, 1);
        const __m128i packed = _mm_packus_epi32(lo, hi);
        __m128i* dst = reinterpret_cast<__m128i*>(acc + j);
        _mm_storeu_si128(dst, _mm_xor_si128(_mm_loadu_si128(dst), packed));
    }
    for (; j < len; ++j) acc[j] ^= f.mul(c, x[j]);
}

}  // namespace qrsmem::kernels
