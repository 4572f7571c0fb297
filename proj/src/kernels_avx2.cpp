// AVX2 variants of the bit-tensor kernels. Compiled with -mavx2 in its own
// translation unit; selection happens at runtime in kernels.cpp.
#include "qnr/kernels.hpp"

#if defined(QNR_HAVE_AVX2)

#include <immintrin.h>

#include <bit>

namespace qnr::kernels {
namespace {

// Per-byte popcount via nibble shuffle, reduced to 64-bit lanes with SAD.
inline __m256i popcount_epi64(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline uint64_t reduce_epi64(__m256i acc) {
    __m128i lo = _mm256_castsi256_si128(acc);
    __m128i hi = _mm256_extracti128_si256(acc, 1);
    __m128i s = _mm_add_epi64(lo, hi);
    return static_cast<uint64_t>(_mm_cvtsi128_si64(s)) +
           static_cast<uint64_t>(_mm_extract_epi64(s, 1));
}

uint64_t popcount_avx2(const uint64_t* a, size_t nwords) {
    __m256i acc = _mm256_setzero_si256();
    size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
        acc = _mm256_add_epi64(acc, popcount_epi64(v));
    }
    uint64_t sum = reduce_epi64(acc);
    for (; w < nwords; ++w) {
        sum += static_cast<uint64_t>(std::popcount(a[w]));
    }
    return sum;
}

uint64_t xor_popcount_avx2(const uint64_t* a, const uint64_t* b, size_t nwords) {
    __m256i acc = _mm256_setzero_si256();
    size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
        acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_xor_si256(va, vb)));
    }
    uint64_t sum = reduce_epi64(acc);
    for (; w < nwords; ++w) {
        sum += static_cast<uint64_t>(std::popcount(a[w] ^ b[w]));
    }
    return sum;
}

uint64_t and_popcount_avx2(const uint64_t* a, const uint64_t* b, size_t nwords) {
    __m256i acc = _mm256_setzero_si256();
    size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
        acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_and_si256(va, vb)));
    }
    uint64_t sum = reduce_epi64(acc);
    for (; w < nwords; ++w) {
        sum += static_cast<uint64_t>(std::popcount(a[w] & b[w]));
    }
    return sum;
}

// Lane-select masks for every 4-bit pattern.
alignas(32) constexpr int64_t kLaneMask[16][4] = {
    {0, 0, 0, 0},    {-1, 0, 0, 0},   {0, -1, 0, 0},   {-1, -1, 0, 0},
    {0, 0, -1, 0},   {-1, 0, -1, 0},  {0, -1, -1, 0},  {-1, -1, -1, 0},
    {0, 0, 0, -1},   {-1, 0, 0, -1},  {0, -1, 0, -1},  {-1, -1, 0, -1},
    {0, 0, -1, -1},  {-1, 0, -1, -1}, {0, -1, -1, -1}, {-1, -1, -1, -1},
};

int64_t masked_sum_avx2(const uint64_t* mask, const int64_t* values, size_t nbits) {
    __m256i acc = _mm256_setzero_si256();
    size_t f = 0;
    for (; f + 4 <= nbits; f += 4) {
        uint64_t nib = (mask[f / 64] >> (f % 64)) & 0xf;
        if (nib == 0) continue;
        __m256i sel = _mm256_load_si256(reinterpret_cast<const __m256i*>(kLaneMask[nib]));
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values + f));
        acc = _mm256_add_epi64(acc, _mm256_and_si256(v, sel));
    }
    int64_t sum = static_cast<int64_t>(reduce_epi64(acc));
    for (; f < nbits; ++f) {
        if ((mask[f / 64] >> (f % 64)) & 1) {
            sum += values[f];
        }
    }
    return sum;
}

} // namespace

const Ops* avx2_ops() {
    static const Ops ops{"avx2", popcount_avx2, xor_popcount_avx2, and_popcount_avx2,
                         masked_sum_avx2};
    return &ops;
}

} // namespace qnr::kernels

#else

namespace qnr::kernels {
const Ops* avx2_ops() { return nullptr; }
} // namespace qnr::kernels

#endif
