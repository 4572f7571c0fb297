#include "qnr/kernels.hpp"

#include <bit>

namespace qnr::kernels {
namespace {

uint64_t popcount_scalar(const uint64_t* a, size_t nwords) {
    uint64_t sum = 0;
    for (size_t w = 0; w < nwords; ++w) {
        sum += static_cast<uint64_t>(std::popcount(a[w]));
    }
    return sum;
}

uint64_t xor_popcount_scalar(const uint64_t* a, const uint64_t* b, size_t nwords) {
    uint64_t sum = 0;
    for (size_t w = 0; w < nwords; ++w) {
        sum += static_cast<uint64_t>(std::popcount(a[w] ^ b[w]));
    }
    return sum;
}

uint64_t and_popcount_scalar(const uint64_t* a, const uint64_t* b, size_t nwords) {
    uint64_t sum = 0;
    for (size_t w = 0; w < nwords; ++w) {
        sum += static_cast<uint64_t>(std::popcount(a[w] & b[w]));
    }
    return sum;
}

int64_t masked_sum_scalar(const uint64_t* mask, const int64_t* values, size_t nbits) {
    int64_t sum = 0;
    size_t nwords = (nbits + 63) / 64;
    for (size_t w = 0; w < nwords; ++w) {
        uint64_t m = mask[w];
        while (m != 0) {
            int bit = std::countr_zero(m);
            sum += values[w * 64 + static_cast<size_t>(bit)];
            m &= m - 1;
        }
    }
    return sum;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", popcount_scalar, xor_popcount_scalar, and_popcount_scalar,
                         masked_sum_scalar};
    return ops;
}

} // namespace qnr::kernels
