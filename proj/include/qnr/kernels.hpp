#pragma once

#include <cstddef>
#include <cstdint>

// Bit-tensor reduction kernels behind the routing-matrix operations. Routing
// state is packed as 64-bit words of per-flow bits, so objective evaluation
// (popcounts over XOR/AND of tensors) and link-load accumulation (demand sums
// under a flow mask) are word-parallel. Each kernel has a scalar reference
// implementation and an AVX2 variant; the active table is picked at runtime
// from CPU capabilities and both must agree bit-for-bit on every input.
namespace qnr::kernels {

struct Ops {
    const char* name;
    uint64_t (*popcount)(const uint64_t* a, size_t nwords);
    uint64_t (*xor_popcount)(const uint64_t* a, const uint64_t* b, size_t nwords);
    uint64_t (*and_popcount)(const uint64_t* a, const uint64_t* b, size_t nwords);
    // Sum of values[f] over the set bits f of mask, f < nbits. Bits of the
    // final partial word at index >= nbits must be zero.
    int64_t (*masked_sum)(const uint64_t* mask, const int64_t* values, size_t nbits);
};

// Scalar reference implementations. Always available.
const Ops& scalar_ops();

// AVX2 implementations, or nullptr when unsupported (compile target or CPU).
const Ops* avx2_ops();

// Dispatch table used by the library. Honors QNR_KERNELS=scalar|avx2 in the
// environment; defaults to the widest supported variant.
const Ops& active_ops();

} // namespace qnr::kernels
