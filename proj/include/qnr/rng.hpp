#pragma once

#include <cstdint>
#include <random>

namespace qnr::rng {

// mt19937_64 output is pinned by the standard; the distribution adapters in
// <random> are not, so bounded draws are done by hand to keep generated
// workloads bit-identical across platforms.
using Engine = std::mt19937_64;

inline uint64_t bounded(Engine& eng, uint64_t n) {
    return n == 0 ? 0 : eng() % n;
}

inline int64_t uniform_int(Engine& eng, int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(bounded(eng, static_cast<uint64_t>(hi - lo + 1)));
}

// Uniform in [0,1) with 53 random bits.
inline double unit(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& eng, double p) {
    return unit(eng) < p;
}

} // namespace qnr::rng
