#include "qnr/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qnr::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Ops& pick() {
    const char* forced = std::getenv("QNR_KERNELS");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
        return scalar_ops();
    }
    const Ops* avx2 = avx2_ops();
    if (avx2 != nullptr && cpu_has_avx2() &&
        (forced == nullptr || std::strcmp(forced, "avx2") == 0)) {
        return *avx2;
    }
    return scalar_ops();
}

} // namespace

const Ops& active_ops() {
    static const Ops& ops = pick();
    return ops;
}

} // namespace qnr::kernels
