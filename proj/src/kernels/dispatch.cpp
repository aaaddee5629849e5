#include <cstdlib>
#include <cstring>

#include "bq/kernels.hpp"

namespace bq::kern {

#if defined(__x86_64__) || defined(__i386__)
const Kernels& avx2();  // defined in avx2.cpp
#endif

namespace {

const Kernels& pick() {
    const char* force = std::getenv("BQ_KERNELS");
    if (force && std::strcmp(force, "scalar") == 0) return scalar();
#if defined(__x86_64__) || defined(__i386__)
    const bool have = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (force && std::strcmp(force, "avx2") == 0 && have) return avx2();
    if (!force && have) return avx2();
#endif
    return scalar();
}

}  // namespace

const Kernels& active() {
    static const Kernels& k = pick();
    return k;
}

std::string active_name() { return active().name; }

}  // namespace bq::kern
