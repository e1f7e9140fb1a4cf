#include "autogyro/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace autogyro::simd {

bool avx2_available()
{
#if defined(__x86_64__) || defined(__i386__)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

namespace {

const KernelTable* pick()
{
    const char* env = std::getenv("AUTOGYRO_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    return avx2_available() ? &avx2_kernels() : &scalar_kernels();
}

std::atomic<const KernelTable*>& slot()
{
    static std::atomic<const KernelTable*> s{pick()};
    return s;
}

}  // namespace

const KernelTable& active_kernels() { return *slot().load(std::memory_order_relaxed); }

void force_isa(Isa isa)
{
    if (isa == Isa::Avx2 && avx2_available()) slot().store(&avx2_kernels());
    else slot().store(&scalar_kernels());
}

}  // namespace autogyro::simd
