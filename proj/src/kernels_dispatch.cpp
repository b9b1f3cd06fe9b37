#include <cstdlib>
#include <cstring>

#include "bnf/kernels.hpp"

namespace bnf::kernels {

#ifndef BNF_BUILD_AVX2
const KernelSet* avx2_kernels() { return nullptr; }
#endif
#ifndef BNF_BUILD_NEON
const KernelSet* neon_kernels() { return nullptr; }
#endif

namespace {

const KernelSet* choose() {
    if (const char* env = std::getenv("BNF_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        if (std::strcmp(env, "avx2") == 0 && avx2_kernels()) return avx2_kernels();
        if (std::strcmp(env, "neon") == 0 && neon_kernels()) return neon_kernels();
    }
    if (const KernelSet* k = avx2_kernels()) return k;
    if (const KernelSet* k = neon_kernels()) return k;
    return &scalar_kernels();
}

const KernelSet*& current() {
    static const KernelSet* k = choose();
    return k;
}

}  // namespace

const KernelSet& active_kernels() { return *current(); }

void set_active_kernels(const KernelSet& k) { current() = &k; }

}  // namespace bnf::kernels
