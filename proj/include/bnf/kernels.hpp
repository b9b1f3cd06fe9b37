#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "bnf/rigor.hpp"

// Batched complex-interval kernels behind the Poisson bracket. Every variant
// performs the same IEEE operations in the same order, so the scalar and the
// vector paths produce bit-identical endpoints.
namespace bnf::kernels {

struct Soa {
    double* rlo;
    double* rhi;
    double* ilo;
    double* ihi;
};

struct ConstSoa {
    const double* rlo;
    const double* rhi;
    const double* ilo;
    const double* ihi;
};

// Running extremes of every produced endpoint, checked against the safe range
// once per batch instead of once per operation.
struct RangeWatch {
    double max_abs = 0.0;
    double min_nonzero = 1.0;
    void check() const;
};

// out[k] = c * g[k] for k < n.
using CmulFn = void (*)(const ComplexInterval& c, ConstSoa g, std::size_t n, Soa out, RangeWatch& watch);
// acc[tgt[m]] += w[m] * prod[src[m]] for m < n; targets within one call are distinct.
// A component whose contribution is the exact zero interval is left untouched.
using AxpyFn = void (*)(const double* w, const std::int32_t* src, const std::int32_t* tgt, ConstSoa prod,
                        std::size_t n, Soa acc, RangeWatch& watch);

struct KernelSet {
    const char* name;
    CmulFn cmul;
    AxpyFn axpy;
};

const KernelSet& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelSet* avx2_kernels();
const KernelSet* neon_kernels();

// The set used by polyring. Defaults to the widest supported variant; the
// BNF_KERNEL environment variable ("scalar", "avx2", "neon") overrides it.
const KernelSet& active_kernels();
void set_active_kernels(const KernelSet& k);

}  // namespace bnf::kernels
