#include <arm_neon.h>

#include "bnf/kernels.hpp"

namespace bnf::kernels {

namespace {

// Two lanes per float64x2_t; operation order follows the scalar kernels.
inline float64x2_t nudge_up2(float64x2_t r) {
    const uint64x2_t nonneg = vcgeq_f64(r, vdupq_n_f64(0.0));
    return vmulq_f64(r, vbslq_f64(nonneg, vdupq_n_f64(1.0 + kEpsilon), vdupq_n_f64(1.0 - kEpsilon)));
}

inline float64x2_t nudge_down2(float64x2_t r) {
    const uint64x2_t nonneg = vcgeq_f64(r, vdupq_n_f64(0.0));
    return vmulq_f64(r, vbslq_f64(nonneg, vdupq_n_f64(1.0 - kEpsilon), vdupq_n_f64(1.0 + kEpsilon)));
}

// a<b?a:b, matching the scalar helper (vminq_f64 differs on signed zeros and NaN).
inline float64x2_t min2(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(a, b), a, b); }
inline float64x2_t max2(float64x2_t a, float64x2_t b) { return vbslq_f64(vcgtq_f64(a, b), a, b); }

struct Watch2 {
    float64x2_t max_abs = vdupq_n_f64(0.0);
    float64x2_t min_nz = vdupq_n_f64(1.0);
};

inline void watch2(Watch2& w, float64x2_t x) {
    const float64x2_t a = vabsq_f64(x);
    w.max_abs = max2(w.max_abs, a);
    w.min_nz = min2(w.min_nz, vbslq_f64(vceqq_f64(a, vdupq_n_f64(0.0)), vdupq_n_f64(1.0), a));
}

struct V {
    float64x2_t lo, hi;
};

inline V imul2(float64x2_t alo, float64x2_t ahi, float64x2_t blo, float64x2_t bhi, Watch2& w) {
    const float64x2_t p1 = vmulq_f64(alo, blo), p2 = vmulq_f64(alo, bhi);
    const float64x2_t p3 = vmulq_f64(ahi, blo), p4 = vmulq_f64(ahi, bhi);
    V r{nudge_down2(min2(min2(p1, p2), min2(p3, p4))), nudge_up2(max2(max2(p1, p2), max2(p3, p4)))};
    watch2(w, r.lo);
    watch2(w, r.hi);
    return r;
}

inline V iadd2(V a, V b, Watch2& w) {
    V r{nudge_down2(vaddq_f64(a.lo, b.lo)), nudge_up2(vaddq_f64(a.hi, b.hi))};
    watch2(w, r.lo);
    watch2(w, r.hi);
    return r;
}

inline V isub2(V a, V b, Watch2& w) {
    V r{nudge_down2(vsubq_f64(a.lo, b.hi)), nudge_up2(vsubq_f64(a.hi, b.lo))};
    watch2(w, r.lo);
    watch2(w, r.hi);
    return r;
}

void fold(const Watch2& w2, RangeWatch& w) {
    double mx[2], mn[2];
    vst1q_f64(mx, w2.max_abs);
    vst1q_f64(mn, w2.min_nz);
    for (int i = 0; i < 2; ++i) {
        w.max_abs = w.max_abs > mx[i] ? w.max_abs : mx[i];
        w.min_nonzero = w.min_nonzero < mn[i] ? w.min_nonzero : mn[i];
    }
}

void cmul_neon(const ComplexInterval& c, ConstSoa g, std::size_t n, Soa out, RangeWatch& w) {
    const std::size_t nv = n - n % 2;
    Watch2 w2;
    const float64x2_t arl = vdupq_n_f64(c.re.lo), arh = vdupq_n_f64(c.re.hi);
    const float64x2_t ail = vdupq_n_f64(c.im.lo), aih = vdupq_n_f64(c.im.hi);
    for (std::size_t k = 0; k < nv; k += 2) {
        const float64x2_t grl = vld1q_f64(g.rlo + k), grh = vld1q_f64(g.rhi + k);
        const float64x2_t gil = vld1q_f64(g.ilo + k), gih = vld1q_f64(g.ihi + k);
        const V rr = imul2(arl, arh, grl, grh, w2);
        const V ii = imul2(ail, aih, gil, gih, w2);
        const V ri = imul2(arl, arh, gil, gih, w2);
        const V ir = imul2(ail, aih, grl, grh, w2);
        const V re = isub2(rr, ii, w2);
        const V im = iadd2(ri, ir, w2);
        vst1q_f64(out.rlo + k, re.lo);
        vst1q_f64(out.rhi + k, re.hi);
        vst1q_f64(out.ilo + k, im.lo);
        vst1q_f64(out.ihi + k, im.hi);
    }
    fold(w2, w);
    if (nv < n) {
        ConstSoa gt{g.rlo + nv, g.rhi + nv, g.ilo + nv, g.ihi + nv};
        Soa ot{out.rlo + nv, out.rhi + nv, out.ilo + nv, out.ihi + nv};
        scalar_kernels().cmul(c, gt, n - nv, ot, w);
    }
}

}  // namespace

// The gather-heavy accumulation gains little from two-lane vectors, so the
// NEON set reuses the scalar axpy.
const KernelSet* neon_kernels() {
    static const KernelSet k{"neon", &cmul_neon, scalar_kernels().axpy};
    return &k;
}

}  // namespace bnf::kernels
