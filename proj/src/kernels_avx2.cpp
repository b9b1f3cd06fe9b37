#include <immintrin.h>

#include <cmath>

#include "bnf/kernels.hpp"

namespace bnf::kernels {

namespace {

struct V {
    __m256d lo, hi;
};

struct Watch4 {
    __m256d max_abs = _mm256_setzero_pd();
    __m256d min_nz = _mm256_set1_pd(1.0);
};

// Constants are built inside the functions so that no AVX instruction runs
// during static initialisation on a CPU without it.
#define kUp _mm256_set1_pd(1.0 + kEpsilon)
#define kDown _mm256_set1_pd(1.0 - kEpsilon)
#define kZero _mm256_setzero_pd()
#define kOne _mm256_set1_pd(1.0)
#define kAbsMask _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL))

inline __m256d nudge_up4(__m256d r) {
    const __m256d nonneg = _mm256_cmp_pd(r, kZero, _CMP_GE_OQ);
    return _mm256_mul_pd(r, _mm256_blendv_pd(kDown, kUp, nonneg));
}

inline __m256d nudge_down4(__m256d r) {
    const __m256d nonneg = _mm256_cmp_pd(r, kZero, _CMP_GE_OQ);
    return _mm256_mul_pd(r, _mm256_blendv_pd(kUp, kDown, nonneg));
}

inline void watch4(Watch4& w, __m256d x) {
    const __m256d a = _mm256_and_pd(x, kAbsMask);
    w.max_abs = _mm256_max_pd(w.max_abs, a);
    const __m256d is0 = _mm256_cmp_pd(a, kZero, _CMP_EQ_OQ);
    w.min_nz = _mm256_min_pd(w.min_nz, _mm256_blendv_pd(a, kOne, is0));
}

inline V imul4(__m256d alo, __m256d ahi, __m256d blo, __m256d bhi, Watch4& w) {
    const __m256d p1 = _mm256_mul_pd(alo, blo), p2 = _mm256_mul_pd(alo, bhi);
    const __m256d p3 = _mm256_mul_pd(ahi, blo), p4 = _mm256_mul_pd(ahi, bhi);
    const __m256d mn = _mm256_min_pd(_mm256_min_pd(p1, p2), _mm256_min_pd(p3, p4));
    const __m256d mx = _mm256_max_pd(_mm256_max_pd(p1, p2), _mm256_max_pd(p3, p4));
    V r{nudge_down4(mn), nudge_up4(mx)};
    watch4(w, r.lo);
    watch4(w, r.hi);
    return r;
}

inline V iadd4(V a, V b, Watch4& w) {
    V r{nudge_down4(_mm256_add_pd(a.lo, b.lo)), nudge_up4(_mm256_add_pd(a.hi, b.hi))};
    watch4(w, r.lo);
    watch4(w, r.hi);
    return r;
}

inline V isub4(V a, V b, Watch4& w) {
    V r{nudge_down4(_mm256_sub_pd(a.lo, b.hi)), nudge_up4(_mm256_sub_pd(a.hi, b.lo))};
    watch4(w, r.lo);
    watch4(w, r.hi);
    return r;
}

inline V iscale4(V a, __m256d s, Watch4& w) {
    const __m256d x = _mm256_mul_pd(a.lo, s), y = _mm256_mul_pd(a.hi, s);
    V r{nudge_down4(_mm256_min_pd(x, y)), nudge_up4(_mm256_max_pd(x, y))};
    watch4(w, r.lo);
    watch4(w, r.hi);
    return r;
}

void fold(const Watch4& w4, RangeWatch& w) {
    alignas(32) double mx[4], mn[4];
    _mm256_store_pd(mx, w4.max_abs);
    _mm256_store_pd(mn, w4.min_nz);
    for (int i = 0; i < 4; ++i) {
        w.max_abs = w.max_abs > mx[i] ? w.max_abs : mx[i];
        w.min_nonzero = w.min_nonzero < mn[i] ? w.min_nonzero : mn[i];
    }
}

__attribute__((target("avx2"))) void cmul_avx2(const ComplexInterval& c, ConstSoa g, std::size_t n, Soa out,
                                               RangeWatch& w) {
    const KernelSet& ref = scalar_kernels();
    const std::size_t nv = n - n % 4;
    if (nv > 0) {
        Watch4 w4;
        const __m256d arl = _mm256_set1_pd(c.re.lo), arh = _mm256_set1_pd(c.re.hi);
        const __m256d ail = _mm256_set1_pd(c.im.lo), aih = _mm256_set1_pd(c.im.hi);
        for (std::size_t k = 0; k < nv; k += 4) {
            const __m256d grl = _mm256_loadu_pd(g.rlo + k), grh = _mm256_loadu_pd(g.rhi + k);
            const __m256d gil = _mm256_loadu_pd(g.ilo + k), gih = _mm256_loadu_pd(g.ihi + k);
            const V rr = imul4(arl, arh, grl, grh, w4);
            const V ii = imul4(ail, aih, gil, gih, w4);
            const V ri = imul4(arl, arh, gil, gih, w4);
            const V ir = imul4(ail, aih, grl, grh, w4);
            const V re = isub4(rr, ii, w4);
            const V im = iadd4(ri, ir, w4);
            _mm256_storeu_pd(out.rlo + k, re.lo);
            _mm256_storeu_pd(out.rhi + k, re.hi);
            _mm256_storeu_pd(out.ilo + k, im.lo);
            _mm256_storeu_pd(out.ihi + k, im.hi);
        }
        fold(w4, w);
    }
    if (nv < n) {
        ConstSoa gt{g.rlo + nv, g.rhi + nv, g.ilo + nv, g.ihi + nv};
        Soa ot{out.rlo + nv, out.rhi + nv, out.ilo + nv, out.ihi + nv};
        ref.cmul(c, gt, n - nv, ot, w);
    }
}

__attribute__((target("avx2"))) void axpy_avx2(const double* wt, const std::int32_t* src, const std::int32_t* tgt,
                                               ConstSoa prod, std::size_t n, Soa acc, RangeWatch& w) {
    const KernelSet& ref = scalar_kernels();
    const std::size_t nv = n - n % 4;
    if (nv > 0) {
        Watch4 w4;
        for (std::size_t m = 0; m < nv; m += 4) {
            const __m128i si = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + m));
            const __m128i ti = _mm_loadu_si128(reinterpret_cast<const __m128i*>(tgt + m));
            const __m256d f = _mm256_loadu_pd(wt + m);
            const V pre{_mm256_i32gather_pd(prod.rlo, si, 8), _mm256_i32gather_pd(prod.rhi, si, 8)};
            const V pim{_mm256_i32gather_pd(prod.ilo, si, 8), _mm256_i32gather_pd(prod.ihi, si, 8)};
            const V re = iscale4(pre, f, w4);
            const V im = iscale4(pim, f, w4);
            const V are{_mm256_i32gather_pd(acc.rlo, ti, 8), _mm256_i32gather_pd(acc.rhi, ti, 8)};
            const V aim{_mm256_i32gather_pd(acc.ilo, ti, 8), _mm256_i32gather_pd(acc.ihi, ti, 8)};
            // Adding an exact zero would still widen the accumulator by an ulp.
            const __m256d re0 = _mm256_and_pd(_mm256_cmp_pd(re.lo, kZero, _CMP_EQ_OQ),
                                              _mm256_cmp_pd(re.hi, kZero, _CMP_EQ_OQ));
            const __m256d im0 = _mm256_and_pd(_mm256_cmp_pd(im.lo, kZero, _CMP_EQ_OQ),
                                              _mm256_cmp_pd(im.hi, kZero, _CMP_EQ_OQ));
            const V sre = iadd4(are, re, w4);
            const V sim = iadd4(aim, im, w4);
            alignas(32) double o[4][4];
            _mm256_store_pd(o[0], _mm256_blendv_pd(sre.lo, are.lo, re0));
            _mm256_store_pd(o[1], _mm256_blendv_pd(sre.hi, are.hi, re0));
            _mm256_store_pd(o[2], _mm256_blendv_pd(sim.lo, aim.lo, im0));
            _mm256_store_pd(o[3], _mm256_blendv_pd(sim.hi, aim.hi, im0));
            for (int l = 0; l < 4; ++l) {
                const std::int32_t t = tgt[m + l];
                acc.rlo[t] = o[0][l];
                acc.rhi[t] = o[1][l];
                acc.ilo[t] = o[2][l];
                acc.ihi[t] = o[3][l];
            }
        }
        fold(w4, w);
    }
    if (nv < n) ref.axpy(wt + nv, src + nv, tgt + nv, prod, n - nv, acc, w);
}

}  // namespace

const KernelSet* avx2_kernels() {
    static const KernelSet k{"avx2", &cmul_avx2, &axpy_avx2};
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok ? &k : nullptr;
}

}  // namespace bnf::kernels
