#include <cmath>

#include "bnf/kernels.hpp"

namespace bnf::kernels {

void RangeWatch::check() const {
    if (!(max_abs <= kSafeMax)) throw_safe_range(max_abs);
    if (min_nonzero < kSafeMin) throw_safe_range(min_nonzero);
}

namespace {

inline double min2(double a, double b) { return a < b ? a : b; }
inline double max2(double a, double b) { return a > b ? a : b; }

inline void watch(RangeWatch& w, double x) {
    const double a = std::fabs(x);
    w.max_abs = max2(w.max_abs, a);
    w.min_nonzero = min2(w.min_nonzero, a == 0.0 ? 1.0 : a);
}

struct Iv {
    double lo, hi;
};

inline Iv imul(double alo, double ahi, double blo, double bhi, RangeWatch& w) {
    const double p1 = alo * blo, p2 = alo * bhi, p3 = ahi * blo, p4 = ahi * bhi;
    const double mn = min2(min2(p1, p2), min2(p3, p4));
    const double mx = max2(max2(p1, p2), max2(p3, p4));
    Iv r{nudge_down(mn), nudge_up(mx)};
    watch(w, r.lo);
    watch(w, r.hi);
    return r;
}

inline Iv iadd(Iv a, Iv b, RangeWatch& w) {
    Iv r{nudge_down(a.lo + b.lo), nudge_up(a.hi + b.hi)};
    watch(w, r.lo);
    watch(w, r.hi);
    return r;
}

inline Iv isub(Iv a, Iv b, RangeWatch& w) {
    Iv r{nudge_down(a.lo - b.hi), nudge_up(a.hi - b.lo)};
    watch(w, r.lo);
    watch(w, r.hi);
    return r;
}

inline Iv iscale(Iv a, double s, RangeWatch& w) {
    const double x = a.lo * s, y = a.hi * s;
    Iv r{nudge_down(min2(x, y)), nudge_up(max2(x, y))};
    watch(w, r.lo);
    watch(w, r.hi);
    return r;
}

void cmul_scalar(const ComplexInterval& c, ConstSoa g, std::size_t n, Soa out, RangeWatch& w) {
    const double arl = c.re.lo, arh = c.re.hi, ail = c.im.lo, aih = c.im.hi;
    for (std::size_t k = 0; k < n; ++k) {
        const Iv rr = imul(arl, arh, g.rlo[k], g.rhi[k], w);
        const Iv ii = imul(ail, aih, g.ilo[k], g.ihi[k], w);
        const Iv ri = imul(arl, arh, g.ilo[k], g.ihi[k], w);
        const Iv ir = imul(ail, aih, g.rlo[k], g.rhi[k], w);
        const Iv re = isub(rr, ii, w);
        const Iv im = iadd(ri, ir, w);
        out.rlo[k] = re.lo;
        out.rhi[k] = re.hi;
        out.ilo[k] = im.lo;
        out.ihi[k] = im.hi;
    }
}

void axpy_scalar(const double* wt, const std::int32_t* src, const std::int32_t* tgt, ConstSoa prod, std::size_t n,
                 Soa acc, RangeWatch& w) {
    for (std::size_t m = 0; m < n; ++m) {
        const std::int32_t s = src[m], t = tgt[m];
        const double f = wt[m];
        const Iv re = iscale({prod.rlo[s], prod.rhi[s]}, f, w);
        const Iv im = iscale({prod.ilo[s], prod.ihi[s]}, f, w);
        if (!(re.lo == 0.0 && re.hi == 0.0)) {
            const Iv r = iadd({acc.rlo[t], acc.rhi[t]}, re, w);
            acc.rlo[t] = r.lo;
            acc.rhi[t] = r.hi;
        }
        if (!(im.lo == 0.0 && im.hi == 0.0)) {
            const Iv r = iadd({acc.ilo[t], acc.ihi[t]}, im, w);
            acc.ilo[t] = r.lo;
            acc.ihi[t] = r.hi;
        }
    }
}

}  // namespace

const KernelSet& scalar_kernels() {
    static const KernelSet k{"scalar", &cmul_scalar, &axpy_scalar};
    return k;
}

}  // namespace bnf::kernels
