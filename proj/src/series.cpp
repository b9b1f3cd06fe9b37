#include "bnf/series.hpp"

namespace bnf {

Series::Series(int n, int order) : n_(n), order_(order) {
    if (order < 0) throw Error("series order must be nonnegative");
    parts_.reserve(order + 1);
    for (int d = 0; d <= order; ++d) parts_.emplace_back(n, d);
}

Series Series::constant(int n, int order, const ComplexInterval& c) {
    Series s(n, order);
    s.parts_[0].add_term(MonoKey{0}, c);
    return s;
}

Series Series::from_poly(const HomoPoly& h, int order) {
    Series s(h.n(), order);
    if (h.degree() <= order) s.parts_[h.degree()] = h;
    return s;
}

namespace {

void require_same_shape(const Series& a, const Series& b) {
    if (a.n() != b.n() || a.order() != b.order()) throw Error("series of different shapes");
}

}  // namespace

Series operator+(const Series& a, const Series& b) {
    require_same_shape(a, b);
    Series s(a.n(), a.order());
    for (int d = 0; d <= a.order(); ++d) s.part(d) = a.part(d) + b.part(d);
    return s;
}

Series operator-(const Series& a, const Series& b) {
    require_same_shape(a, b);
    Series s(a.n(), a.order());
    for (int d = 0; d <= a.order(); ++d) s.part(d) = a.part(d) - b.part(d);
    return s;
}

Series operator*(const Series& a, const ComplexInterval& c) {
    Series s(a.n(), a.order());
    for (int d = 0; d <= a.order(); ++d) s.part(d) = a.part(d) * c;
    return s;
}

Series operator*(const Series& a, const Interval& c) { return a * ComplexInterval(c, Interval()); }

Series multiply(const Series& a, const Series& b) {
    require_same_shape(a, b);
    const int N = a.order();
    Series s(a.n(), N);
    for (int da = 0; da <= N; ++da) {
        if (a.part(da).is_zero()) continue;
        for (int db = 0; da + db <= N; ++db) {
            if (b.part(db).is_zero()) continue;
            s.part(da + db) = s.part(da + db) + multiply(a.part(da), b.part(db));
        }
    }
    return s;
}

Series compose(const std::vector<Interval>& c, const Series& w) {
    if (!w.part(0).is_zero()) throw Error("compose: inner series has a constant part");
    const int N = w.order();
    const int K = std::min(static_cast<int>(c.size()) - 1, N);
    Series acc(w.n(), N);
    if (K < 0) return acc;
    acc = Series::constant(w.n(), N, {c[K], Interval()});
    for (int k = K - 1; k >= 0; --k) {
        acc = multiply(acc, w);
        acc.part(0).add_term(MonoKey{0}, {c[k], Interval()});
    }
    return acc;
}

std::vector<Interval> taylor_inverse(int order) {
    std::vector<Interval> c(order + 1);
    for (int k = 0; k <= order; ++k) c[k] = Interval::point(k % 2 ? -1.0 : 1.0);
    return c;
}

std::vector<Interval> taylor_inverse_square(int order) {
    std::vector<Interval> c(order + 1);
    for (int k = 0; k <= order; ++k) c[k] = Interval::point(k % 2 ? -(k + 1.0) : k + 1.0);
    return c;
}

std::vector<Interval> taylor_inverse_sqrt(int order) {
    // c_k = c_{k-1} * (-(2k-1)/(2k))
    std::vector<Interval> c(order + 1);
    c[0] = Interval::point(1.0);
    for (int k = 1; k <= order; ++k) c[k] = c[k - 1] * Interval::ratio(-(2 * k - 1), 2 * k);
    return c;
}

std::vector<Interval> taylor_cos(int order) {
    std::vector<Interval> c(order + 1);
    Interval t = Interval::point(1.0);
    for (int k = 0; k <= order; ++k) {
        if (k > 0) t = t / Interval::point(k);
        c[k] = k % 2 ? Interval() : (k % 4 == 0 ? t : -t);
    }
    return c;
}

std::vector<Interval> taylor_sin(int order) {
    std::vector<Interval> c(order + 1);
    Interval t = Interval::point(1.0);
    for (int k = 0; k <= order; ++k) {
        if (k > 0) t = t / Interval::point(k);
        c[k] = k % 2 == 0 ? Interval() : (k % 4 == 1 ? t : -t);
    }
    return c;
}

}  // namespace bnf
