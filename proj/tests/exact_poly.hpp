#pragma once

// Exact rational polynomials in (p, q), written independently of polyring so
// they can serve as a reference for the interval computations.
#include <map>
#include <vector>

#include "bnf/polyring.hpp"
#include "oracle.hpp"

namespace exact {

using oracle::Rational;

struct CQ {
    Rational re, im;
    bool is_zero() const { return re == 0 && im == 0; }
};

inline CQ operator+(const CQ& a, const CQ& b) { return {a.re + b.re, a.im + b.im}; }
inline CQ operator-(const CQ& a, const CQ& b) { return {a.re - b.re, a.im - b.im}; }
inline CQ operator*(const CQ& a, const CQ& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline CQ operator/(const CQ& a, const CQ& b) {
    const Rational d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

struct Poly {
    int n = 2;
    std::map<std::vector<int>, CQ> c;  // exponents p_1..p_n q_1..q_n

    void add(const std::vector<int>& e, const CQ& v) {
        CQ& slot = c[e];
        slot = slot + v;
        if (slot.is_zero()) c.erase(e);
    }
};

inline Poly operator+(Poly a, const Poly& b) {
    for (const auto& [e, v] : b.c) a.add(e, v);
    return a;
}

inline Poly operator-(Poly a, const Poly& b) {
    for (const auto& [e, v] : b.c) a.add(e, CQ{-v.re, -v.im});
    return a;
}

inline Poly scale(const Poly& a, const CQ& s) {
    Poly r{a.n, {}};
    for (const auto& [e, v] : a.c) r.add(e, v * s);
    return r;
}

inline Poly derivative(const Poly& f, int var) {
    Poly r{f.n, {}};
    for (const auto& [e, v] : f.c) {
        if (e[var] == 0) continue;
        std::vector<int> d = e;
        d[var] -= 1;
        r.add(d, v * CQ{Rational(e[var]), 0});
    }
    return r;
}

inline Poly product(const Poly& f, const Poly& g) {
    Poly r{f.n, {}};
    for (const auto& [a, x] : f.c)
        for (const auto& [b, y] : g.c) {
            std::vector<int> e(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) e[k] = a[k] + b[k];
            r.add(e, x * y);
        }
    return r;
}

// {f,g} = sum_j (f_{p_j} g_{q_j} - f_{q_j} g_{p_j}) by explicit differentiation.
inline Poly poisson(const Poly& f, const Poly& g) {
    Poly r{f.n, {}};
    for (int j = 0; j < f.n; ++j) {
        r = r + product(derivative(f, j), derivative(g, f.n + j));
        r = r - product(derivative(f, f.n + j), derivative(g, j));
    }
    return r;
}

inline Poly from_interval_poly(const bnf::HomoPoly& h) {
    Poly r{h.n(), {}};
    for (const bnf::Term& t : h.terms()) {
        if (t.c.re.lo != t.c.re.hi || t.c.im.lo != t.c.im.hi) throw bnf::Error("not a point polynomial");
        const bnf::Exponents e = bnf::unpack(h.n(), t.key);
        r.add(std::vector<int>(e.begin(), e.begin() + 2 * h.n()),
              CQ{oracle::rational(t.c.re.lo), oracle::rational(t.c.im.lo)});
    }
    return r;
}

inline bool interval_contains(const bnf::Interval& iv, const Rational& x) {
    return oracle::rational(iv.lo) <= x && x <= oracle::rational(iv.hi);
}

// Every exact coefficient lies in the matching enclosure; monomials present on
// one side only must have zero on the other.
inline bool contained(const Poly& ex, const bnf::HomoPoly& h) {
    const int n = h.n();
    for (const bnf::Term& t : h.terms()) {
        const bnf::Exponents e = bnf::unpack(n, t.key);
        const std::vector<int> key(e.begin(), e.begin() + 2 * n);
        auto it = ex.c.find(key);
        const CQ v = it == ex.c.end() ? CQ{} : it->second;
        if (!interval_contains(t.c.re, v.re) || !interval_contains(t.c.im, v.im)) return false;
    }
    for (const auto& [e, v] : ex.c) {
        bnf::Exponents k{};
        for (std::size_t i = 0; i < e.size(); ++i) k[i] = e[i];
        const bnf::ComplexInterval c = h.coeff(bnf::pack(n, k));
        if (!interval_contains(c.re, v.re) || !interval_contains(c.im, v.im)) return false;
    }
    return true;
}

// Sum of exact moduli, as a high-precision number.
inline oracle::Big norm(const Poly& p) {
    oracle::Big s = 0;
    for (const auto& [e, v] : p.c) {
        const oracle::Big re = oracle::Big(numerator(v.re)) / oracle::Big(denominator(v.re));
        const oracle::Big im = oracle::Big(numerator(v.im)) / oracle::Big(denominator(v.im));
        s += boost::multiprecision::sqrt(re * re + im * im);
    }
    return s;
}

}  // namespace exact
