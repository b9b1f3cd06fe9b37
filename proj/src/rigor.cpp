#include "bnf/rigor.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace bnf {

void throw_safe_range(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    throw SafeRangeError(std::string("result ") + buf + " outside [2^-511, 2^511]");
}

double div_up(double a, double b) {
    if (b == 0.0) throw Error("division by zero");
    return checked(nudge_up(a / b));
}

double div_down(double a, double b) {
    if (b == 0.0) throw Error("division by zero");
    return checked(nudge_down(a / b));
}

double dir_op(ArithOp op, double a, double b, Dir dir) {
    checked(a);
    checked(b);
    const bool up = dir == Dir::Up;
    switch (op) {
        case ArithOp::Add: return up ? add_up(a, b) : add_down(a, b);
        case ArithOp::Sub: return up ? sub_up(a, b) : sub_down(a, b);
        case ArithOp::Mul: return up ? mul_up(a, b) : mul_down(a, b);
        case ArithOp::Div: return up ? div_up(a, b) : div_down(a, b);
    }
    throw Error("unknown arithmetic operation");
}

double sqrt_up(double x) {
    if (x < 0.0) throw Error("square root of a negative number");
    return checked(std::sqrt(x) * (1.0 + kEpsilon));
}

double sqrt_down(double x) {
    if (x < 0.0) throw Error("square root of a negative number");
    return checked(std::sqrt(x) * (1.0 - kEpsilon));
}

// ---------------------------------------------------------------- Interval

Interval Interval::point(double x) { return {checked(x), x}; }

Interval Interval::ratio(long long p, long long q) {
    const double a = static_cast<double>(p);
    const double b = static_cast<double>(q);
    return {div_down(a, b), div_up(a, b)};
}

double Interval::mig() const noexcept {
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    return std::fmin(std::fabs(lo), std::fabs(hi));
}

namespace {
inline double min2(double a, double b) { return a < b ? a : b; }
inline double max2(double a, double b) { return a > b ? a : b; }
}  // namespace

Interval operator+(const Interval& a, const Interval& b) { return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)}; }

Interval operator-(const Interval& a, const Interval& b) { return {sub_down(a.lo, b.hi), sub_up(a.hi, b.lo)}; }

Interval operator*(const Interval& a, const Interval& b) {
    // Rounding is monotone, so rounding the extreme raw products gives the same
    // endpoints as rounding all four products in both directions.
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    const double mn = min2(min2(p1, p2), min2(p3, p4));
    const double mx = max2(max2(p1, p2), max2(p3, p4));
    return {checked(nudge_down(mn)), checked(nudge_up(mx))};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains(0.0)) throw Error("division by interval containing zero");
    const double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    const double mn = min2(min2(p1, p2), min2(p3, p4));
    const double mx = max2(max2(p1, p2), max2(p3, p4));
    return {checked(nudge_down(mn)), checked(nudge_up(mx))};
}

Interval iv_arith(ArithOp op, const Interval& a, const Interval& b) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Div: return a / b;
    }
    throw Error("unknown arithmetic operation");
}

Interval sqr(const Interval& a) {
    const double m = a.mag();
    if (a.contains(0.0)) return {0.0, mul_up(m, m)};
    const double n = a.mig();
    return {mul_down(n, n), mul_up(m, m)};
}

Interval sqrt(const Interval& a) {
    if (a.hi < 0.0) throw Error("square root of a negative interval");
    return {a.lo <= 0.0 ? 0.0 : sqrt_down(a.lo), sqrt_up(a.hi)};
}

Interval hull(const Interval& a, const Interval& b) { return {std::fmin(a.lo, b.lo), std::fmax(a.hi, b.hi)}; }

Interval scale(const Interval& a, double w) {
    if (w > 0.0) return {mul_down(a.lo, w), mul_up(a.hi, w)};
    if (w < 0.0) return {mul_down(a.hi, w), mul_up(a.lo, w)};
    return {};
}

// --------------------------------------------------------- ComplexInterval

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) { return {a.re + b.re, a.im + b.im}; }

ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) { return {a.re - b.re, a.im - b.im}; }

ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexInterval operator*(const ComplexInterval& a, const Interval& s) { return {a.re * s, a.im * s}; }

ComplexInterval operator/(const ComplexInterval& a, const Interval& s) { return {a.re / s, a.im / s}; }

ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
    const Interval den = sqr(b.re) + sqr(b.im);
    return (a * conj(b)) / den;
}

ComplexInterval conj(const ComplexInterval& a) { return {a.re, -a.im}; }

ComplexInterval times_i(const ComplexInterval& a) { return {-a.im, a.re}; }

double abs_upper(const ComplexInterval& a) {
    const double x = a.re.mag(), y = a.im.mag();
    if (x == 0.0) return y;
    if (y == 0.0) return x;
    return sqrt_up(add_up(mul_up(x, x), mul_up(y, y)));
}

// ---------------------------------------------------------- log and exp

namespace {

// Upper bound of log(1+u) for an exactly known |u| <= 0.01.
double log1p_upper_series(double u) {
    if (u == 0.0) return 0.0;
    if (u > 0.0) {
        // Alternating series with decreasing terms: stopping after a positive
        // term overestimates.
        double s = 0.0;
        double pu = 1.0, pd = 1.0;
        for (int k = 1;; ++k) {
            pu = mul_up(pu, u);
            pd = mul_down(pd, u);
            if (k % 2 == 1) {
                s = add_up(s, div_up(pu, k));
                if (pu * u / (k + 1) <= kEpsilon * u) break;
            } else {
                s = sub_up(s, div_down(pd, k));
            }
        }
        return s;
    }
    // All terms are negative, so every partial sum is an upper bound.
    const double v = -u;
    double s = 0.0;
    double pd = 1.0;
    for (int k = 1;; ++k) {
        pd = mul_down(pd, v);
        s = add_down(s, div_down(pd, k));
        if (pd * v / (k + 1) <= kEpsilon * v) break;
    }
    return -s;
}

double exp_small_upper(double xi) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1;; ++k) {
        term = div_up(mul_up(term, xi), k);
        if (term <= kEpsilon) {
            const double rem = div_up(term, sub_down(1.0, xi));
            return add_up(sum, rem);
        }
        sum = add_up(sum, term);
    }
}

double exp_small_lower(double xi) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1;; ++k) {
        term = div_down(mul_down(term, xi), k);
        sum = add_down(sum, term);
        if (term <= kEpsilon * 0x1p-8) return sum;
    }
}

}  // namespace

double log_plus(double x) {
    checked(x);
    if (!(x > 0.0)) throw Error("log_plus of a non-positive number");
    // x^(1/2^n) grows or shrinks towards 1; upper-rounded roots keep the bound.
    double xi = x;
    int n = 0;
    while (xi > 1.01 || xi < 0.99) {
        xi = sqrt_up(xi);
        ++n;
    }
    const double u = xi - 1.0;  // exact by Sterbenz
    const double s = log1p_upper_series(u);
    return mul_up(std::ldexp(1.0, n), s);
}

double log_minus(double x) {
    checked(x);
    if (!(x > 0.0)) throw Error("log_minus of a non-positive number");
    return -log_plus(div_up(1.0, x));
}

double exp_plus(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error("exp_plus argument outside [0,1]");
    return exp_upper(x);
}

double exp_upper(double x) {
    checked(x);
    if (x < 0.0) {
        // e^-350 < 2^-504
        if (x <= -350.0) return 0x1p-504;
        return div_up(1.0, exp_lower(-x));
    }
    double xi = x;
    int n = 0;
    while (xi > 0.03) {
        xi *= 0.5;
        ++n;
    }
    double r = exp_small_upper(xi);
    for (int k = 0; k < n; ++k) r = mul_up(r, r);
    return r;
}

double exp_lower(double x) {
    checked(x);
    if (x < 0.0) {
        if (x <= -350.0) return 0.0;
        return div_down(1.0, exp_upper(-x));
    }
    double xi = x;
    int n = 0;
    while (xi > 0.03) {
        xi *= 0.5;
        ++n;
    }
    double r = exp_small_lower(xi);
    for (int k = 0; k < n; ++k) r = mul_down(r, r);
    return r;
}

// ------------------------------------------------------------- LogBound

double LogBound::log10() const noexcept { return logval / 2.302585092994045684; }

double log_add_up(double x, double y) {
    if (x == kZeroLog) return y;
    if (y == kZeroLog) return x;
    const double hi = x >= y ? x : y;
    const double lo = x >= y ? y : x;
    const double d = sub_up(lo, hi);
    // log(1+t) <= t; e^-40 < 2^-57, and below e^-20 the t^2/2 slack is invisible.
    if (d <= -40.0) return add_up(hi, 0x1p-57);
    const double t = exp_upper(d);
    if (d <= -20.0) return add_up(hi, t);
    return add_up(hi, log_plus(add_up(1.0, t)));
}

LogBound log_add_upper(const LogBound& x, const LogBound& y) {
    if (x.kind != LogBound::Kind::Upper || y.kind != LogBound::Kind::Upper)
        throw Error("log_add_upper expects upper bounds");
    return LogBound::upper(log_add_up(x.logval, y.logval));
}

LogBound log_mul(const LogBound& a, const LogBound& b) {
    if (a.kind != b.kind) throw Error("log_mul of bounds with different directions");
    if (a.is_zero() || b.is_zero()) return LogBound::zero(a.kind);
    const double v = a.kind == LogBound::Kind::Upper ? add_up(a.logval, b.logval) : add_down(a.logval, b.logval);
    return {v, a.kind};
}

LogBound log_div(const LogBound& num, const LogBound& den) {
    if (num.kind == den.kind) throw Error("log_div needs opposite bound directions");
    if (den.is_zero()) throw Error("log_div by a zero bound");
    if (num.is_zero()) return LogBound::zero(num.kind);
    const double v = num.kind == LogBound::Kind::Upper ? sub_up(num.logval, den.logval)
                                                       : sub_down(num.logval, den.logval);
    return {v, num.kind};
}

// ------------------------------------------------------------------ I/O

std::string to_hex(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_hex(std::string_view s) {
    std::string tmp(s);
    if (tmp.empty()) throw ParseError("empty number", 0);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || errno == ERANGE) throw ParseError("bad number '" + tmp + "'", 0);
    return v;
}

}  // namespace bnf
