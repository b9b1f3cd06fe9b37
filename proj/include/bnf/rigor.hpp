#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "bnf/errors.hpp"

namespace bnf {

// Post-multiplication factor used for directed rounding.
inline constexpr double kEpsilon = 0x1p-52;
inline constexpr double kSafeMin = 0x1p-511;
inline constexpr double kSafeMax = 0x1p+511;
// Logarithm standing for an exact zero in the majorant tables.
inline constexpr double kZeroLog = -1.0e4;

enum class Dir { Up, Down };
enum class ArithOp { Add, Sub, Mul, Div };

inline bool in_safe_range(double x) noexcept {
    const double a = std::fabs(x);
    return a == 0.0 || (a >= kSafeMin && a <= kSafeMax);
}

[[noreturn]] void throw_safe_range(double x);

inline double checked(double x) {
    if (!in_safe_range(x)) throw_safe_range(x);
    return x;
}

// r*(1+eps) moves |r| up by at least one ulp, r*(1-eps) moves it down.
inline double nudge_up(double r) noexcept { return r * (r >= 0.0 ? 1.0 + kEpsilon : 1.0 - kEpsilon); }
inline double nudge_down(double r) noexcept { return r * (r >= 0.0 ? 1.0 - kEpsilon : 1.0 + kEpsilon); }

inline double add_up(double a, double b) { return checked(nudge_up(a + b)); }
inline double add_down(double a, double b) { return checked(nudge_down(a + b)); }
inline double sub_up(double a, double b) { return checked(nudge_up(a - b)); }
inline double sub_down(double a, double b) { return checked(nudge_down(a - b)); }
inline double mul_up(double a, double b) { return checked(nudge_up(a * b)); }
inline double mul_down(double a, double b) { return checked(nudge_down(a * b)); }
double div_up(double a, double b);
double div_down(double a, double b);

double dir_op(ArithOp op, double a, double b, Dir dir);

double sqrt_up(double x);
double sqrt_down(double x);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double l, double h) : lo(l), hi(h) {}
    static Interval point(double x);
    // Smallest directed enclosure of p/q for integers that may not be representable.
    static Interval ratio(long long p, long long q);

    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const noexcept { return lo <= o.lo && o.hi <= hi; }
    bool is_exact_zero() const noexcept { return lo == 0.0 && hi == 0.0; }
    double width() const noexcept { return hi - lo; }
    double mid() const noexcept { return 0.5 * lo + 0.5 * hi; }
    double mag() const noexcept { return std::fmax(std::fabs(lo), std::fabs(hi)); }
    double mig() const noexcept;
    bool operator==(const Interval&) const = default;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
Interval iv_arith(ArithOp op, const Interval& a, const Interval& b);
Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval hull(const Interval& a, const Interval& b);
// Multiplication by an exact (integer-valued) double.
Interval scale(const Interval& a, double w);

struct ComplexInterval {
    Interval re;
    Interval im;

    constexpr ComplexInterval() = default;
    constexpr ComplexInterval(Interval r, Interval i) : re(r), im(i) {}
    static ComplexInterval real(double x) { return {Interval::point(x), Interval()}; }
    static ComplexInterval imag(double x) { return {Interval(), Interval::point(x)}; }

    bool is_exact_zero() const noexcept { return re.is_exact_zero() && im.is_exact_zero(); }
    bool contains_zero() const noexcept { return re.contains(0.0) && im.contains(0.0); }
    bool operator==(const ComplexInterval&) const = default;
};

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator*(const ComplexInterval& a, const Interval& s);
ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator/(const ComplexInterval& a, const Interval& s);
inline ComplexInterval operator-(const ComplexInterval& a) { return {-a.re, -a.im}; }
ComplexInterval conj(const ComplexInterval& a);
ComplexInterval times_i(const ComplexInterval& a);
// Upper bound of |z| over the rectangle.
double abs_upper(const ComplexInterval& a);

// Upper bound of log x (x > 0) by square-root reduction and a truncated series.
double log_plus(double x);
// Lower bound of log x.
double log_minus(double x);
// Upper bound of e^x restricted to 0 <= x <= 1.
double exp_plus(double x);
// Upper/lower bounds of e^x for any x in the safe range that keeps e^x representable.
double exp_upper(double x);
double exp_lower(double x);

struct LogBound {
    enum class Kind { Upper, Lower };

    double logval = kZeroLog;
    Kind kind = Kind::Upper;

    static LogBound upper(double v) { return {v, Kind::Upper}; }
    static LogBound lower(double v) { return {v, Kind::Lower}; }
    static LogBound zero(Kind k = Kind::Upper) { return {kZeroLog, k}; }
    bool is_zero() const noexcept { return logval == kZeroLog; }
    double log10() const noexcept;
    bool operator==(const LogBound&) const = default;
};

// Upper bound of log(e^x + e^y); kZeroLog operands are exact zeros.
double log_add_up(double x, double y);
LogBound log_add_upper(const LogBound& x, const LogBound& y);
// Products and quotients on the logarithmic scale; an exact zero absorbs.
LogBound log_mul(const LogBound& a, const LogBound& b);
LogBound log_div(const LogBound& num, const LogBound& den);

std::string to_hex(double x);
double parse_hex(std::string_view s);

}  // namespace bnf
