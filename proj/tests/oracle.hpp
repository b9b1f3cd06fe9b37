#pragma once

// High-precision references shared by the unit and acceptance tests.
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>

namespace oracle {

using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;
using Rational = boost::multiprecision::cpp_rational;

inline Big big(double x) { return Big(x); }

inline Rational rational(double x) {
    // Every double is a dyadic rational; split it exactly.
    int e = 0;
    const double m = std::frexp(x, &e);
    const auto mi = static_cast<std::int64_t>(std::ldexp(m, 53));
    Rational r(mi);
    const int shift = e - 53;
    if (shift >= 0) {
        r *= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), shift);
    } else {
        r /= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), -shift);
    }
    return r;
}

// Deterministic generator for the property suites.
inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

}  // namespace oracle
