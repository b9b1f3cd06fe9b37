#pragma once

#include <vector>

#include "bnf/polyring.hpp"

namespace bnf {

// Power series truncated at total degree `order`, stored as its homogeneous
// parts in the same variables as HomoPoly.
class Series {
public:
    Series() = default;
    Series(int n, int order);

    static Series constant(int n, int order, const ComplexInterval& c);
    // Embeds a homogeneous polynomial (dropped if its degree exceeds order).
    static Series from_poly(const HomoPoly& h, int order);

    int n() const noexcept { return n_; }
    int order() const noexcept { return order_; }
    const HomoPoly& part(int d) const { return parts_.at(d); }
    HomoPoly& part(int d) { return parts_.at(d); }

private:
    int n_ = 0;
    int order_ = 0;
    std::vector<HomoPoly> parts_;
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator*(const Series& a, const ComplexInterval& c);
Series operator*(const Series& a, const Interval& c);
// Product truncated at the common order.
Series multiply(const Series& a, const Series& b);

// sum_k c_k w^k by Horner's rule; w must have no constant part.
Series compose(const std::vector<Interval>& c, const Series& w);

// Taylor coefficients at 0 up to x^order.
std::vector<Interval> taylor_inverse(int order);         // 1/(1+x)
std::vector<Interval> taylor_inverse_square(int order);  // 1/(1+x)^2
std::vector<Interval> taylor_inverse_sqrt(int order);    // (1+x)^(-1/2)
std::vector<Interval> taylor_cos(int order);
std::vector<Interval> taylor_sin(int order);

}  // namespace bnf
