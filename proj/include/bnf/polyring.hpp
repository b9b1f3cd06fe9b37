#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnf/rigor.hpp"

namespace bnf {

// Polynomials live in the variables p_j = -i z_j and q_j = conj(z_j), j < n.
// A monomial p^l q^lt is packed into 64 bits, one byte per exponent, in the
// order p_1..p_n q_1..q_n with p_1 most significant, so that comparing keys
// numerically is the lexicographic order on (l, lt).
using MonoKey = std::uint64_t;

inline constexpr int kMaxDof = 4;
inline constexpr int kMaxExponent = 255;

using Exponents = std::array<int, 2 * kMaxDof>;

MonoKey pack(int n, const Exponents& e);
Exponents unpack(int n, MonoKey k);
// Key of p^l q^lt from the two exponent vectors.
MonoKey make_key(const std::vector<int>& l, const std::vector<int>& lt);

struct Term {
    MonoKey key;
    ComplexInterval c;
};

class HomoPoly {
public:
    HomoPoly() = default;
    HomoPoly(int n, int degree);

    int n() const noexcept { return n_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    // Adds c to the coefficient of the monomial; exact-zero results are dropped.
    void add_term(MonoKey key, const ComplexInterval& c);
    void add_term(const std::vector<int>& l, const std::vector<int>& lt, const ComplexInterval& c);
    // Coefficient of a monomial, the exact zero when absent.
    ComplexInterval coeff(MonoKey key) const;
    ComplexInterval coeff(const std::vector<int>& l, const std::vector<int>& lt) const;

    // Builds from terms in arbitrary order; repeated keys are summed.
    static HomoPoly from_terms(int n, int degree, std::vector<Term> terms);

    bool operator==(const HomoPoly&) const = default;

private:
    friend class PolyBuilder;
    int n_ = 0;
    int degree_ = 0;
    std::vector<Term> terms_;  // sorted by key, no exact-zero coefficients
};

bool operator==(const Term& a, const Term& b);

HomoPoly operator+(const HomoPoly& f, const HomoPoly& g);
HomoPoly operator-(const HomoPoly& f, const HomoPoly& g);
HomoPoly operator-(const HomoPoly& f);
HomoPoly operator*(const HomoPoly& f, const ComplexInterval& c);
HomoPoly operator/(const HomoPoly& f, const Interval& d);
// Ordinary product, degree deg f + deg g.
HomoPoly multiply(const HomoPoly& f, const HomoPoly& g);

// {f,g} = sum_j (d_{p_j} f d_{q_j} g - d_{q_j} f d_{p_j} g).
HomoPoly poisson(const HomoPoly& f, const HomoPoly& g);
// (1/j!) L_chi^j g for j = 0, 1, ... while the degree stays <= max_degree.
std::vector<HomoPoly> lie_apply(const HomoPoly& chi, const HomoPoly& g, int max_degree);

// sum |c| over the coefficients; hi is a rigorous upper bound, lo a lower one.
Interval norm(const HomoPoly& f);
// Upper bound of log(rho^deg * ||f||).
LogBound sup_norm_bound(const HomoPoly& f, double rho);
// Upper bound of sum |c| max_j max(l_j, lt_j).
Interval d_r(const HomoPoly& chi);

// Z_0 = sum_j i omega_j p_j q_j.
HomoPoly make_z0(const std::vector<Interval>& omega);
// Value at a point (p, q), used by round-trip checks.
ComplexInterval evaluate(const HomoPoly& f, const std::vector<ComplexInterval>& p,
                         const std::vector<ComplexInterval>& q);

// Fixture format: a header line "n degree", then one line per monomial
// "l_1 .. l_n lt_1 .. lt_n re_lo re_hi im_lo im_hi" with hex-float endpoints.
void write_poly(std::ostream& os, const HomoPoly& f);
HomoPoly read_poly(std::istream& is, int& line);
std::string to_text(const HomoPoly& f);
HomoPoly from_text(const std::string& s);

// Number of monomials of total degree d in m variables.
std::uint64_t monomial_count(int m, int d);

}  // namespace bnf
