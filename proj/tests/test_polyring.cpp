#include <cmath>
#include <sstream>

#include "bnf/polyring.hpp"
#include "doctest.h"
#include "exact_poly.hpp"

using namespace bnf;
using oracle::Big;

namespace {

// Random polynomial with dyadic point coefficients, so exact references apply.
HomoPoly random_poly(int n, int degree, std::mt19937_64& g, int terms = 6) {
    std::uniform_int_distribution<int> var(0, 2 * n - 1);
    std::uniform_int_distribution<int> num(-64, 64);
    std::map<MonoKey, std::pair<double, double>> acc;  // small dyadics add exactly
    for (int t = 0; t < terms; ++t) {
        Exponents e{};
        for (int d = 0; d < degree; ++d) e[var(g)] += 1;
        auto& c = acc[pack(n, e)];
        c.first += num(g) / 16.0;
        c.second += num(g) / 16.0;
    }
    std::vector<Term> ts;
    for (const auto& [k, c] : acc) ts.push_back({k, {Interval::point(c.first), Interval::point(c.second)}});
    return HomoPoly::from_terms(n, degree, ts);
}

bool contains_zero_poly(const HomoPoly& f) {
    for (const Term& t : f.terms())
        if (!t.c.contains_zero()) return false;
    return true;
}

std::vector<Interval> hh_omega() { return {Interval::point(1.0), -(sqrt(Interval::point(2.0)) / Interval::point(2.0))}; }

}  // namespace

TEST_CASE("key packing follows lexicographic order") {
    Exponents a{}, b{};
    a[0] = 1;
    a[3] = 2;  // p1 q2^2
    b[1] = 3;  // p2^3
    CHECK(pack(2, a) > pack(2, b));
    CHECK(unpack(2, pack(2, a)) == a);
    CHECK(make_key({1, 0}, {0, 2}) == pack(2, a));
    CHECK(monomial_count(4, 3) == 20);
    CHECK(monomial_count(4, 0) == 1);
}

TEST_CASE("sparse form drops exact zeros and keeps straddling intervals") {
    HomoPoly f(2, 3);
    f.add_term({2, 1}, {0, 0}, {Interval::point(1.0), Interval()});
    f.add_term({2, 1}, {0, 0}, {Interval::point(-1.0), Interval()});
    CHECK(f.is_zero());
    f.add_term({0, 0}, {0, 3}, {Interval(-1e-20, 1e-20), Interval()});
    CHECK(f.size() == 1);
    CHECK_THROWS_AS(f.add_term({1, 0}, {0, 0}, {Interval::point(1.0), Interval()}), Error);
}

TEST_CASE("brackets of action monomials vanish") {
    const HomoPoly z0 = make_z0(hh_omega());
    HomoPoly i1(2, 2);
    i1.add_term({1, 0}, {1, 0}, ComplexInterval::real(1.0));
    CHECK(poisson(i1, z0).is_zero());
    HomoPoly za(2, 4);
    za.add_term({1, 1}, {1, 1}, ComplexInterval::real(2.5));
    za.add_term({2, 0}, {2, 0}, ComplexInterval::real(-0.5));
    CHECK(poisson(i1, za).is_zero());
    CHECK(poisson(za, z0).is_zero());
}

TEST_CASE("bracket with Z0 multiplies by i omega.(l - lt)") {
    const HomoPoly z0 = make_z0(hh_omega());
    HomoPoly f(2, 3);
    f.add_term({2, 1}, {0, 0}, ComplexInterval::real(1.0));
    const HomoPoly b = poisson(f, z0);
    REQUIRE(b.size() == 1);
    const ComplexInterval c = b.coeff({2, 1}, {0, 0});
    CHECK(c.re.is_exact_zero());
    const double div = 2.0 - std::sqrt(2.0) / 2.0;
    CHECK(c.im.contains(div));
    CHECK(c.im.width() < 1e-14);
    CHECK(std::fabs(0.353553390593273731 / div - 0.273459080339013560) < 1e-15);
}

TEST_CASE("bracket agrees with exact differentiation") {
    auto& g = oracle::rng();
    for (int t = 0; t < 200; ++t) {
        const int df = 2 + t % 3, dg = 2 + (t / 3) % 3;
        const HomoPoly f = random_poly(2, df, g), h = random_poly(2, dg, g);
        const HomoPoly b = poisson(f, h);
        CHECK(b.degree() == df + dg - 2);
        const exact::Poly ref = exact::poisson(exact::from_interval_poly(f), exact::from_interval_poly(h));
        REQUIRE(exact::contained(ref, b));
    }
}

TEST_CASE("three degrees of freedom") {
    auto& g = oracle::rng();
    for (int t = 0; t < 30; ++t) {
        const HomoPoly f = random_poly(3, 3, g), h = random_poly(3, 4, g);
        const exact::Poly ref = exact::poisson(exact::from_interval_poly(f), exact::from_interval_poly(h));
        REQUIRE(exact::contained(ref, poisson(f, h)));
    }
}

TEST_CASE("antisymmetry, Leibniz and Jacobi") {
    auto& g = oracle::rng();
    for (int t = 0; t < 1000; ++t) {
        const HomoPoly f = random_poly(2, 3, g, 4);
        const HomoPoly a = random_poly(2, 3, g, 4);
        const HomoPoly b = random_poly(2, 2 + t % 3, g, 3);
        REQUIRE(contains_zero_poly(poisson(f, a) + poisson(a, f)));
        const HomoPoly leib = poisson(f, multiply(a, b)) - multiply(a, poisson(f, b)) - multiply(poisson(f, a), b);
        REQUIRE(contains_zero_poly(leib));
        if (t % 4 == 0) {
            const HomoPoly jac = poisson(f, poisson(a, b)) + poisson(a, poisson(b, f)) + poisson(b, poisson(f, a));
            REQUIRE(contains_zero_poly(jac));
        }
    }
}

TEST_CASE("bracket norm is bounded by the product of norms") {
    auto& g = oracle::rng();
    for (int t = 0; t < 300; ++t) {
        const int s = 1 + t % 3, r = 1 + (t / 3) % 3;
        const HomoPoly f = random_poly(2, s + 2, g), h = random_poly(2, r + 2, g);
        const double lhs = norm(poisson(f, h)).hi;
        const double rhs = (s + 2) * (r + 2) * norm(f).hi * norm(h).hi * (1 + 1e-10);
        REQUIRE(lhs <= rhs);
    }
}

TEST_CASE("lie_apply degree bookkeeping and terms") {
    auto& g = oracle::rng();
    const HomoPoly chi = random_poly(2, 3, g), f = random_poly(2, 3, g);
    const auto terms = lie_apply(chi, f, 7);
    REQUIRE(terms.size() == 5);
    for (std::size_t j = 0; j < terms.size(); ++j) CHECK(terms[j].degree() == 3 + static_cast<int>(j));
    CHECK(lie_apply(chi, f, 3).size() == 1);
    CHECK(lie_apply(chi, f, 3)[0] == f);
    // second term is {chi,{chi,f}}/2
    exact::Poly ref = exact::poisson(exact::from_interval_poly(chi), exact::from_interval_poly(f));
    ref = exact::poisson(exact::from_interval_poly(chi), ref);
    ref = exact::scale(ref, {exact::Rational(1, 2), 0});
    CHECK(exact::contained(ref, terms[2]));
}

TEST_CASE("truncated Lie series is canonical up to interval slack") {
    auto& g = oracle::rng();
    for (int t = 0; t < 20; ++t) {
        const HomoPoly chi = random_poly(2, 3, g, 3), f = random_poly(2, 3, g, 3), h = random_poly(2, 3, g, 3);
        const int top = 6;  // bracket of two cubics is quartic; compare degrees 4..6
        const auto ef = lie_apply(chi, f, top - 1), eh = lie_apply(chi, h, top - 1);
        const auto lhs = lie_apply(chi, poisson(f, h), top);
        for (int d = 4; d <= top; ++d) {
            HomoPoly rhs(2, d);
            for (std::size_t a = 0; a < ef.size(); ++a)
                for (std::size_t b = 0; b < eh.size(); ++b)
                    if (ef[a].degree() + eh[b].degree() - 2 == d) rhs = rhs + poisson(ef[a], eh[b]);
            REQUIRE(contains_zero_poly(lhs[d - 4] - rhs));
        }
    }
}

TEST_CASE("norms, sup norm and D_r") {
    CHECK(norm(HomoPoly(2, 3)) == Interval(0, 0));
    HomoPoly m(2, 3);
    m.add_term({3, 0}, {0, 0}, ComplexInterval::real(1.0));
    const LogBound b = sup_norm_bound(m, 0.1);
    CHECK(b.logval >= std::log(1e-3));
    CHECK(b.logval <= std::log(1e-3) + 1e-12);
    const LogBound b2 = sup_norm_bound(m, 0.01);
    CHECK(std::fabs((b.logval - b2.logval) - 3 * std::log(10.0)) < 1e-12);
    CHECK(sup_norm_bound(HomoPoly(2, 3), 0.1).is_zero());

    HomoPoly c(2, 3);
    const ComplexInterval cc{Interval::point(0.6), Interval::point(-0.8)};
    c.add_term({3, 0}, {0, 0}, cc);
    const Interval d = d_r(c);
    CHECK(d.lo <= 3.0);
    CHECK(d.hi >= 3.0);
    CHECK(d.hi <= 3.0 + 1e-14);

    auto& g = oracle::rng();
    for (int t = 0; t < 1000; ++t) {
        const int r = 1 + t % 4;
        const HomoPoly chi = random_poly(2, r + 2, g);
        REQUIRE(d_r(chi).hi <= mul_up(r + 2, norm(chi).hi));
        REQUIRE(Big(norm(chi).hi) >= exact::norm(exact::from_interval_poly(chi)));
        REQUIRE(Big(norm(chi).lo) <= exact::norm(exact::from_interval_poly(chi)));
    }
}

TEST_CASE("fixture text format round-trips bit-exactly") {
    auto& g = oracle::rng();
    HomoPoly f = random_poly(2, 5, g, 12);
    f.add_term({1, 1}, {2, 1}, {Interval(-0x1.123p-40, 0x1.8p-3), Interval(1.0 / 3.0, 0.5)});
    const std::string text = to_text(f);
    const HomoPoly back = from_text(text);
    CHECK(back == f);
    CHECK(to_text(back) == text);
    CHECK(from_text(to_text(HomoPoly(2, 4))) == HomoPoly(2, 4));
}

TEST_CASE("fixture parse errors carry line numbers") {
    try {
        from_text("2 3\n1 0 2 0 0x1p+0 0x1p+0 0 0\n0 3 0 0 zz 0 0 0\nend\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(from_text("2 3\n1 0 2 0 0x1p+0 0x1p+0 0 0\n"), ParseError);
    CHECK_THROWS_AS(from_text("2 3\n1 0 1 0 0x1p+0 0x1p+0 0 0\nend\n"), ParseError);
}

TEST_CASE("evaluation is consistent with multiplication") {
    auto& g = oracle::rng();
    const HomoPoly f = random_poly(2, 3, g), h = random_poly(2, 2, g);
    const std::vector<ComplexInterval> p{ComplexInterval::real(0.3), {Interval::point(0.1), Interval::point(-0.2)}};
    const std::vector<ComplexInterval> q{ComplexInterval::imag(0.7), ComplexInterval::real(-0.4)};
    const ComplexInterval a = evaluate(multiply(f, h), p, q);
    const ComplexInterval b = evaluate(f, p, q) * evaluate(h, p, q);
    CHECK(a.re.lo <= b.re.hi);
    CHECK(b.re.lo <= a.re.hi);
    CHECK(a.im.lo <= b.im.hi);
    CHECK(b.im.lo <= a.im.hi);
}
