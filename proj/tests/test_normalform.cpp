#include <cmath>
#include <string>

#include "bnf/models.hpp"
#include "bnf/normalform.hpp"
#include "doctest.h"
#include "exact_poly.hpp"

using namespace bnf;

namespace {

// One printed coefficient: exponents (p1 p2 q1 q2), real and imaginary
// central values, and the printed half-width.
struct Printed {
    int e[4];
    double re, im, half;
};

ComplexInterval coeff(const HomoPoly& f, const int (&e)[4]) {
    Exponents k{};
    for (int i = 0; i < 4; ++i) k[i] = e[i];
    return f.coeff(pack(2, k));
}

void check_printed(const HomoPoly& f, const std::vector<Printed>& table) {
    std::size_t nonzero = 0;
    for (const Term& t : f.terms())
        if (!t.c.contains_zero()) ++nonzero;
    CHECK(nonzero == table.size());
    for (const Printed& p : table) {
        const ComplexInterval c = coeff(f, p.e);
        CAPTURE(p.e[0]);
        CAPTURE(p.e[1]);
        CAPTURE(p.e[2]);
        CAPTURE(p.e[3]);
        // The printed decimals are themselves rounded to about 1e-18.
        const double slack = 1e-17 + p.half;
        CHECK(c.re.lo <= p.re + slack);
        CHECK(c.re.hi >= p.re - slack);
        CHECK(c.im.lo <= p.im + slack);
        CHECK(c.im.hi >= p.im - slack);
        CHECK(c.re.width() <= 10.0 * p.half);
        CHECK(c.im.width() <= 10.0 * p.half);
    }
}

HamiltonianState worked_example() { return henon_heiles(Interval::point(1.0), hh_omega2_sqrt2(), 2, 5); }

HamiltonianState golden(int R_I, const ResonanceMode& mode = {}) {
    return henon_heiles(Interval::point(1.0), hh_omega2_golden(), R_I, 4 * R_I, mode);
}

bool contains_zero_poly(const HomoPoly& f) {
    for (const Term& t : f.terms())
        if (!t.c.contains_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("first generating function of the worked example") {
    HamiltonianState h = worked_example();
    HomoPoly chi;
    normalization_step_in_place(h, &chi);
    const double a = 0.273459080339013560, b = 0.130601937481870711;
    const double one = 0.999999999999999889, c = 0.0555555555555555525, d = 0.499999999999999889;
    check_printed(chi, {
                           {{2, 1, 0, 0}, a, 0.0, 20345e-18},
                           {{2, 0, 0, 1}, 0.0, -b, 5246e-18},
                           {{1, 1, 1, 0}, 0.0, one, 40524e-18},
                           {{0, 0, 0, 3}, 0.0, -c, 22552e-19},
                           {{1, 0, 1, 1}, -one, 0.0, 40080e-18},
                           {{0, 3, 0, 0}, c, 0.0, 22934e-19},
                           {{0, 2, 0, 1}, 0.0, -d, 20401e-18},
                           {{0, 1, 2, 0}, b, 0.0, 5246e-18},
                           {{0, 1, 0, 2}, d, 0.0, 20318e-18},
                           {{0, 0, 2, 1}, 0.0, -a, 20096e-18},
                       });
}

TEST_CASE("second normal-form term of the worked example") {
    HamiltonianState h = normalize(worked_example(), 2);
    check_printed(h.Z[2], {
                              {{2, 0, 2, 0}, -0.656599153958936865, 0.0, 325684e-18},
                              {{0, 2, 0, 2}, -0.589255650988789514, 0.0, 313083e-18},
                              {{1, 1, 1, 1}, 1.98564213380166632, 0.0, 125900e-17},
                          });
    CHECK(h.Z[1].is_zero());
}

TEST_CASE("worked-example state sets after each step") {
    HamiltonianState h = worked_example();
    CHECK(h.maj.log_a == doctest::Approx(0.4424676).epsilon(1e-7));
    h = normalize(h, 2);
    CHECK(h.maj.logF[3] == doctest::Approx(6.685803).epsilon(1e-6));
    CHECK(h.maj.logF[4] == doctest::Approx(9.014286).epsilon(1e-6));
    CHECK(h.maj.logF[5] == doctest::Approx(11.55494).epsilon(1e-6));
    CHECK(h.maj.log_a == doctest::Approx(2.664144).epsilon(1e-6));
    advance(h);
    CHECK(h.maj.logF[5] == doctest::Approx(13.18247).epsilon(1e-6));
    CHECK(h.maj.log_a == doctest::Approx(3.937671).epsilon(1e-6));
    advance(h);
    CHECK(h.maj.log_a == doctest::Approx(4.002009).epsilon(1e-6));
}

TEST_CASE("homological residual encloses zero at every explicit step") {
    for (const auto& mode : {ResonanceMode::non_resonant(), ResonanceMode::single(2)}) {
        HamiltonianState h = golden(8, mode);
        const HomoPoly z0 = make_z0(h.omega.omega);
        for (int r = 1; r <= 8; ++r) {
            const HomoPoly fr = h.f[r];
            const Homological hs = solve_homological(fr, h.omega, h.mode);
            CAPTURE(r);
            CHECK(contains_zero_poly(poisson(hs.chi, z0) + fr - hs.Z));
            normalization_step_in_place(h);
        }
    }
}

TEST_CASE("normal form keeps only the allowed monomials") {
    SUBCASE("non-resonant: actions only") {
        HamiltonianState h = normalize(golden(8), 8);
        for (int s = 1; s <= 8; ++s) {
            if (s % 2) CHECK(h.Z[s].is_zero());
            for (const Term& t : h.Z[s].terms()) {
                const Exponents e = unpack(2, t.key);
                CHECK(e[0] == e[2]);
                CHECK(e[1] == e[3]);
            }
        }
    }
    SUBCASE("resonant angle of the second mode stays") {
        HamiltonianState h = normalize(golden(8, ResonanceMode::single(2)), 8);
        bool saw_angle = false;
        for (int s = 1; s <= 8; ++s)
            for (const Term& t : h.Z[s].terms()) {
                const Exponents e = unpack(2, t.key);
                CHECK(e[0] == e[2]);
                if (e[1] != e[3]) saw_angle = true;
            }
        CHECK(saw_angle);
    }
}

TEST_CASE("normalized classes are emptied and untouched ones keep their norms") {
    HamiltonianState h = golden(6);
    for (int r = 1; r <= 6; ++r) {
        normalization_step_in_place(h);
        for (int s = 1; s <= r; ++s) CHECK(h.f[s].is_zero());
        for (int s = r + 1; s <= 6; ++s) {
            const double ln = h.f[s].is_zero() ? kZeroLog : log_plus(norm(h.f[s]).hi);
            CHECK(h.maj.logF[s] == ln);
        }
    }
}

TEST_CASE("majorants propagated from step 0 dominate the explicit norms") {
    HamiltonianState h = golden(10);
    for (int r = 1; r <= 10; ++r) {
        normalization_step_in_place(h);
        const MajorantTable shadow = shadow_majorants(h, r);
        for (int s = r + 1; s <= 10; ++s) {
            if (h.f[s].is_zero()) continue;
            CAPTURE(r);
            CAPTURE(s);
            CHECK(shadow.logF[s] >= log_minus(norm(h.f[s]).lo));
        }
        for (int s = 1; s <= r; ++s)
            if (!h.Z[s].is_zero()) CHECK(shadow.logZ[s] >= log_minus(norm(h.Z[s]).lo));
    }
}

TEST_CASE("tail radius a_r never decreases") {
    HamiltonianState h = golden(6);
    double prev = h.maj.log_a;
    for (int r = 1; r <= 24; ++r) {
        advance(h);
        CHECK(h.maj.log_a >= prev);
        prev = h.maj.log_a;
    }
}

TEST_CASE("replaying the history reproduces the live table") {
    HamiltonianState h = golden(6);
    for (int r = 1; r <= 12; ++r) advance(h);
    CHECK(replay_majorants(h, h.R_II(), 12) == h.maj);
    const MajorantTable wider = replay_majorants(h, 2 * h.R_II(), 12);
    CHECK(wider.log_a == h.maj.log_a);
}

TEST_CASE("a resonant divisor is reported") {
    // omega = (1, -1/2): p1 p2^2 has divisor 1 + 2*(-1/2) = 0.
    CHECK_THROWS_AS(henon_heiles(Interval::point(1.0), Interval::point(-0.5), 4, 8), ResonanceError);
    const Frequencies w{{Interval::point(1.0), Interval::point(-0.5)}, std::nullopt};
    Exponents e{};
    e[0] = 1;
    e[1] = 2;
    const HomoPoly f = HomoPoly::from_terms(2, 3, {{pack(2, e), {Interval::point(1.0), Interval()}}});
    CHECK_THROWS_AS(solve_homological(f, w, ResonanceMode::non_resonant()), ResonanceError);
}

TEST_CASE("smallest divisor over the removed set") {
    Frequencies w{{Interval::point(1.0), hh_omega2_golden()}, std::nullopt};
    // |k| <= 3: the smallest is |2 omega_1 + 3 omega_2| ~ 0.146 or |omega_1 + omega_2| ~ 0.382.
    const Interval d = smallest_divisor(w, 1, ResonanceMode::non_resonant());
    CHECK(d.lo > 0.0);
    CHECK(d.hi < 0.4);
    CHECK(smallest_divisor(w, 20, ResonanceMode::non_resonant()).hi <= d.lo);
}
