#include <cmath>

#include "bnf/models.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bnf;
using oracle::Big;

namespace {

bool encloses(const Interval& iv, const Big& x) { return Big(iv.lo) <= x && x <= Big(iv.hi); }

Interval mu_of(double m) { return {nudge_down(m), nudge_up(m)}; }

// nu_{1,2}^2 = (1 +- sqrt(1 - 27 mu (1 - mu)))/2 evaluated with 200 bits.
std::array<Big, 2> frequencies_oracle(double mu) {
    const Big m(mu);
    const Big disc = boost::multiprecision::sqrt(1 - 27 * m * (1 - m));
    return {boost::multiprecision::sqrt((1 + disc) / 2), -boost::multiprecision::sqrt((1 - disc) / 2)};
}

bool overlap(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

// A real Hamiltonian in p = -i z, q = conj z satisfies
// c(lt, l) = conj(c(l, lt)) * i^(|l| + |lt|).
bool is_real(const HomoPoly& f) {
    const int n = f.n();
    for (const Term& t : f.terms()) {
        const Exponents e = unpack(n, t.key);
        Exponents sw{};
        for (int j = 0; j < n; ++j) {
            sw[j] = e[n + j];
            sw[n + j] = e[j];
        }
        ComplexInterval want = conj(t.c);
        for (int k = 0; k < f.degree() % 4; ++k) want = times_i(want);
        const ComplexInterval got = f.coeff(pack(n, sw));
        if (!overlap(got.re, want.re) || !overlap(got.im, want.im)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("Henon-Heiles cubic in the complex variables") {
    const HomoPoly f = henon_heiles_cubic();
    CHECK(f.degree() == 3);
    CHECK(f.terms().size() == 10);
    const Big a = 1 / (2 * boost::multiprecision::sqrt(Big(2)));  // 0.3535...
    const Big b = a / 3;                                            // 0.1178...
    struct Row {
        int e[4];
        Big re, im;
    };
    const Row rows[] = {
        {{2, 1, 0, 0}, 0, -a}, {{0, 0, 0, 3}, -b, 0},   {{2, 0, 0, 1}, -a, 0},    {{1, 1, 1, 0}, -2 * a, 0},
        {{1, 0, 1, 1}, 0, 2 * a}, {{0, 3, 0, 0}, 0, b}, {{0, 2, 0, 1}, a, 0},     {{0, 1, 2, 0}, 0, a},
        {{0, 1, 0, 2}, 0, -a},  {{0, 0, 2, 1}, a, 0},
    };
    for (const Row& r : rows) {
        Exponents e{};
        for (int i = 0; i < 4; ++i) e[i] = r.e[i];
        const ComplexInterval c = f.coeff(pack(2, e));
        CAPTURE(r.e[0] * 1000 + r.e[1] * 100 + r.e[2] * 10 + r.e[3]);
        CHECK(encloses(c.re, r.re));
        CHECK(encloses(c.im, r.im));
        CHECK(c.re.width() < 1e-14);
        CHECK(c.im.width() < 1e-14);
    }
    CHECK(is_real(f));
}

TEST_CASE("Henon-Heiles initial state") {
    const HamiltonianState h = henon_heiles(Interval::point(1.0), hh_omega2_sqrt2(), 2, 5);
    CHECK(h.maj.log_a == doctest::Approx(0.4424676).epsilon(1e-7));
    CHECK(h.maj.logE == 0.0);
    CHECK(h.f[2].is_zero());
    CHECK(encloses(hh_omega2_golden(), -(boost::multiprecision::sqrt(Big(5)) - 1) / 2));
    CHECK(encloses(hh_omega2_sqrt2(), -boost::multiprecision::sqrt(Big(2)) / 2));
}

TEST_CASE("complex variables turn the harmonic part into i omega p q") {
    const HomoPoly x = x_var(2, 0), y = y_var(2, 0);
    const HomoPoly h = (multiply(x, x) + multiply(y, y)) * ComplexInterval(Interval::ratio(1, 2), Interval());
    Exponents e{};
    e[0] = 1;
    e[2] = 1;
    const ComplexInterval c = h.coeff(pack(2, e));
    CHECK(c.re.contains(0.0));
    CHECK(c.im.contains(1.0));
    for (const Term& t : h.terms())
        if (t.key != pack(2, e)) CHECK(t.c.contains_zero());
}

TEST_CASE("Routh critical mass") {
    const Big routh = (9 - boost::multiprecision::sqrt(Big(69))) / 18;
    CHECK(Big(routh_mass_lower()) <= routh);
    CHECK(Big(routh_mass_lower()) >= routh * Big(1 - 1e-14));
    CHECK_THROWS(cprtbp_frequencies(mu_of(0.04)));
    CHECK_NOTHROW(cprtbp_frequencies(mu_of(0.038)));
}

TEST_CASE("linear frequencies against a 200-bit evaluation") {
    for (const MassPreset& p : mass_presets()) {
        CAPTURE(p.name);
        const auto nu = cprtbp_frequencies(mu_of(p.mu));
        const auto ref = frequencies_oracle(p.mu);
        // The enclosures carry the uncertainty of mu itself (one ulp each way).
        for (int j = 0; j < 2; ++j) {
            CHECK(Big(nu[j].lo) <= ref[j]);
            CHECK(Big(nu[j].hi) >= ref[j]);
            CHECK(nu[j].width() < 1e-12);
        }
        CHECK(nu[0].lo > 0.0);
        CHECK(nu[1].hi < 0.0);
    }
}

TEST_CASE("quadratic part matches its closed form") {
    const double mu = 9.54e-4;
    const Big m(mu);
    const Big s3 = boost::multiprecision::sqrt(Big(3));
    for (LagrangePoint pt : {LagrangePoint::L4, LagrangePoint::L5}) {
        const Mat4 S = cprtbp_quadratic(Interval::point(mu), pt);
        const Big sign = pt == LagrangePoint::L4 ? 1 : -1;
        // ordering (P_X, P_Y, X, Y)
        const Big want[4][4] = {
            {1, 0, 0, 0},
            {0, 1, -2, 0},
            {0, -2, 1 + 9 * m / 4, -sign * 3 * s3 * m / 4},
            {0, 0, -sign * 3 * s3 * m / 4, -9 * m / 4},
        };
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                CAPTURE(i);
                CAPTURE(j);
                CHECK(encloses(S[i][j], want[i][j]));
                CHECK(S[i][j].width() < 1e-13);
            }
    }
}

TEST_CASE("symplectic diagonalization") {
    for (const MassPreset& p : mass_presets())
        for (LagrangePoint pt : {LagrangePoint::L4, LagrangePoint::L5}) {
            CAPTURE(p.name);
            const Interval mu = mu_of(p.mu);
            const Mat4 S = cprtbp_quadratic(mu, pt);
            const Diagonalization d = symplectic_diagonalize(S);
            const auto nu = cprtbp_frequencies(mu);
            const auto ref = frequencies_oracle(p.mu);
            for (int j = 0; j < 2; ++j) {
                CHECK(overlap(d.nu[j], nu[j]));
                CHECK(boost::multiprecision::abs(Big(d.nu[j].mid()) - ref[j]) < Big(1e-12));
            }
            const Mat4 sd = symplectic_defect(d.C);
            const Mat4 dd = diagonal_defect(S, d);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    CHECK(sd[i][j].contains(0.0));
                    CHECK(dd[i][j].contains(0.0));
                    CHECK(sd[i][j].mag() < 1e-10);
                }
        }
}

TEST_CASE("CPRTBP local expansion") {
    const Interval mu = mu_of(9.54e-4);
    const CprtbpModel m = cprtbp_model(mu, LagrangePoint::L4, 6, 10);
    const auto nu = cprtbp_frequencies(mu);

    SUBCASE("quadratic part encloses i nu p q") {
        for (const Term& t : m.quadratic.terms()) {
            const Exponents e = unpack(2, t.key);
            int j = -1;
            if (e[0] == 1 && e[2] == 1) j = 0;
            if (e[1] == 1 && e[3] == 1) j = 1;
            if (j < 0) {
                CHECK(t.c.contains_zero());
                continue;
            }
            CHECK(t.c.re.contains(0.0));
            CHECK(overlap(t.c.im, nu[j]));
        }
    }
    SUBCASE("classes are real and have the right degrees") {
        REQUIRE(m.f0.size() >= 7);
        for (int s = 1; s <= 6; ++s) {
            CAPTURE(s);
            CHECK(m.f0[s].degree() == s + 2);
            CHECK(!m.f0[s].is_zero());
            CHECK(is_real(m.f0[s]));
        }
    }
    SUBCASE("the Cauchy estimate dominates the computed norms") {
        InitialTail tail;
        tail.cauchy = true;
        tail.logM = m.logM;
        tail.log_inv_radius = m.log_inv_radius;
        REQUIRE(m.lognorm.size() == 9);
        for (int s = 1; s <= 8; ++s) {
            CAPTURE(s);
            CHECK(m.lognorm[s] <= tail.logF0_cauchy(2, s));
            if (s <= 6) CHECK(m.lognorm[s] >= log_minus(norm(m.f0[s]).lo));
        }
    }
    CHECK_THROWS(cprtbp_model(mu, LagrangePoint::L4, 6, 7));
}

TEST_CASE("CPRTBP state at desk scale") {
    for (const MassPreset& p : mass_presets()) {
        CAPTURE(p.name);
        const HamiltonianState h =
            cprtbp_hamiltonian(mu_of(p.mu), LagrangePoint::L4, 6, 20, ResonanceMode::non_resonant());
        CHECK(h.n == 2);
        CHECK(h.initial.cauchy);
        CHECK(std::isfinite(h.maj.log_a));
        for (int s = 7; s <= 20; ++s) CHECK(h.maj.logF[s] > kZeroLog);
    }
}

TEST_CASE("presets and lifetime") {
    REQUIRE(mass_presets().size() == 4);
    CHECK(std::string(mass_presets()[0].name) == "jupiter");
    const auto nu = cprtbp_frequencies(mu_of(4.36e-5));
    // Uranus: 6e9 * nu_1 / 84.02 years.
    CHECK(lifetime_in_units(nu[0], 84.02) == doctest::Approx(6e9 * nu[0].mid() / 84.02));
    CHECK(lifetime_in_units(nu[0], 84.02) > 7e7);
}
