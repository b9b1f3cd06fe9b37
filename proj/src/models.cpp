#include "bnf/models.hpp"

#include <cmath>

#include "bnf/series.hpp"

namespace bnf {

namespace {

Interval inv_sqrt2() { return Interval::point(1.0) / sqrt(Interval::point(2.0)); }

HomoPoly linear(int n, int j, const ComplexInterval& cp, const ComplexInterval& cq) {
    HomoPoly v(n, 1);
    Exponents ep{}, eq{};
    ep[j] = 1;
    eq[n + j] = 1;
    v.add_term(pack(n, ep), cp);
    v.add_term(pack(n, eq), cq);
    return v;
}

}  // namespace

HomoPoly x_var(int n, int j) {
    const Interval s = inv_sqrt2();
    return linear(n, j, {Interval(), s}, {s, Interval()});
}

HomoPoly y_var(int n, int j) {
    const Interval s = inv_sqrt2();
    return linear(n, j, {s, Interval()}, {Interval(), s});
}

Interval hh_omega2_sqrt2() { return -(sqrt(Interval::point(2.0)) / Interval::point(2.0)); }

Interval hh_omega2_golden() {
    return -((sqrt(Interval::point(5.0)) - Interval::point(1.0)) / Interval::point(2.0));
}

HomoPoly henon_heiles_cubic() {
    const HomoPoly x1 = x_var(2, 0), x2 = x_var(2, 1);
    const HomoPoly x2c = multiply(multiply(x2, x2), x2);
    return multiply(multiply(x1, x1), x2) - x2c / Interval::point(3.0);
}

HamiltonianState henon_heiles(const Interval& omega1, const Interval& omega2, int R_I, int R_II,
                              const ResonanceMode& mode, double logE) {
    Frequencies w{{omega1, omega2}, std::nullopt};
    std::vector<HomoPoly> f0(2);
    f0[1] = henon_heiles_cubic();
    const double log_a0 = div_up(log_plus(norm(f0[1]).hi), 3.0);
    // Fail early on a resonance up to the explicit order.
    for (int r = 1; r <= R_I; ++r) smallest_divisor(w, r, mode);
    return make_state(w, mode, R_I, R_II, f0, logE, log_a0);
}

// ---------------------------------------------------------------- CPRTBP

double routh_mass_lower() {
    const Interval r = (Interval::point(9.0) - sqrt(Interval::point(69.0))) / Interval::point(18.0);
    return r.lo;
}

namespace {

void require_below_routh(const Interval& mu) {
    if (!(mu.lo > 0.0)) throw Error("mass ratio must be positive");
    if (!(mu.hi < routh_mass_lower())) throw Error("mass ratio at or above the Routh critical value");
}

}  // namespace

std::array<Interval, 2> cprtbp_frequencies(const Interval& mu) {
    require_below_routh(mu);
    const Interval one = Interval::point(1.0), two = Interval::point(2.0), k27 = Interval::point(27.0);
    const Interval disc = k27 * sqr(mu) - k27 * mu + one;
    if (!(disc.lo > 0.0)) throw Error("mass ratio at or above the Routh critical value");
    const Interval s = sqrt(disc);
    // 1 - s = 27 mu (1 - mu) / (1 + s), free of cancellation for small mu.
    const Interval one_minus_s = k27 * mu * (one - mu) / (one + s);
    return {sqrt((one + s) / two), -sqrt(one_minus_s / two)};
}

namespace {

enum Coord { kPX = 0, kPY = 1, kX = 2, kY = 3 };

// The two non-polynomial pieces of H in the local coordinates,
//   a(X) = (1+X)^-2,
//   b(X, Y) = -mu (1+X) cos(Y+phi) - (1-mu)/(1+X) - mu / dist(X, Y),
// as series in p_1 = X, q_1 = Y. phi = -2pi/3 at L4 and +2pi/3 at L5.
struct LocalParts {
    Series a;
    Series b;
};

LocalParts local_parts(const Interval& mu, LagrangePoint point, int order) {
    const Interval half = Interval::ratio(1, 2);
    const Series one = Series::constant(1, order, ComplexInterval::real(1.0));
    HomoPoly xl(1, 1), yl(1, 1);
    xl.add_term(pack(1, Exponents{1, 0}), ComplexInterval::real(1.0));
    yl.add_term(pack(1, Exponents{0, 1}), ComplexInterval::real(1.0));
    const Series X = Series::from_poly(xl, order), Y = Series::from_poly(yl, order);

    const Interval c0 = -half;
    const Interval s0 = (point == LagrangePoint::L4 ? -half : half) * sqrt(Interval::point(3.0));
    const Series cphi = compose(taylor_cos(order), Y) * c0 - compose(taylor_sin(order), Y) * s0;
    const Series onepX = one + X;

    LocalParts lp;
    lp.a = compose(taylor_inverse_square(order), X);
    lp.b = multiply(onepX, cphi) * (-mu) - compose(taylor_inverse(order), X) * (Interval::point(1.0) - mu);

    // Squared distance to the planet minus one: 2X + X^2 + 1 + 2(1+X)cos(Y+phi).
    Series w = X * Interval::point(2.0) + multiply(X, X) + one + multiply(onepX, cphi) * Interval::point(2.0);
    if (!w.part(0).coeff(MonoKey{0}).contains_zero()) throw Error("local expansion is not centred at the equilibrium");
    w.part(0) = HomoPoly(1, 0);
    lp.b = lp.b - compose(taylor_inverse_sqrt(order), w) * mu;
    return lp;
}

// g(X, Y) with X, Y replaced by linear forms, by Horner's rule in Y over
// polynomials in X.
Series substitute(const Series& g, const HomoPoly& xl, const HomoPoly& yl) {
    const int n = xl.n(), N = g.order();
    std::vector<HomoPoly> xpow(N + 1);
    xpow[0] = HomoPoly(n, 0);
    xpow[0].add_term(MonoKey{0}, ComplexInterval::real(1.0));
    for (int i = 1; i <= N; ++i) xpow[i] = multiply(xpow[i - 1], xl);
    const Series Y = Series::from_poly(yl, N);
    Series acc(n, N);
    for (int j = N; j >= 0; --j) {
        if (j < N) acc = multiply(acc, Y);
        for (int i = 0; i + j <= N; ++i) {
            const ComplexInterval c = g.part(i + j).coeff(pack(1, Exponents{i, j}));
            if (!c.is_exact_zero()) acc.part(i) = acc.part(i) + xpow[i] * c;
        }
    }
    return acc;
}

// H in the local coordinates minus its constant term, with (P_X, P_Y, X, Y)
// given as linear forms.
Series local_hamiltonian(const std::array<HomoPoly, 4>& lin, const Interval& mu, LagrangePoint point, int order) {
    const int n = lin[0].n();
    const Interval half = Interval::ratio(1, 2);
    const LocalParts lp = local_parts(mu, point, order);
    const Series one = Series::constant(n, order, ComplexInterval::real(1.0));
    const Series px = Series::from_poly(lin[0], order), py = Series::from_poly(lin[1], order);
    const Series onepPY = one + py;

    Series h = multiply(px, px) * half;
    h = h + multiply(multiply(onepPY, onepPY), substitute(lp.a, lin[2], lin[3])) * half;
    h = h - py;
    h = h + substitute(lp.b, lin[2], lin[3]);
    h.part(0) = HomoPoly(n, 0);
    return h;
}

// Real coordinates as the variables p_1, p_2, q_1, q_2 of a HomoPoly.
std::array<HomoPoly, 4> real_coordinates() {
    std::array<HomoPoly, 4> lin;
    for (int k = 0; k < 4; ++k) {
        Exponents e{};
        e[k] = 1;
        lin[k] = HomoPoly(2, 1);
        lin[k].add_term(pack(2, e), ComplexInterval::real(1.0));
    }
    return lin;
}

using CMat = std::array<std::array<ComplexInterval, 4>, 4>;

ComplexInterval det3(const CMat& m, int skip_row, int skip_col) {
    int r[3], c[3];
    for (int i = 0, a = 0, b = 0; i < 4; ++i) {
        if (i != skip_row) r[a++] = i;
        if (i != skip_col) c[b++] = i;
    }
    auto e = [&](int i, int j) { return m[r[i]][c[j]]; };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

// J in the ordering (P_X, P_Y, X, Y): dP/dt = -dH/dQ, dQ/dt = dH/dP.
Interval J(int i, int j) {
    if (i < 2 && j == i + 2) return Interval::point(-1.0);
    if (i >= 2 && j == i - 2) return Interval::point(1.0);
    return Interval();
}

Mat4 product(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Interval s;
            for (int k = 0; k < 4; ++k) s = s + a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

Mat4 transpose(const Mat4& a) {
    Mat4 t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = a[j][i];
    return t;
}

Mat4 J_matrix() {
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = J(i, j);
    return m;
}

}  // namespace

Mat4 cprtbp_quadratic(const Interval& mu, LagrangePoint point) {
    require_below_routh(mu);
    const Series h = local_hamiltonian(real_coordinates(), mu, point, 2);
    if (!h.part(1).is_zero())
        for (const Term& t : h.part(1).terms())
            if (!t.c.contains_zero()) throw Error("local expansion has a linear part");
    Mat4 S{};
    for (const Term& t : h.part(2).terms()) {
        const Exponents e = unpack(2, t.key);
        int a = -1, b = -1;
        for (int k = 0; k < 4; ++k)
            for (int m = 0; m < e[k]; ++m) (a < 0 ? a : b) = k;
        if (b < 0) b = a;
        if (a == b) {
            S[a][a] = scale(t.c.re, 2.0);
        } else {
            S[a][b] = t.c.re;
            S[b][a] = t.c.re;
        }
    }
    return S;
}

Diagonalization symplectic_diagonalize(const Mat4& S) {
    // A = J S; its characteristic polynomial is l^4 + b l^2 + c with
    // b = -tr(A^2)/2 and c = det S.
    Mat4 A{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Interval s;
            for (int k = 0; k < 4; ++k) s = s + J(i, k) * S[k][j];
            A[i][j] = s;
        }
    const Mat4 A2 = product(A, A);
    Interval tr;
    for (int i = 0; i < 4; ++i) tr = tr + A2[i][i];
    const Interval b = -tr / Interval::point(2.0);
    CMat Sc{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) Sc[i][j] = {S[i][j], Interval()};
    Interval c;
    for (int k = 0; k < 4; ++k) {
        const Interval m = det3(Sc, 0, k).re * S[0][k];
        c = k % 2 ? c - m : c + m;
    }
    const Interval disc = sqr(b) - scale(c, 4.0);
    if (!(disc.lo > 0.0) || !(c.lo > 0.0) || !(b.lo > 0.0))
        throw Error("not an elliptic equilibrium with distinct frequencies");
    const Interval sd = sqrt(disc);
    // The small root as c over the large one avoids the cancellation in b - sd.
    const Interval big = (b + sd) / Interval::point(2.0);
    const std::array<Interval, 2> absnu = {sqrt(big), sqrt(c / big)};

    Diagonalization d{};
    for (int j = 0; j < 2; ++j) {
        CMat M{};
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < 4; ++k) M[r][k] = {A[r][k], r == k ? -absnu[j] : Interval()};
        // Any row of cofactors of the singular matrix spans its kernel; take
        // the one of largest size.
        std::array<ComplexInterval, 4> u{};
        double best = -1.0;
        for (int row = 0; row < 4; ++row) {
            std::array<ComplexInterval, 4> v{};
            double size = 0.0;
            for (int k = 0; k < 4; ++k) {
                v[k] = det3(M, row, k);
                if ((row + k) % 2) v[k] = -v[k];
                size = std::fmax(size, abs_upper(v[k]));
            }
            if (size > best) {
                best = size;
                u = v;
            }
        }
        std::array<Interval, 4> cx{}, cy{};
        for (int k = 0; k < 4; ++k) {
            cx[k] = u[k].re;
            cy[k] = u[k].im;
        }
        Interval kappa;
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < 4; ++k)
                if (!J(r, k).is_exact_zero()) kappa = kappa + cx[r] * J(r, k) * cy[k];
        Interval nu = absnu[j];
        if (kappa.hi < 0.0) {
            // The conjugate vector carries the frequency -|nu|.
            kappa = -kappa;
            for (auto& e : cy) e = -e;
            nu = -nu;
        }
        if (!(kappa.lo > 0.0)) throw Error("degenerate eigenvector in the symplectic diagonalization");
        const Interval s = sqrt(kappa);
        for (int k = 0; k < 4; ++k) {
            d.C[k][j] = cy[k] / s;
            d.C[k][2 + j] = cx[k] / s;
        }
        d.nu[j] = nu;
    }
    return d;
}

Mat4 symplectic_defect(const Mat4& C) {
    const Mat4 Jm = J_matrix();
    Mat4 D = product(transpose(C), product(Jm, C));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) D[i][j] = D[i][j] - Jm[i][j];
    return D;
}

Mat4 diagonal_defect(const Mat4& S, const Diagonalization& d) {
    Mat4 D = product(transpose(d.C), product(S, d.C));
    for (int j = 0; j < 4; ++j) D[j][j] = D[j][j] - d.nu[j % 2];
    return D;
}

namespace {

double cosh_up(double r) { return div_up(add_up(exp_upper(r), exp_upper(-r)), 2.0); }
double sinh_up(double r) { return div_up(sub_up(exp_upper(r), exp_lower(-r)), 2.0); }

struct CauchyData {
    double R = 0.0;
    double logM = 0.0;
};

// Radii of the coordinates on the polydisk |p_j|, |q_j| <= R, and an upper
// bound of |H| there from termwise majorants; empty when some singularity is
// not kept at distance 1/2.
std::optional<double> sup_bound(const Mat4& C, const Interval& mu, double R) {
    std::array<double, 4> rv{};
    const double s2R = mul_up(sqrt_up(2.0), R);
    for (int v = 0; v < 4; ++v) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s = add_up(s, C[v][k].mag());
        rv[v] = mul_up(s2R, s);
    }
    const double rX = rv[kX], rY = rv[kY];
    if (!(rX <= 0.5)) return std::nullopt;
    const double ch = cosh_up(rY), sh = sinh_up(rY);
    double wmax = add_up(mul_up(2.0, rX), mul_up(rX, rX));
    wmax = add_up(wmax, sub_up(ch, 1.0));
    wmax = add_up(wmax, mul_up(sqrt_up(3.0), sh));
    wmax = add_up(wmax, mul_up(mul_up(2.0, rX), ch));
    if (!(wmax <= 0.5)) return std::nullopt;
    const double mu_hi = mu.hi, one_m_mu = sub_up(1.0, mu.lo);
    const double inv1mX = div_up(1.0, sub_down(1.0, rX));
    double M = div_up(mul_up(rv[kPX], rv[kPX]), 2.0);
    const double opy = add_up(1.0, rv[kPY]);
    M = add_up(M, div_up(mul_up(mul_up(opy, opy), mul_up(inv1mX, inv1mX)), 2.0));
    M = add_up(M, rv[kPY]);
    M = add_up(M, mul_up(mu_hi, mul_up(add_up(1.0, rX), ch)));
    M = add_up(M, mul_up(one_m_mu, inv1mX));
    M = add_up(M, div_up(mu_hi, sqrt_down(sub_down(1.0, wmax))));
    return M;
}

CauchyData cauchy_data(const Mat4& C, const Interval& mu) {
    double lo = 0.0, hi = 1.0;
    while (sup_bound(C, mu, hi)) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sup_bound(C, mu, mid) ? lo : hi) = mid;
    }
    if (!(lo > 0.0)) throw Error("no analyticity polydisk around the equilibrium");
    return {lo, log_plus(*sup_bound(C, mu, lo))};
}

// Ratio q of the geometric majorant E (q/R)^d of the Cauchy bounds
// M C(d+3,3) / R^d, and log of the constant K = max_d C(d+3,3) q^-d.
constexpr double kCauchyRatio = 1.1;

double log_binomial_constant() {
    const double lq = log_minus(kCauchyRatio);
    double best = 0.0;
    for (int d = 3; d <= 4000; ++d) {
        const double binom = (d + 3.0) * (d + 2.0) * (d + 1.0) / 6.0;
        best = std::fmax(best, sub_up(log_plus(binom), mul_down(d, lq)));
    }
    return best;
}

}  // namespace

CprtbpModel cprtbp_model(const Interval& mu, LagrangePoint point, int R_I, int degree) {
    if (R_I < 1) throw Error("R_I must be at least 1");
    if (degree == 0) degree = R_I + 2;
    if (degree < R_I + 2) throw Error("expansion degree below R_I + 2");
    CprtbpModel m;
    m.mu = mu;
    m.point = point;
    m.diag = symplectic_diagonalize(cprtbp_quadratic(mu, point));

    // (P_X, P_Y, X, Y) = C (y_1, y_2, x_1, x_2) in the complex variables.
    std::array<HomoPoly, 4> w = {y_var(2, 0), y_var(2, 1), x_var(2, 0), x_var(2, 1)};
    std::array<HomoPoly, 4> lin;
    for (int v = 0; v < 4; ++v) {
        lin[v] = HomoPoly(2, 1);
        for (int k = 0; k < 4; ++k) lin[v] = lin[v] + w[k] * ComplexInterval(m.diag.C[v][k], Interval());
    }
    const Series h = local_hamiltonian(lin, mu, point, degree);
    for (const Term& t : h.part(1).terms())
        if (!t.c.contains_zero()) throw Error("local expansion has a linear part");
    m.quadratic = h.part(2);
    m.f0.assign(R_I + 1, HomoPoly());
    for (int s = 1; s <= R_I; ++s) m.f0[s] = h.part(s + 2);
    m.lognorm.assign(degree - 1, kZeroLog);
    for (int s = 1; s <= degree - 2; ++s)
        if (!h.part(s + 2).is_zero()) m.lognorm[s] = log_plus(norm(h.part(s + 2)).hi);

    const CauchyData cd = cauchy_data(m.diag.C, mu);
    m.logM = cd.logM;
    m.log_inv_radius = log_plus(div_up(1.0, cd.R));
    m.logE = add_up(m.logM, log_binomial_constant());
    m.log_a0 = add_up(log_plus(kCauchyRatio), m.log_inv_radius);
    return m;
}

HamiltonianState cprtbp_hamiltonian(const Interval& mu, LagrangePoint point, int R_I, int R_II,
                                    const ResonanceMode& mode, int degree) {
    const CprtbpModel m = cprtbp_model(mu, point, R_I, degree);
    Frequencies w{{m.diag.nu[0], m.diag.nu[1]}, std::nullopt};
    for (int r = 1; r <= R_I; ++r) smallest_divisor(w, r, mode);
    InitialTail tail;
    tail.cauchy = true;
    tail.logM = m.logM;
    tail.log_inv_radius = m.log_inv_radius;
    tail.lognorm = m.lognorm;
    return make_state(w, mode, R_I, R_II, m.f0, m.logE, m.log_a0, tail);
}

const std::vector<MassPreset>& mass_presets() {
    static const std::vector<MassPreset> presets = {
        {"jupiter", 9.54e-4, 11.862},
        {"uranus", 4.36e-5, 84.02},
        {"mars", 3.21e-7, 1.8808},
        {"janus", 3.36e-9, 0.6945 / 365.25},
    };
    return presets;
}

double lifetime_in_units(const Interval& nu1, double period_years) {
    return kLifetimeYears * nu1.mid() / period_years;
}

}  // namespace bnf
