#include "bnf/polyring.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "bnf/kernels.hpp"

namespace bnf {

// ------------------------------------------------------------------ keys

MonoKey pack(int n, const Exponents& e) {
    MonoKey k = 0;
    for (int v = 0; v < 2 * n; ++v) {
        if (e[v] < 0 || e[v] > kMaxExponent) throw Error("exponent out of range");
        k = (k << 8) | static_cast<MonoKey>(e[v]);
    }
    return k;
}

Exponents unpack(int n, MonoKey k) {
    Exponents e{};
    for (int v = 2 * n - 1; v >= 0; --v) {
        e[v] = static_cast<int>(k & 0xff);
        k >>= 8;
    }
    return e;
}

MonoKey make_key(const std::vector<int>& l, const std::vector<int>& lt) {
    if (l.size() != lt.size() || l.empty() || l.size() > static_cast<std::size_t>(kMaxDof))
        throw Error("bad multi-index pair");
    const int n = static_cast<int>(l.size());
    Exponents e{};
    for (int j = 0; j < n; ++j) {
        e[j] = l[j];
        e[n + j] = lt[j];
    }
    return pack(n, e);
}

namespace {

int key_degree(int n, MonoKey k) {
    int d = 0;
    for (int v = 0; v < 2 * n; ++v) {
        d += static_cast<int>(k & 0xff);
        k >>= 8;
    }
    return d;
}

std::uint64_t binom(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

}  // namespace

std::uint64_t monomial_count(int m, int d) {
    if (d < 0) return 0;
    if (m == 0) return d == 0 ? 1 : 0;
    return binom(static_cast<std::uint64_t>(d + m - 1), static_cast<std::uint64_t>(m - 1));
}

// ---------------------------------------------------------- dense builder

namespace {

// Lexicographic rank of an exponent vector among all vectors of m entries
// summing to D. cum[i][R][e] counts the vectors that agree before position i,
// have R left to distribute from position i on and a smaller entry there.
struct RankTable {
    int m = 0;
    int D = -1;
    std::vector<std::int64_t> cum;

    std::int64_t at(int i, int R, int e) const {
        return cum[(static_cast<std::size_t>(i) * (D + 1) + R) * (D + 1) + e];
    }

    void build(int m_, int D_) {
        m = m_;
        D = D_;
        cum.assign(static_cast<std::size_t>(std::max(m - 1, 1)) * (D + 1) * (D + 1), 0);
        for (int i = 0; i + 1 < m; ++i) {
            const int rest = m - 1 - i;
            for (int R = 0; R <= D; ++R) {
                std::int64_t s = 0;
                for (int e = 0; e <= D; ++e) {
                    cum[(static_cast<std::size_t>(i) * (D + 1) + R) * (D + 1) + e] = s;
                    if (e <= R) s += static_cast<std::int64_t>(monomial_count(rest, R - e));
                }
            }
        }
    }

    std::int32_t rank(const Exponents& e) const {
        std::int64_t r = 0;
        int R = D;
        for (int i = 0; i + 1 < m; ++i) {
            r += at(i, R, e[i]);
            R -= e[i];
        }
        return static_cast<std::int32_t>(r);
    }
};

const RankTable& rank_table(int m, int D) {
    static std::map<std::pair<int, int>, RankTable> cache;
    auto [it, fresh] = cache.try_emplace({m, D});
    if (fresh) it->second.build(m, D);
    return it->second;
}

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 26;

}  // namespace

class PolyBuilder {
public:
    PolyBuilder(int n, int degree) : n_(n), degree_(degree), table_(rank_table(2 * n, degree)) {
        const std::uint64_t count = monomial_count(2 * n, degree);
        if (count > kDenseLimit) throw Error("polynomial degree too large for the dense accumulator");
        size_ = static_cast<std::size_t>(count);
        rlo_.assign(size_, 0.0);
        rhi_.assign(size_, 0.0);
        ilo_.assign(size_, 0.0);
        ihi_.assign(size_, 0.0);
    }

    std::int32_t rank(const Exponents& e) const { return table_.rank(e); }
    kernels::Soa soa() { return {rlo_.data(), rhi_.data(), ilo_.data(), ihi_.data()}; }

    void add(std::int32_t r, const ComplexInterval& c) {
        if (!c.re.is_exact_zero()) {
            const Interval s = Interval(rlo_[r], rhi_[r]) + c.re;
            rlo_[r] = s.lo;
            rhi_[r] = s.hi;
        }
        if (!c.im.is_exact_zero()) {
            const Interval s = Interval(ilo_[r], ihi_[r]) + c.im;
            ilo_[r] = s.lo;
            ihi_[r] = s.hi;
        }
    }

    HomoPoly finish() {
        HomoPoly out(n_, degree_);
        // Walking the ranks in order enumerates the monomials in key order.
        Exponents e{};
        e[2 * n_ - 1] = degree_;
        const int m = 2 * n_;
        for (std::size_t r = 0; r < size_; ++r) {
            const bool zero = rlo_[r] == 0.0 && rhi_[r] == 0.0 && ilo_[r] == 0.0 && ihi_[r] == 0.0;
            if (!zero) {
                out.terms_.push_back({pack(n_, e), {{rlo_[r], rhi_[r]}, {ilo_[r], ihi_[r]}}});
            }
            next_composition(e, m);
        }
        return out;
    }

private:
    // Next exponent vector in increasing lexicographic order: move one unit
    // from the last nonzero entry j to position j-1 and put the rest of e[j]
    // in the final slot.
    static void next_composition(Exponents& e, int m) {
        int j = m - 1;
        while (j > 0 && e[j] == 0) --j;
        if (j == 0) return;
        const int t = e[j];
        e[j] = 0;
        e[j - 1] += 1;
        e[m - 1] = t - 1;
    }

    int n_, degree_;
    const RankTable& table_;
    std::size_t size_ = 0;
    std::vector<double> rlo_, rhi_, ilo_, ihi_;
};

// -------------------------------------------------------------- HomoPoly

HomoPoly::HomoPoly(int n, int degree) : n_(n), degree_(degree) {
    if (n < 1 || n > kMaxDof) throw Error("number of degrees of freedom must be in 1..4");
    if (degree < 0 || degree > kMaxExponent) throw Error("polynomial degree out of range");
}

bool operator==(const Term& a, const Term& b) { return a.key == b.key && a.c == b.c; }

void HomoPoly::add_term(MonoKey key, const ComplexInterval& c) {
    if (key_degree(n_, key) != degree_ || (n_ < kMaxDof && (key >> (16 * n_)) != 0))
        throw Error("monomial does not match the polynomial degree");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, MonoKey k) { return t.key < k; });
    if (it != terms_.end() && it->key == key) {
        it->c = it->c + c;
        if (it->c.is_exact_zero()) terms_.erase(it);
    } else if (!c.is_exact_zero()) {
        terms_.insert(it, Term{key, c});
    }
}

void HomoPoly::add_term(const std::vector<int>& l, const std::vector<int>& lt, const ComplexInterval& c) {
    if (static_cast<int>(l.size()) != n_) throw Error("multi-index length does not match n");
    add_term(make_key(l, lt), c);
}

ComplexInterval HomoPoly::coeff(MonoKey key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, MonoKey k) { return t.key < k; });
    if (it != terms_.end() && it->key == key) return it->c;
    return {};
}

ComplexInterval HomoPoly::coeff(const std::vector<int>& l, const std::vector<int>& lt) const {
    return coeff(make_key(l, lt));
}

HomoPoly HomoPoly::from_terms(int n, int degree, std::vector<Term> terms) {
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
    HomoPoly out(n, degree);
    for (const Term& t : terms) {
        if (key_degree(n, t.key) != degree) throw Error("monomial does not match the polynomial degree");
        if (!out.terms_.empty() && out.terms_.back().key == t.key) {
            out.terms_.back().c = out.terms_.back().c + t.c;
        } else {
            out.terms_.push_back(t);
        }
    }
    std::erase_if(out.terms_, [](const Term& t) { return t.c.is_exact_zero(); });
    return out;
}

namespace {

void require_compatible(const HomoPoly& f, const HomoPoly& g) {
    if (f.n() != g.n()) throw Error("polynomials have different numbers of degrees of freedom");
}

HomoPoly merge(const HomoPoly& f, const HomoPoly& g, bool subtract) {
    if (g.is_zero() && g.n() == 0) return f;
    if (f.is_zero() && f.n() == 0) return subtract ? -g : g;
    require_compatible(f, g);
    if (f.degree() != g.degree()) {
        if (g.is_zero()) return f;
        if (f.is_zero()) return subtract ? -g : g;
        throw Error("adding polynomials of different degrees");
    }
    std::vector<Term> out;
    out.reserve(f.size() + g.size());
    auto a = f.terms().begin(), ae = f.terms().end();
    auto b = g.terms().begin(), be = g.terms().end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->key < b->key)) {
            out.push_back(*a++);
        } else if (a == ae || b->key < a->key) {
            out.push_back({b->key, subtract ? -b->c : b->c});
            ++b;
        } else {
            const ComplexInterval c = subtract ? a->c - b->c : a->c + b->c;
            if (!c.is_exact_zero()) out.push_back({a->key, c});
            ++a;
            ++b;
        }
    }
    return HomoPoly::from_terms(f.n(), f.degree(), std::move(out));
}

}  // namespace

HomoPoly operator+(const HomoPoly& f, const HomoPoly& g) { return merge(f, g, false); }

HomoPoly operator-(const HomoPoly& f, const HomoPoly& g) { return merge(f, g, true); }

HomoPoly operator-(const HomoPoly& f) {
    std::vector<Term> out;
    out.reserve(f.size());
    for (const Term& t : f.terms()) out.push_back({t.key, -t.c});
    if (f.n() == 0) return f;
    return HomoPoly::from_terms(f.n(), f.degree(), std::move(out));
}

HomoPoly operator*(const HomoPoly& f, const ComplexInterval& c) {
    if (f.n() == 0) return f;
    std::vector<Term> out;
    out.reserve(f.size());
    for (const Term& t : f.terms()) {
        const ComplexInterval v = t.c * c;
        if (!v.is_exact_zero()) out.push_back({t.key, v});
    }
    return HomoPoly::from_terms(f.n(), f.degree(), std::move(out));
}

HomoPoly operator/(const HomoPoly& f, const Interval& d) {
    if (f.n() == 0) return f;
    std::vector<Term> out;
    out.reserve(f.size());
    for (const Term& t : f.terms()) out.push_back({t.key, t.c / d});
    return HomoPoly::from_terms(f.n(), f.degree(), std::move(out));
}

HomoPoly multiply(const HomoPoly& f, const HomoPoly& g) {
    require_compatible(f, g);
    const int n = f.n();
    PolyBuilder acc(n, f.degree() + g.degree());
    for (const Term& a : f.terms()) {
        const Exponents ea = unpack(n, a.key);
        for (const Term& b : g.terms()) {
            const Exponents eb = unpack(n, b.key);
            Exponents e{};
            for (int v = 0; v < 2 * n; ++v) e[v] = ea[v] + eb[v];
            acc.add(acc.rank(e), a.c * b.c);
        }
    }
    return acc.finish();
}

// ---------------------------------------------------------------- bracket

HomoPoly poisson(const HomoPoly& f, const HomoPoly& g) {
    require_compatible(f, g);
    const int n = f.n();
    const int degree = f.degree() + g.degree() - 2;
    if (f.degree() < 1 || g.degree() < 1) return HomoPoly(n, std::max(degree, 0));
    if (f.is_zero() || g.is_zero()) return HomoPoly(n, degree);

    const kernels::KernelSet& ks = kernels::active_kernels();
    PolyBuilder acc(n, degree);
    kernels::Soa out = acc.soa();

    const std::size_t ng = g.size();
    std::vector<double> grlo(ng), grhi(ng), gilo(ng), gihi(ng);
    std::vector<Exponents> ge(ng);
    for (std::size_t k = 0; k < ng; ++k) {
        const Term& t = g.terms()[k];
        grlo[k] = t.c.re.lo;
        grhi[k] = t.c.re.hi;
        gilo[k] = t.c.im.lo;
        gihi[k] = t.c.im.hi;
        ge[k] = unpack(n, t.key);
    }
    const kernels::ConstSoa gsoa{grlo.data(), grhi.data(), gilo.data(), gihi.data()};

    std::vector<double> plo(ng), phi(ng), pilo(ng), pihi(ng);
    const kernels::Soa prod{plo.data(), phi.data(), pilo.data(), pihi.data()};
    const kernels::ConstSoa cprod{plo.data(), phi.data(), pilo.data(), pihi.data()};
    std::vector<double> w(ng);
    std::vector<std::int32_t> src(ng), tgt(ng);

    for (const Term& ft : f.terms()) {
        const Exponents fe = unpack(n, ft.key);
        kernels::RangeWatch watch;
        ks.cmul(ft.c, gsoa, ng, prod, watch);
        watch.check();
        for (int j = 0; j < n; ++j) {
            const int a = fe[j], b = fe[n + j];
            if (a == 0 && b == 0) continue;
            std::size_t m = 0;
            for (std::size_t k = 0; k < ng; ++k) {
                const int wt = a * ge[k][n + j] - b * ge[k][j];
                if (wt == 0) continue;
                Exponents e{};
                for (int v = 0; v < 2 * n; ++v) e[v] = fe[v] + ge[k][v];
                e[j] -= 1;
                e[n + j] -= 1;
                w[m] = wt;
                src[m] = static_cast<std::int32_t>(k);
                tgt[m] = acc.rank(e);
                ++m;
            }
            ks.axpy(w.data(), src.data(), tgt.data(), cprod, m, out, watch);
            watch.check();
        }
    }
    return acc.finish();
}

std::vector<HomoPoly> lie_apply(const HomoPoly& chi, const HomoPoly& g, int max_degree) {
    std::vector<HomoPoly> out;
    if (g.degree() > max_degree) return out;
    out.push_back(g);
    const int step = chi.degree() - 2;
    if (step < 1) throw Error("lie_apply needs a generating function of degree at least 3");
    HomoPoly cur = g;
    for (int j = 1; g.degree() + j * step <= max_degree; ++j) {
        cur = poisson(chi, cur) / Interval(j, j);
        out.push_back(cur);
    }
    return out;
}

// ------------------------------------------------------------------ norms

namespace {

double abs_lower(const ComplexInterval& c) {
    const double x = c.re.mig(), y = c.im.mig();
    if (x == 0.0) return y;
    if (y == 0.0) return x;
    return sqrt_down(add_down(mul_down(x, x), mul_down(y, y)));
}

}  // namespace

Interval norm(const HomoPoly& f) {
    double lo = 0.0, hi = 0.0;
    for (const Term& t : f.terms()) {
        lo = add_down(lo, abs_lower(t.c));
        hi = add_up(hi, abs_upper(t.c));
    }
    return {lo, hi};
}

LogBound sup_norm_bound(const HomoPoly& f, double rho) {
    if (!(rho > 0.0)) throw Error("sup_norm_bound needs a positive radius");
    const double nh = norm(f).hi;
    if (nh == 0.0) return LogBound::zero();
    const double lr = log_plus(rho);
    return LogBound::upper(add_up(log_plus(nh), mul_up(static_cast<double>(f.degree()), lr)));
}

Interval d_r(const HomoPoly& chi) {
    const int n = chi.n();
    double lo = 0.0, hi = 0.0;
    for (const Term& t : chi.terms()) {
        const Exponents e = unpack(n, t.key);
        int mx = 0;
        for (int j = 0; j < n; ++j) mx = std::max({mx, e[j], e[n + j]});
        lo = add_down(lo, mul_down(abs_lower(t.c), mx));
        hi = add_up(hi, mul_up(abs_upper(t.c), mx));
    }
    return {lo, hi};
}

HomoPoly make_z0(const std::vector<Interval>& omega) {
    const int n = static_cast<int>(omega.size());
    HomoPoly z(n, 2);
    for (int j = 0; j < n; ++j) {
        Exponents e{};
        e[j] = 1;
        e[n + j] = 1;
        z.add_term(pack(n, e), {Interval(), omega[j]});
    }
    return z;
}

ComplexInterval evaluate(const HomoPoly& f, const std::vector<ComplexInterval>& p,
                         const std::vector<ComplexInterval>& q) {
    const int n = f.n();
    if (static_cast<int>(p.size()) != n || static_cast<int>(q.size()) != n) throw Error("evaluation point size");
    ComplexInterval sum;
    for (const Term& t : f.terms()) {
        const Exponents e = unpack(n, t.key);
        ComplexInterval m = t.c;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < e[j]; ++k) m = m * p[j];
            for (int k = 0; k < e[n + j]; ++k) m = m * q[j];
        }
        sum = sum + m;
    }
    return sum;
}

// -------------------------------------------------------------------- I/O

void write_poly(std::ostream& os, const HomoPoly& f) {
    const int n = f.n();
    os << n << ' ' << f.degree() << '\n';
    for (const Term& t : f.terms()) {
        const Exponents e = unpack(n, t.key);
        for (int v = 0; v < 2 * n; ++v) os << e[v] << ' ';
        os << to_hex(t.c.re.lo) << ' ' << to_hex(t.c.re.hi) << ' ' << to_hex(t.c.im.lo) << ' '
           << to_hex(t.c.im.hi) << '\n';
    }
    os << "end\n";
}

namespace {

double parse_field(const std::string& s, int line) {
    try {
        return parse_hex(s);
    } catch (const ParseError&) {
        throw ParseError("bad number '" + s + "'", line);
    }
}

}  // namespace

HomoPoly read_poly(std::istream& is, int& line) {
    std::string text;
    if (!std::getline(is, text)) throw ParseError("missing polynomial header", line + 1);
    ++line;
    std::istringstream hs(text);
    int n = 0, degree = -1;
    if (!(hs >> n >> degree) || n < 1 || n > kMaxDof || degree < 0) throw ParseError("bad polynomial header", line);
    HomoPoly f(n, degree);
    std::vector<Term> terms;
    while (true) {
        if (!std::getline(is, text)) throw ParseError("polynomial not terminated by 'end'", line + 1);
        ++line;
        if (text == "end") break;
        std::istringstream ls(text);
        Exponents e{};
        for (int v = 0; v < 2 * n; ++v)
            if (!(ls >> e[v]) || e[v] < 0 || e[v] > kMaxExponent) throw ParseError("bad exponent", line);
        std::string f4[4];
        for (auto& s : f4)
            if (!(ls >> s)) throw ParseError("missing coefficient endpoint", line);
        std::string extra;
        if (ls >> extra) throw ParseError("trailing data on monomial line", line);
        const ComplexInterval c{{parse_field(f4[0], line), parse_field(f4[1], line)},
                                {parse_field(f4[2], line), parse_field(f4[3], line)}};
        if (c.re.lo > c.re.hi || c.im.lo > c.im.hi) throw ParseError("reversed interval", line);
        const MonoKey key = pack(n, e);
        if (key_degree(n, key) != degree) throw ParseError("monomial degree mismatch", line);
        if (!terms.empty() && terms.back().key >= key) throw ParseError("monomials out of order", line);
        terms.push_back({key, c});
    }
    return HomoPoly::from_terms(n, degree, std::move(terms));
}

std::string to_text(const HomoPoly& f) {
    std::ostringstream os;
    write_poly(os, f);
    return os.str();
}

HomoPoly from_text(const std::string& s) {
    std::istringstream is(s);
    int line = 0;
    return read_poly(is, line);
}

}  // namespace bnf
