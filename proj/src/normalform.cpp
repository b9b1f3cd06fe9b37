#include "bnf/normalform.hpp"

#include <cstdlib>
#include <future>
#include <sstream>
#include <string>

namespace bnf {

bool ResonanceMode::keeps(const Exponents& e, int n) const {
    for (int j = 0; j < n; ++j) {
        if (kind == Kind::SingleResonantAngle && j == m - 1) continue;
        if (e[j] != e[n + j]) return false;
    }
    return true;
}

double InitialTail::logF0(int n, int s) const {
    const bool expanded = s >= 0 && s < static_cast<int>(lognorm.size());
    if (!cauchy) return expanded ? lognorm[s] : kZeroLog;
    if (expanded) return std::fmin(lognorm[s], logF0_cauchy(n, s));
    return logF0_cauchy(n, s);
}

double InitialTail::logF0_cauchy(int n, int s) const {
    // #monomials of degree d in 2n variables is C(d+2n-1, 2n-1)
    const int d = s + 2;
    double lc = 0.0;
    for (int k = 1; k <= 2 * n - 1; ++k) lc = sub_up(add_up(lc, log_int_up(d + k)), log_minus(k));
    return add_up(add_up(logM, lc), mul_up(d, log_inv_radius));
}

namespace {

double log_norm(const HomoPoly& p) { return p.is_zero() ? kZeroLog : log_plus(norm(p).hi); }

// Majorant part of an explicit step, shared by the live step and replays.
void apply_explicit_record(MajorantTable& t, const StepRecord& rec) {
    iterate_majorants(t, rec.r, rec.logD);
    t.logZ[rec.r] = rec.logZ_r;
    t.logF[rec.r] = kZeroLog;
    for (int s = rec.r + 1; s <= t.R_I; ++s) t.logF[s] = rec.logf_after[s];
    t.log_a = update_tail(t.log_a, rec.r, rec.logD);
    t.r = rec.r;
}

void check_parity_and_zero(const Interval& d, bool right_parity, int r, const std::vector<int>& k) {
    if (!d.contains(0.0) || !right_parity) return;
    std::ostringstream os;
    os << "resonance detected at order " << r << ": omega.k encloses 0 for k = (";
    for (std::size_t j = 0; j < k.size(); ++j) os << (j ? "," : "") << k[j];
    os << ")";
    throw ResonanceError(os.str());
}

}  // namespace

HamiltonianState make_state(const Frequencies& omega, const ResonanceMode& mode, int R_I, int R_II,
                            const std::vector<HomoPoly>& f0, double logE, double log_a0, const InitialTail& initial) {
    const int n = omega.n();
    if (n < 1 || n > kMaxDof) throw Error("unsupported number of degrees of freedom");
    if (R_I < 1) throw Error("R_I must be at least 1");
    if (mode.kind == ResonanceMode::Kind::SingleResonantAngle && (mode.m < 1 || mode.m > n))
        throw Error("resonant index out of range");
    if (R_I + 2 > kMaxExponent) throw Error("R_I too large for the monomial encoding");
    HamiltonianState h;
    h.n = n;
    h.omega = omega;
    h.mode = mode;
    h.maj = MajorantTable(R_I, R_II);
    h.initial = initial;
    h.Z.push_back(make_z0(omega.omega));
    h.f.assign(R_I + 1, HomoPoly());
    h.logf0.assign(R_I + 1, kZeroLog);
    for (int s = 1; s <= R_I; ++s) {
        HomoPoly p(n, s + 2);
        if (s < static_cast<int>(f0.size()) && !f0[s].is_zero()) {
            if (f0[s].n() != n || f0[s].degree() != s + 2) throw Error("initial class has the wrong shape");
            p = f0[s];
        }
        h.f[s] = p;
        h.logf0[s] = log_norm(p);
        h.maj.logF[s] = h.logf0[s];
    }
    for (int s = R_I + 1; s <= R_II; ++s) h.maj.logF[s] = initial.logF0(n, s);
    h.maj.logE = logE;
    h.maj.log_a = log_a0;
    h.log_a0 = log_a0;
    return h;
}

Interval smallest_divisor(const Frequencies& omega, int r, const ResonanceMode& mode) {
    if (r < 1) throw Error("smallest_divisor needs r >= 1");
    const int n = omega.n();
    const int K = r + 2;
    Interval best(0.0, 0.0);
    bool have = false;
    std::vector<int> k(n, 0);
    // Odometer over k in [-K, K]^n, filtered by 0 < |k|_1 <= K.
    for (int j = 0; j < n; ++j) k[j] = -K;
    while (true) {
        int l1 = 0;
        for (int v : k) l1 += std::abs(v);
        bool removed = l1 > 0 && l1 <= K;
        if (removed && mode.kind == ResonanceMode::Kind::SingleResonantAngle) {
            removed = false;
            for (int j = 0; j < n; ++j)
                if (j != mode.m - 1 && k[j] != 0) removed = true;
        }
        if (removed) {
            Interval d;
            for (int j = 0; j < n; ++j)
                if (k[j] != 0) d = d + scale(omega.omega[j], k[j]);
            // Every |k|_1 <= r+2 is taken; only vectors of the parity of r+2
            // are actual divisors, so only those may signal a resonance.
            check_parity_and_zero(d, (l1 - K) % 2 == 0, r, k);
            if (!d.contains(0.0)) {
                const Interval a(d.mig(), d.mag());
                if (!have || a.lo < best.lo) best.lo = a.lo;
                if (!have || a.hi < best.hi) best.hi = a.hi;
                have = true;
            }
        }
        int j = n - 1;
        while (j >= 0 && k[j] == K) k[j--] = -K;
        if (j < 0) break;
        ++k[j];
    }
    if (!have) throw ResonanceError("no removable monomials at order " + std::to_string(r));
    return best;
}

Homological solve_homological(const HomoPoly& f_r, const Frequencies& omega, const ResonanceMode& mode) {
    const int n = f_r.n();
    Homological out{HomoPoly(n, f_r.degree()), HomoPoly(n, f_r.degree())};
    std::vector<Term> chi, z;
    for (const Term& t : f_r.terms()) {
        const Exponents e = unpack(n, t.key);
        if (mode.keeps(e, n)) {
            z.push_back(t);
            continue;
        }
        Interval d;
        for (int j = 0; j < n; ++j)
            if (e[j] != e[n + j]) d = d + scale(omega.omega[j], e[j] - e[n + j]);
        if (d.contains(0.0)) {
            std::ostringstream os;
            os << "resonance detected at degree " << f_r.degree() << ": divisor of p^(";
            for (int j = 0; j < n; ++j) os << (j ? "," : "") << e[j];
            os << ") q^(";
            for (int j = 0; j < n; ++j) os << (j ? "," : "") << e[n + j];
            os << ") encloses 0";
            throw ResonanceError(os.str());
        }
        // chi coefficient -c/(i d) = i c / d
        chi.push_back({t.key, times_i(t.c) / d});
    }
    out.chi = HomoPoly::from_terms(n, f_r.degree(), std::move(chi));
    out.Z = HomoPoly::from_terms(n, f_r.degree(), std::move(z));
    return out;
}

void normalization_step_in_place(HamiltonianState& h, HomoPoly* chi_out) {
    const int r = h.steps_done() + 1;
    const int R_I = h.R_I();
    if (r > R_I) throw Error("explicit normalization step beyond R_I");
    const int top = R_I + 2;
    const HomoPoly fr = h.f[r];
    Homological hs = solve_homological(fr, h.omega, h.mode);
    const HomoPoly& chi = hs.chi;

    std::vector<HomoPoly> nf = h.f;
    StepRecord rec;
    rec.r = r;
    rec.explicit_step = true;
    rec.logD = chi.is_zero() ? kZeroLog : log_plus(d_r(chi).hi);

    if (!chi.is_zero()) {
        // Lie series of every source, computed concurrently and accumulated in
        // increasing (s, j) order so the result does not depend on scheduling.
        std::vector<std::future<std::vector<HomoPoly>>> jobs(R_I + 1);
        std::future<std::vector<HomoPoly>> zjob;
        const bool parallel = std::getenv("BNF_THREADS") == nullptr || std::atoi(std::getenv("BNF_THREADS")) > 1;
        const auto policy = parallel ? std::launch::async : std::launch::deferred;
        for (int s = 1; s <= R_I; ++s) {
            if (s == r) continue;
            const HomoPoly* src = s < r ? &h.Z[s] : &h.f[s];
            if (src->is_zero() || s + r > R_I) continue;
            jobs[s] = std::async(policy, [&chi, src, top] { return lie_apply(chi, *src, top); });
        }
        if (2 * r <= R_I) {
            jobs[r] = std::async(policy, [&chi, &fr, top] { return lie_apply(chi, fr, top); });
            if (!hs.Z.is_zero()) zjob = std::async(policy, [&chi, &hs, top] { return lie_apply(chi, hs.Z, top); });
        }
        for (int s = 1; s <= R_I; ++s) {
            if (!jobs[s].valid()) continue;
            const std::vector<HomoPoly> terms = jobs[s].get();
            if (s != r) {
                for (std::size_t j = 1; j < terms.size(); ++j) nf[s + j * r] = nf[s + j * r] + terms[j];
                continue;
            }
            // f_r together with the Z_0 chain, using L_chi Z_0 = Z_r - f_r:
            // class (j+1)r receives  j/(j+1) L^j f_r / j!  +  1/(j+1) L^j Z_r / j!
            const std::vector<HomoPoly> zt = zjob.valid() ? zjob.get() : std::vector<HomoPoly>{};
            for (std::size_t j = 1; j < terms.size(); ++j) {
                const int jj = static_cast<int>(j);
                const int tgt = (jj + 1) * r;
                HomoPoly add = terms[j] * ComplexInterval{Interval::ratio(jj, jj + 1), Interval()};
                if (j < zt.size()) add = add + zt[j] / Interval::point(jj + 1);
                nf[tgt] = nf[tgt] + add;
            }
        }
    }
    nf[r] = HomoPoly();

    rec.logZ_r = log_norm(hs.Z);
    rec.logf_after.assign(R_I + 1, kZeroLog);
    for (int s = r + 1; s <= R_I; ++s) rec.logf_after[s] = log_norm(nf[s]);

    apply_explicit_record(h.maj, rec);
    h.f = std::move(nf);
    h.Z.push_back(std::move(hs.Z));
    h.history.push_back(std::move(rec));
    if (chi_out) *chi_out = std::move(hs.chi);
}

HamiltonianState normalization_step(const HamiltonianState& h, HomoPoly* chi_out) {
    HamiltonianState out = h;
    normalization_step_in_place(out, chi_out);
    return out;
}

void advance(HamiltonianState& h) {
    const int r = h.steps_done() + 1;
    if (r <= h.R_I()) {
        normalization_step_in_place(h);
        return;
    }
    if (r > h.R_II()) throw Error("cannot normalize beyond R_II");
    StepRecord rec;
    rec.r = r;
    rec.log_alpha = log_minus(smallest_divisor(h.omega, r, h.mode).lo);
    rec.logD = estimate_step(h.maj, r, rec.log_alpha);
    h.history.push_back(std::move(rec));
}

HamiltonianState normalize(const HamiltonianState& h, int target_r) {
    if (target_r < h.steps_done()) throw Error("normalize cannot go backwards");
    if (target_r > h.R_II()) throw Error("target step beyond R_II");
    HamiltonianState out = h;
    while (out.steps_done() < target_r) advance(out);
    return out;
}

namespace {

MajorantTable fresh_table(const HamiltonianState& h, int R_I, int R_II) {
    MajorantTable t(R_I, R_II);
    for (int s = 1; s <= R_II; ++s)
        t.logF[s] = s <= h.R_I() ? h.logf0[s] : h.initial.logF0(h.n, s);
    t.logE = h.maj.logE;
    t.log_a = h.log_a0;
    return t;
}

}  // namespace

MajorantTable replay_majorants(const HamiltonianState& h, int R_II, int upto) {
    if (R_II < h.R_I()) throw Error("replay needs R_II >= R_I");
    if (upto > static_cast<int>(h.history.size())) throw Error("replay beyond the recorded history");
    MajorantTable t = fresh_table(h, h.R_I(), R_II);
    for (int i = 0; i < upto; ++i) {
        const StepRecord& rec = h.history[i];
        apply_step_record(t, rec);
    }
    return t;
}

void apply_step_record(MajorantTable& t, const StepRecord& rec) {
    if (rec.explicit_step)
        apply_explicit_record(t, rec);
    else
        estimate_step(t, rec.r, rec.log_alpha);
}

MajorantTable shadow_majorants(const HamiltonianState& h, int upto) {
    if (upto > static_cast<int>(h.history.size())) throw Error("shadow beyond the recorded history");
    MajorantTable t = fresh_table(h, 0, h.R_II());
    for (int i = 0; i < upto; ++i) {
        const StepRecord& rec = h.history[i];
        const int r = rec.r;
        iterate_majorants(t, r, rec.logD);
        t.logZ[r] = t.logF[r];
        t.logF[r] = kZeroLog;
        t.log_a = update_tail(t.log_a, r, rec.logD);
        t.r = r;
    }
    return t;
}

}  // namespace bnf
