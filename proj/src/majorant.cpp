#include "bnf/majorant.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

namespace bnf {

namespace {

// Logs below this are replaced by it: raising an upper bound keeps it valid
// and keeps real values away from the kZeroLog sentinel.
constexpr double kLogFloor = -9000.0;

double floor_log(double v) { return v < kLogFloor ? kLogFloor : v; }

struct LogTables {
    std::vector<double> up;         // log k, upper
    std::vector<double> down;       // log k, lower
    std::vector<double> fact_down;  // log k!, lower
};

std::shared_ptr<const LogTables> log_tables(int need) {
    static std::mutex mu;
    static std::shared_ptr<const LogTables> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (cache && static_cast<int>(cache->up.size()) > need) return cache;
    auto t = std::make_shared<LogTables>();
    const int size = std::max(need + 1, 2 * (cache ? static_cast<int>(cache->up.size()) : 64));
    t->up.resize(size);
    t->down.resize(size);
    t->fact_down.resize(size);
    t->up[0] = t->down[0] = kZeroLog;
    t->fact_down[0] = 0.0;
    for (int k = 1; k < size; ++k) {
        t->up[k] = k == 1 ? 0.0 : log_plus(k);
        t->down[k] = k == 1 ? 0.0 : log_minus(k);
        t->fact_down[k] = add_down(t->fact_down[k - 1], t->down[k]);
    }
    cache = t;
    return cache;
}

struct TailTerms {
    double L;      // log(a rho), upper
    double log1mx; // log(1 - a rho), lower
};

TailTerms tail_terms(const MajorantTable& t, double rho) {
    const double L = add_up(t.log_a, log_plus(rho));
    if (L >= 0.0) throw TailDivergentError("tail divergent at this rho: a_r rho >= 1");
    const double x = exp_upper(L);
    if (x >= 1.0) throw TailDivergentError("tail divergent at this rho: a_r rho >= 1");
    return {L, log_minus(sub_down(1.0, x))};
}

RemainderParts assemble(LogBound e, LogBound m, LogBound tail) {
    RemainderParts p{e, m, tail, {}};
    p.total = log_add_upper(log_add_upper(e, m), tail);
    return p;
}

// Classes r < s <= R_II with the weight (s+2)^weighted rho^(s+2).
void class_sums(const MajorantTable& t, double rho, bool weighted, LogBound& expl, LogBound& maj) {
    const double lr = log_plus(rho);
    const auto tab = log_tables(t.R_II + 2);
    double e = kZeroLog, m = kZeroLog;
    for (int s = t.r + 1; s <= t.R_II; ++s) {
        const double f = t.logF[s];
        if (f == kZeroLog) continue;
        double v = add_up(f, mul_up(s + 2, lr));
        if (weighted) v = add_up(v, tab->up[s + 2]);
        v = floor_log(v);
        if (s <= t.R_I)
            e = log_add_up(e, v);
        else
            m = log_add_up(m, v);
    }
    expl = LogBound::upper(e);
    maj = LogBound::upper(m);
}

}  // namespace

MajorantTable::MajorantTable(int r_i, int r_ii)
    : R_I(r_i), R_II(r_ii), logZ(r_ii + 1, kZeroLog), logF(r_ii + 1, kZeroLog) {
    if (r_i < 0 || r_ii < r_i || r_ii < 1) throw Error("need 0 <= R_I <= R_II");
}

double log_int_up(int k) { return log_tables(k)->up[k]; }
double log_factorial_down(int k) { return log_tables(k)->fact_down[k]; }

void iterate_majorants(MajorantTable& t, int r, double logD) {
    if (r < 1) throw Error("iterate_majorants needs r >= 1");
    if (logD == kZeroLog) return;
    const auto tab = log_tables(t.R_II + 2);
    const std::vector<double> oldF = t.logF;
    for (int s = 1; s + r <= t.R_II; ++s) {
        const double src = s < r ? t.logZ[s] : oldF[s];
        if (src == kZeroLog) continue;
        // coef_j = log[prod_{i<j} (s+ir+2) / j!] + j log D_r, built incrementally
        double coef = 0.0;
        for (int j = 1, tgt = s + r; tgt <= t.R_II; ++j, tgt += r) {
            coef = add_up(coef, tab->up[s + (j - 1) * r + 2]);
            coef = sub_up(coef, tab->down[j]);
            coef = add_up(coef, logD);
            if (tgt <= t.R_I) continue;
            t.logF[tgt] = log_add_up(t.logF[tgt], floor_log(add_up(coef, src)));
        }
    }
}

double update_tail(double log_a_prev, int r, double logD) {
    if (logD == kZeroLog) return log_a_prev;
    // log[(r+1) D_r / a^r], with a^r taken from below
    const double x = sub_up(add_up(log_int_up(r + 1), logD), mul_down(r, log_a_prev));
    const double growth = div_up(log_add_up(0.0, x), r);
    return add_up(log_a_prev, growth);
}

double estimate_step(MajorantTable& t, int r, double log_alpha) {
    if (r <= t.R_I || r > t.R_II) throw Error("estimate-only steps need R_I < r <= R_II");
    if (t.r != r - 1) throw Error("estimate step out of order");
    const double fr = t.logF[r];
    const double logD = fr == kZeroLog ? kZeroLog : sub_up(add_up(log_int_up(r + 2), fr), log_alpha);
    iterate_majorants(t, r, logD);
    t.logZ[r] = fr;
    t.logF[r] = kZeroLog;
    t.log_a = update_tail(t.log_a, r, logD);
    t.r = r;
    return logD;
}

RemainderParts remainder_parts(const MajorantTable& t, double rho) {
    LogBound e, m;
    class_sums(t, rho, false, e, m);
    const TailTerms tt = tail_terms(t, rho);
    const int K = t.R_II + 3;
    const double tail = floor_log(sub_up(add_up(t.logE, mul_up(K, tt.L)), tt.log1mx));
    return assemble(e, m, LogBound::upper(tail));
}

LogBound remainder_bound(const MajorantTable& t, double rho) { return remainder_parts(t, rho).total; }

RemainderParts action_rate_parts(const MajorantTable& t, double rho) {
    LogBound e, m;
    class_sums(t, rho, true, e, m);
    const TailTerms tt = tail_terms(t, rho);
    // sum_{k>=K} k x^k = x^K (K - (K-1) x)/(1-x)^2; the middle factor takes x
    // from below (a_r is e^log_a exactly, so log(a rho) >= log_a + log- rho).
    const int K = t.R_II + 3;
    const double x_lo = exp_lower(add_down(t.log_a, log_minus(rho)));
    const double mid = sub_up(K, mul_down(K - 1, x_lo));
    const double tail =
        floor_log(sub_up(add_up(add_up(t.logE, mul_up(K, tt.L)), log_plus(mid)), mul_down(2.0, tt.log1mx)));
    return assemble(e, m, LogBound::upper(tail));
}

LogBound action_rate_bound(const MajorantTable& t, double rho) { return action_rate_parts(t, rho).total; }

namespace {

double log_gap_lower(double rho, double rho0) {
    if (!(rho0 > 0.0 && rho0 < rho)) throw Error("escape time needs 0 < rho0 < rho");
    const double gap = sub_down(mul_down(rho, rho), mul_up(rho0, rho0));
    if (!(gap > 0.0)) throw Error("rho0 too close to rho for a positive escape time");
    return log_minus(gap);
}

}  // namespace

LogBound escape_time(const MajorantTable& t, double rho, double rho0) {
    const double num = log_gap_lower(rho, rho0);
    const LogBound rate = action_rate_bound(t, rho);
    return LogBound::lower(sub_down(num, rate.logval));
}

double escape_time_without_tail(const MajorantTable& t, double rho, double rho0) {
    const double num = log_gap_lower(rho, rho0);
    const RemainderParts p = action_rate_parts(t, rho);
    const LogBound rate = log_add_upper(p.explicit_part, p.majorant_part);
    return sub_down(num, rate.logval);
}

LogBound normal_form_sup(const MajorantTable& t, double rho) {
    const double lr = log_plus(rho);
    double acc = kZeroLog;
    for (int s = 1; s <= t.r; ++s)
        if (t.logZ[s] != kZeroLog) acc = log_add_up(acc, floor_log(add_up(t.logZ[s], mul_up(s + 2, lr))));
    return LogBound::upper(acc);
}

double rho0_optimal(double rho, int r_opt) {
    if (r_opt < 1) throw Error("rho0_optimal needs r_opt >= 1");
    return mul_down(sqrt_down(div_down(r_opt + 1, r_opt + 3)), rho);
}

double resonant_rho0sq(double rhosq, double beta, const Interval& nu1, const Interval& num) {
    if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0,1)");
    const bool opposite = (nu1.lo > 0.0 && num.hi < 0.0) || (nu1.hi < 0.0 && num.lo > 0.0);
    if (!opposite) throw Error("resonant rho0 needs nu_1 and nu_m of opposite signs");
    // beta rho^2 = rho^2 + nu_1 (rho^2 - rho0^2)/nu_m  =>  rho^2 - rho0^2 = (1-beta) rho^2 |nu_m|/|nu_1|
    const double drop = div_up(mul_up(mul_up(sub_up(1.0, beta), rhosq), num.mag()), nu1.mig());
    const double r0 = sub_down(rhosq, drop);
    if (!(r0 > 0.0)) throw Error("no resonant rho0 in (0, rho)");
    return r0;
}

double resonant_rho0(double rho, double beta, const Interval& nu1, const Interval& num) {
    return sqrt_down(resonant_rho0sq(mul_down(rho, rho), beta, nu1, num));
}

LogBound resonant_delta_I(double rhosq, double rho0sq, const std::vector<Interval>& nu, int m, LogBound log_Zbar,
                          LogBound log_remainder) {
    if (m < 1 || m > static_cast<int>(nu.size())) throw Error("resonant index out of range");
    double others = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j)
        if (static_cast<int>(j) != m - 1) others = add_up(others, nu[j].mag());
    const double lin = mul_up(others, sub_up(rhosq, rho0sq));
    const double log_lin = lin > 0.0 ? log_plus(lin) : kZeroLog;
    const LogBound energy = log_add_upper(log_Zbar, log_remainder);
    const LogBound twice = energy.is_zero() ? energy : LogBound::upper(add_up(energy.logval, log_int_up(2)));
    const LogBound numer = log_add_upper(LogBound::upper(log_lin), twice);
    const double den = nu[m - 1].mig();
    if (!(den > 0.0)) throw Error("resonant frequency encloses zero");
    if (numer.is_zero()) return numer;
    return LogBound::upper(sub_up(numer.logval, log_minus(den)));
}

}  // namespace bnf
