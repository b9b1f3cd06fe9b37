#include "bnf/scan.hpp"

#include <algorithm>
#include <cmath>

namespace bnf {

namespace {

// Walks steps 1, 2, ... on a table with its own R_II. Explicit steps come from
// h (computed on demand), estimate-only steps from the table itself.
class Driver {
public:
    Driver(HamiltonianState& h, int R_II, const ScanOptions& opt)
        : h_(h), opt_(opt), t_(replay_majorants(h, R_II, 0)) {}

    const MajorantTable& table() const { return t_; }
    bool can_step() const { return t_.r < t_.R_II; }

    void step() {
        const int r = t_.r + 1;
        if (r <= static_cast<int>(h_.history.size())) {
            apply_step_record(t_, h_.history[r - 1]);
        } else if (r <= h_.R_I()) {
            normalization_step_in_place(h_);
            if (opt_.on_explicit_step) opt_.on_explicit_step(h_);
            apply_step_record(t_, h_.history[r - 1]);
        } else {
            estimate_step(t_, r, log_minus(smallest_divisor(h_.omega, r, h_.mode).lo));
        }
    }

private:
    HamiltonianState& h_;
    const ScanOptions& opt_;
    MajorantTable t_;
};

struct Track {
    double rho = 0.0;
    std::vector<TraceEntry> trace;
    MajorantTable best;
    bool done = false;
    bool reached_R_II = false;
    std::string error;
};

std::vector<Track> run_tracks(HamiltonianState& h, const std::vector<double>& rhos, int R_II,
                              const ScanOptions& opt) {
    std::vector<Track> tracks(rhos.size());
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        if (!(rhos[i] > 0.0)) throw Error("rho must be positive");
        tracks[i].rho = rhos[i];
    }
    Driver d(h, R_II, opt);
    auto active = [&] { return std::any_of(tracks.begin(), tracks.end(), [](const Track& t) { return !t.done; }); };
    while (active()) {
        if (!d.can_step()) {
            for (Track& t : tracks)
                if (!t.done) {
                    t.done = true;
                    t.reached_R_II = true;
                }
            break;
        }
        d.step();
        const MajorantTable& tab = d.table();
        for (Track& t : tracks) {
            if (t.done) continue;
            double lr;
            try {
                lr = remainder_bound(tab, t.rho).logval;
            } catch (const TailDivergentError&) {
                t.done = true;
                if (t.trace.empty()) t.error = "no stable regime at this rho: the tail diverges from the first step";
                continue;
            }
            if (!t.trace.empty() && lr > t.trace.back().log_remainder) {
                t.done = true;
                continue;
            }
            t.trace.push_back({tab.r, lr});
            t.best = tab;
        }
    }
    return tracks;
}

// R_II for which the tail share of the action rate at the table's step drops
// below `share`; returns the table's own R_II when it already does.
int needed_R_II(const MajorantTable& t, double rho, double share) {
    if (!(share > 0.0)) return t.R_II;
    const RemainderParts p = action_rate_parts(t, rho);
    const LogBound rest = log_add_upper(p.explicit_part, p.majorant_part);
    const double target = rest.is_zero() ? p.total.logval : rest.logval + std::log(share);
    if (p.tail_part.logval <= target) return t.R_II;
    const double L = add_up(t.log_a, log_plus(rho));
    const double l1mx = log_minus(sub_down(1.0, exp_upper(L)));
    double K = t.R_II + 3;
    for (int it = 0; it < 3; ++it) {
        const double g = log_add_up(sub_up(log_plus(K), l1mx), -2.0 * l1mx);
        K = std::ceil((target - t.logE - g) / L) + 1.0;
    }
    const double grown = std::max(K - 3.0, 1.25 * t.R_II);
    return grown > 1e9 ? 1000000000 : static_cast<int>(grown);
}

std::vector<Track> tracks_with_tail_control(HamiltonianState& h, const std::vector<double>& rhos,
                                            const ScanOptions& opt, int& R_II_used) {
    int R_II = h.R_II();
    std::vector<Track> tracks;
    for (int round = 0;; ++round) {
        tracks = run_tracks(h, rhos, R_II, opt);
        int want = R_II;
        for (const Track& t : tracks) {
            if (!t.error.empty() || t.trace.empty()) continue;
            try {
                want = std::max(want, needed_R_II(t.best, t.rho, opt.tail_share));
            } catch (const TailDivergentError&) {
            }
        }
        want = std::min(want, std::max(opt.R_II_max, h.R_II()));
        if (want <= R_II || round + 1 >= opt.max_rounds) break;
        R_II = want;
    }
    R_II_used = R_II;
    return tracks;
}

}  // namespace

std::vector<StabilityResult> optimal_scan_grid(HamiltonianState& h, const std::vector<double>& rhos,
                                               const ScanOptions& opt) {
    int R_II = 0;
    const std::vector<Track> tracks = tracks_with_tail_control(h, rhos, opt, R_II);
    std::vector<StabilityResult> out;
    for (const Track& t : tracks) {
        StabilityResult s;
        s.rho = t.rho;
        s.R_II_used = R_II;
        s.trace = t.trace;
        s.reached_R_II = t.reached_R_II;
        s.error = t.error;
        if (t.error.empty() && !t.trace.empty()) {
            const MajorantTable& b = t.best;
            s.r_opt = b.r;
            s.rho0 = rho0_optimal(t.rho, s.r_opt);
            s.a_r = exp_upper(b.log_a);
            s.log_remainder = remainder_bound(b, t.rho);
            s.log_action_rate = action_rate_bound(b, t.rho);
            s.log_T = escape_time(b, t.rho, s.rho0);
            s.log_T_without_tail = escape_time_without_tail(b, t.rho, s.rho0);
        }
        out.push_back(std::move(s));
    }
    return out;
}

StabilityResult optimal_scan(const HamiltonianState& h0, double rho, const ScanOptions& opt) {
    HamiltonianState h = h0;
    StabilityResult r = optimal_scan_grid(h, {rho}, opt).front();
    if (!r.error.empty()) throw NoStableRegimeError(r.error);
    return r;
}

std::vector<ResonantStability> resonant_scan_grid(HamiltonianState& h, const std::vector<double>& rhos, double beta,
                                                  const ScanOptions& opt) {
    if (h.mode.kind != ResonanceMode::Kind::SingleResonantAngle) throw Error("resonant pipeline needs a resonant state");
    const int m = h.mode.m;
    const std::vector<Interval>& nu = h.omega.omega;
    const Interval& nu_other = nu[m == 1 ? 1 : 0];
    int R_II = 0;
    const std::vector<Track> tracks = tracks_with_tail_control(h, rhos, opt, R_II);
    std::vector<ResonantStability> out;
    for (const Track& t : tracks) {
        ResonantStability s;
        s.beta = beta;
        s.rhosq = mul_down(t.rho, t.rho);
        s.R_II_used = R_II;
        s.error = t.error;
        if (t.error.empty() && !t.trace.empty()) {
            const MajorantTable& b = t.best;
            s.r_opt = b.r;
            s.rho0sq = resonant_rho0sq(s.rhosq, beta, nu_other, nu[m - 1]);
            const double rho0 = sqrt_down(s.rho0sq);
            // Pass 1: the non-resonant actions stay in the ball up to T.
            s.log_T = escape_time(b, t.rho, rho0);
            s.passes = 1;
            // Pass 2: under that confinement, energy conservation bounds the
            // resonant excursion; the bound does not involve T, so the loop
            // closes here unless the action cannot be confined at all.
            const LogBound zbar = normal_form_sup(b, t.rho);
            const LogBound rem = remainder_bound(b, t.rho);
            s.delta_I = resonant_delta_I(mul_up(t.rho, t.rho), s.rho0sq, nu, m, zbar, rem);
            s.passes = 2;
            s.rhostarsq = sub_down(s.rhosq, exp_upper(s.delta_I.logval));
            if (!(s.rhostarsq > 0.0)) s.error = "resonant action not confinable at this rho";
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace bnf
