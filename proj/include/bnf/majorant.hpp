#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bnf/rigor.hpp"

namespace bnf {

// Numeric half of the state set S^(r): logarithms of norms or majorants for
// every class s in [0, R_II], plus the tail pair (log E, log a_r).
//
//   logZ[s]  s <= min(r, R_I): log of the explicit norm of Z_s
//            R_I < s <= r:     log of the majorant for Z_s
//   logF[s]  r < s <= R_I:     log of the explicit norm of f_s^(r)
//            s > max(r, R_I):  log of the majorant F_s^(r)
//
// Entries outside those ranges hold kZeroLog.
struct MajorantTable {
    int R_I = 0;
    int R_II = 0;
    int r = 0;
    std::vector<double> logZ;
    std::vector<double> logF;
    double logE = 0.0;
    double log_a = 0.0;

    MajorantTable() = default;
    MajorantTable(int r_i, int r_ii);
    bool operator==(const MajorantTable&) const = default;
};

// Per-step data needed to replay the majorant iteration with another R_II.
struct StepRecord {
    int r = 0;
    bool explicit_step = false;
    double logD = kZeroLog;    // log of D_r (upper)
    double log_alpha = 0.0;    // log of alpha_r (lower); estimate-only steps
    // Explicit steps: log norms of Z_r and of f_s^(r) for r < s <= R_I.
    double logZ_r = kZeroLog;
    std::vector<double> logf_after;  // indexed by s, size R_I+1
    bool operator==(const StepRecord&) const = default;
};

// Upper bounds of log k and lower bounds of log k! for small integers, cached.
double log_int_up(int k);
double log_factorial_down(int k);

// Majorant redefinitions for step r: sources are Z_s (1 <= s < r) and f_s
// (s >= r), targets s + j r in (R_I, R_II]; right-hand sides use the values
// from before the step.
void iterate_majorants(MajorantTable& t, int r, double logD);

// log a_r from log a_{r-1}: a_r = a_{r-1} (1 + (r+1) D_r / a_{r-1}^r)^(1/r).
double update_tail(double log_a_prev, int r, double logD);

// Estimate-only step r > R_I: D_r = (r+2) F_r / alpha_r, Z_r majorant = F_r.
// Returns log D_r.
double estimate_step(MajorantTable& t, int r, double log_alpha);

struct RemainderParts {
    LogBound explicit_part;  // classes r < s <= R_I
    LogBound majorant_part;  // classes max(r, R_I) < s <= R_II
    LogBound tail_part;      // classes s > R_II
    LogBound total;
};

// Upper bound of log sup |R^(r)| on the ball of radius rho.
RemainderParts remainder_parts(const MajorantTable& t, double rho);
LogBound remainder_bound(const MajorantTable& t, double rho);
// Upper bound of log max_j |dI_j/dt| on the ball of radius rho.
RemainderParts action_rate_parts(const MajorantTable& t, double rho);
LogBound action_rate_bound(const MajorantTable& t, double rho);
// Lower bound of log T(rho, rho0, r) = log[(rho^2 - rho0^2) / action rate].
LogBound escape_time(const MajorantTable& t, double rho, double rho0);
// Same formula with the geometric tail left out of the denominator; only
// used as a diagnostic next to the rigorous value.
double escape_time_without_tail(const MajorantTable& t, double rho, double rho0);

// sqrt((r+1)/(r+3)) rho, rounded down.
double rho0_optimal(double rho, int r_opt);

struct TraceEntry {
    int r = 0;
    double log_remainder = 0.0;
    bool operator==(const TraceEntry&) const = default;
};

struct StabilityResult {
    double rho = 0.0;
    double rho0 = 0.0;
    int r_opt = 0;
    double a_r = 0.0;
    LogBound log_remainder;
    LogBound log_action_rate;
    LogBound log_T{0.0, LogBound::Kind::Lower};
    double log_T_without_tail = 0.0;  // diagnostic only
    int R_II_used = 0;
    bool reached_R_II = false;  // the trace was still decreasing at the last step
    std::vector<TraceEntry> trace;
    std::string error;  // set when no stable regime was found at this rho
};

// Resonant confinement (slow action m).
struct ResonantStability {
    double rho0sq = 0.0;
    double rhostarsq = 0.0;
    double rhosq = 0.0;
    double beta = 0.9;
    LogBound delta_I;
    LogBound log_T{0.0, LogBound::Kind::Lower};
    int r_opt = 0;
    int passes = 0;
    int R_II_used = 0;
    std::string error;
};

// Upper bound of log sup |Zbar| on the ball: all normal-form classes 1..r.
LogBound normal_form_sup(const MajorantTable& t, double rho);

// rho0^2 from beta rho^2 = rho^2 + nu_1 (rho^2 - rho0^2) / nu_m, rounded down.
double resonant_rho0sq(double rhosq, double beta, const Interval& nu1, const Interval& num);
double resonant_rho0(double rho, double beta, const Interval& nu1, const Interval& num);

// Upper bound of Delta I_m over a confinement window; log_Zbar is an upper
// bound of log sup |Zbar_1| on the ball.
LogBound resonant_delta_I(double rhosq, double rho0sq, const std::vector<Interval>& nu, int m, LogBound log_Zbar,
                          LogBound log_remainder);

}  // namespace bnf
