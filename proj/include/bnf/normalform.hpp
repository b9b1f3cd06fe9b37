#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bnf/majorant.hpp"
#include "bnf/polyring.hpp"

namespace bnf {

struct Frequencies {
    std::vector<Interval> omega;
    // Optional Diophantine constants (gamma, tau); informational only.
    std::optional<std::pair<double, double>> diophantine;

    int n() const noexcept { return static_cast<int>(omega.size()); }
    bool operator==(const Frequencies&) const = default;
};

struct ResonanceMode {
    enum class Kind { NonResonant, SingleResonantAngle };

    Kind kind = Kind::NonResonant;
    int m = 0;  // resonant index, 1-based

    static ResonanceMode non_resonant() { return {}; }
    static ResonanceMode single(int m) { return {Kind::SingleResonantAngle, m}; }

    // Whether the monomial p^l q^lt stays in the normal form.
    bool keeps(const Exponents& e, int n) const;
    bool operator==(const ResonanceMode&) const = default;
};

// Initial majorants F_s^(0) for the classes above R_I: zero, or the Cauchy
// estimate M * #monomials(s+2) / R^(s+2) of an analytic function bounded by
// M on the polydisk of radius R. Classes expanded beyond R_I carry their
// computed norms in `lognorm` (indexed by s), and the smaller bound is used.
struct InitialTail {
    bool cauchy = false;
    double logM = kZeroLog;
    double log_inv_radius = 0.0;  // upper bound of log(1/R)
    std::vector<double> lognorm;

    double logF0(int n, int s) const;
    double logF0_cauchy(int n, int s) const;
    bool operator==(const InitialTail&) const = default;
};

// S^(r): explicit polynomials up to class R_I, the majorant table above it,
// and what is needed to replay the estimates with another R_II.
struct HamiltonianState {
    int n = 0;
    Frequencies omega;
    ResonanceMode mode;
    std::vector<HomoPoly> Z;  // Z_0 .. Z_min(r, R_I)
    std::vector<HomoPoly> f;  // indexed by class s in [0, R_I]; normalized classes are emptied
    MajorantTable maj;
    InitialTail initial;
    std::vector<double> logf0;  // log norms of f_s^(0), s <= R_I
    double log_a0 = 0.0;
    std::vector<StepRecord> history;

    int steps_done() const noexcept { return maj.r; }
    int R_I() const noexcept { return maj.R_I; }
    int R_II() const noexcept { return maj.R_II; }
    bool operator==(const HamiltonianState&) const = default;
};

// S^(0) from the quadratic frequencies and the classes f_1..f_{R_I} (f0[s] has
// degree s+2; index 0 is ignored and missing classes are zero).
HamiltonianState make_state(const Frequencies& omega, const ResonanceMode& mode, int R_I, int R_II,
                            const std::vector<HomoPoly>& f0, double logE, double log_a0,
                            const InitialTail& initial = {});

// Lower/upper enclosure of min |omega.k| over 0 < |k|_1 <= r+2 in the removed
// set.
Interval smallest_divisor(const Frequencies& omega, int r, const ResonanceMode& mode);

struct Homological {
    HomoPoly chi;
    HomoPoly Z;
};
Homological solve_homological(const HomoPoly& f_r, const Frequencies& omega, const ResonanceMode& mode);

// One explicit Lie-series step r = steps_done + 1 <= R_I.
void normalization_step_in_place(HamiltonianState& h, HomoPoly* chi_out = nullptr);
HamiltonianState normalization_step(const HamiltonianState& h, HomoPoly* chi_out = nullptr);

// One step of whichever kind applies (explicit up to R_I, estimate-only above).
void advance(HamiltonianState& h);
HamiltonianState normalize(const HamiltonianState& h, int target_r);

// Applies the majorant part of a recorded step to a table.
void apply_step_record(MajorantTable& t, const StepRecord& rec);

// Majorant table of h recomputed from the step history with another R_II
// (>= R_I), after the first `upto` steps.
MajorantTable replay_majorants(const HamiltonianState& h, int R_II, int upto);

// The same history pushed through the majorant recursion alone (every class
// treated as a majorant from step 0), for comparison with the explicit norms.
MajorantTable shadow_majorants(const HamiltonianState& h, int upto);

}  // namespace bnf
