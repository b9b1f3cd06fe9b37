#pragma once

#include <functional>
#include <vector>

#include "bnf/majorant.hpp"
#include "bnf/normalform.hpp"

namespace bnf {

struct ScanOptions {
    // Raise R_II when the geometric tail carries more than this share of the
    // action-rate bound at r_opt; 0 disables the increase.
    double tail_share = 0.0;
    int R_II_max = 200000;
    int max_rounds = 6;
    // Called after every explicit step the scan performs on the state.
    std::function<void(const HamiltonianState&)> on_explicit_step;
};

// Optimal-step scans for several radii sharing one normalization. The
// explicit state h is advanced in place (at most to R_I); estimate-only steps
// run on a separate majorant table so that R_II can be replayed.
std::vector<StabilityResult> optimal_scan_grid(HamiltonianState& h, const std::vector<double>& rhos,
                                               const ScanOptions& opt = {});
StabilityResult optimal_scan(const HamiltonianState& h0, double rho, const ScanOptions& opt = {});

// Resonant pipeline at radius rho: r_opt from the remainder trace, rho0 from
// beta, T from the non-resonant action rates, then the energy bound on the
// resonant action and (rho*_m)^2.
std::vector<ResonantStability> resonant_scan_grid(HamiltonianState& h, const std::vector<double>& rhos,
                                                  double beta = 0.9, const ScanOptions& opt = {});

}  // namespace bnf
