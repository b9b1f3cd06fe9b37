#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bnf/normalform.hpp"

namespace bnf {

// Complex variables: x_j = (i p_j + q_j)/sqrt2, y_j = (p_j + i q_j)/sqrt2,
// so that omega (x^2 + y^2)/2 = i omega p q.
HomoPoly x_var(int n, int j);
HomoPoly y_var(int n, int j);

// -(sqrt2)/2 and -(sqrt5-1)/2 as enclosures.
Interval hh_omega2_sqrt2();
Interval hh_omega2_golden();

// Henon-Heiles cubic x1^2 x2 - x2^3/3 in the complex variables.
HomoPoly henon_heiles_cubic();
// S^(0) with log E = logE and log a_0 = log+(||f_1||)/3.
HamiltonianState henon_heiles(const Interval& omega1, const Interval& omega2, int R_I, int R_II,
                              const ResonanceMode& mode = {}, double logE = 0.0);

// ---------------------------------------------------------------- CPRTBP

enum class LagrangePoint { L4, L5 };

// (9 - sqrt69)/18 from below.
double routh_mass_lower();
// nu_1 > 0 > nu_2 of the linearization at L4/L5.
std::array<Interval, 2> cprtbp_frequencies(const Interval& mu);

// 4x4 interval matrices in the ordering (P_X, P_Y, X, Y).
using Mat4 = std::array<std::array<Interval, 4>, 4>;

// Symmetric matrix S of the quadratic part H_2 = z^T S z / 2.
Mat4 cprtbp_quadratic(const Interval& mu, LagrangePoint point);

struct Diagonalization {
    Mat4 C;                  // old = C new, columns ordered (x1, x2, y1, y2)
    std::array<Interval, 2> nu;
};
// Symplectic C with H_2(C w) = sum nu_j (x_j^2 + y_j^2)/2.
Diagonalization symplectic_diagonalize(const Mat4& S);

// Entries of C^T J C - J and of C^T S C - diag(nu, nu), for verification.
Mat4 symplectic_defect(const Mat4& C);
Mat4 diagonal_defect(const Mat4& S, const Diagonalization& d);

struct CprtbpModel {
    Interval mu;
    LagrangePoint point = LagrangePoint::L4;
    Diagonalization diag;
    std::vector<HomoPoly> f0;  // classes 1..R_I in complex variables
    HomoPoly quadratic;        // degree-2 part, Z_0 up to enclosure width
    std::vector<double> lognorm;  // log norms of all expanded classes
    double logM = 0.0;         // sup |H| on the Cauchy polydisk, upper
    double log_inv_radius = 0.0;
    double logE = 0.0;
    double log_a0 = 0.0;
};

// Local expansion about L4/L5 to `degree` (0 means R_I+2) together with the
// Cauchy data. Classes 1..R_I become explicit; the expanded classes above R_I
// only contribute their norms to the initial majorants.
CprtbpModel cprtbp_model(const Interval& mu, LagrangePoint point, int R_I, int degree = 0);
HamiltonianState cprtbp_hamiltonian(const Interval& mu, LagrangePoint point, int R_I, int R_II,
                                    const ResonanceMode& mode, int degree = 0);

struct MassPreset {
    const char* name;
    double mu;
    double period_years;  // orbital period of the smaller primary
};
// Jupiter, Uranus, Mars (Sun-planet) and Janus (Saturn-moon).
const std::vector<MassPreset>& mass_presets();
// Expected lifetime (6 Gyr) nu_1 / P as the tables count it, P in years.
inline constexpr double kLifetimeYears = 6.0e9;
double lifetime_in_units(const Interval& nu1, double period_years);

}  // namespace bnf
