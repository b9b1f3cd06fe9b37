#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnf/models.hpp"
#include "bnf/scan.hpp"

namespace bnf {

enum class ModelKind { HenonHeiles, Cprtbp };

struct RunConfig {
    ModelKind model = ModelKind::HenonHeiles;
    // Henon-Heiles
    Interval omega1 = Interval::point(1.0);
    Interval omega2;
    // CPRTBP
    Interval mu;
    LagrangePoint point = LagrangePoint::L4;
    int degree = 0;             // 0: R_I + 2
    double period_years = 0.0;  // for the lifetime column; 0 when unknown

    ResonanceMode mode;
    int R_I = 0;
    int R_II = 0;
    std::vector<double> rhos;
    double beta = 0.9;
    double logE = 0.0;
    double tail_share = 0.0;
    std::string output_path;
    std::string checkpoint_path;
    int report_digits = 3;
};

// Flat "key = value" text, one pair per line, '#' starts a comment. Numbers
// may be interval expressions such as -sqrt(2)/2 or -(sqrt(5)-1)/2.
RunConfig parse_config(std::istream& is);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Rigorous enclosure of a constant expression: decimal literals, + - * /,
// parentheses and sqrt().
Interval parse_interval_expr(const std::string& text);

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitResonance = 3;
inline constexpr int kExitTailDivergent = 4;
inline constexpr int kExitSafeRange = 5;

int exit_code_for(const std::exception& e);

HamiltonianState build_state(const RunConfig& cfg);

struct RunOutcome {
    int exit_code = kExitOk;
    std::vector<StabilityResult> rows;
    std::vector<ResonantStability> resonant_rows;
    std::vector<std::string> messages;
};

// Runs the configured scan. The state is built from the model, or read from
// `resume_path`; with a checkpoint path every explicit step is saved there.
// Reports are written when output_path is set: <out> (table style),
// <out>.full.tsv (hex-exact) and <out>.dat (gnuplot columns).
RunOutcome run(const RunConfig& cfg, const std::optional<std::string>& resume_path = std::nullopt);

std::string table_report(const RunConfig& cfg, const RunOutcome& out);
std::string full_report(const RunConfig& cfg, const RunOutcome& out);

// Recomputes the worked Henon-Heiles example (rho = 1e-4, R_I = 2, R_II = 5)
// and prints a comparison with the published values; returns whether every
// checked quantity agrees.
bool verify_appendix_b(std::ostream& os);

}  // namespace bnf
