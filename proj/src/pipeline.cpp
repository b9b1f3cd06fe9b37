#include "bnf/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bnf/checkpoint.hpp"

namespace bnf {

// ---------------------------------------------------------------- expressions

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    Interval parse() {
        const Interval v = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + s_.substr(i_) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) { throw ParseError("bad expression '" + s_ + "': " + what, 0); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    Interval sum() {
        Interval v = product();
        while (true) {
            if (eat('+'))
                v = v + product();
            else if (eat('-'))
                v = v - product();
            else
                return v;
        }
    }

    Interval product() {
        Interval v = unary();
        while (true) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                const Interval d = unary();
                if (d.contains(0.0)) fail("division by an interval containing zero");
                v = v / d;
            } else {
                return v;
            }
        }
    }

    Interval unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return atom();
    }

    Interval atom() {
        skip();
        if (eat('(')) {
            const Interval v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (s_.compare(i_, 4, "sqrt") == 0) {
            i_ += 4;
            if (!eat('(')) fail("sqrt needs '('");
            const Interval v = sum();
            if (!eat(')')) fail("missing ')'");
            if (v.lo < 0.0) fail("square root of a negative number");
            return sqrt(v);
        }
        return literal();
    }

    Interval literal() {
        const std::size_t start = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            ++i_;
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        }
        const std::string text = s_.substr(start, i_ - start);
        if (text.empty()) fail("expected a number");
        char* end = nullptr;
        const double x = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || !std::isfinite(x)) fail("bad number '" + text + "'");
        return decimal_enclosure(text, x);
    }

    // Integers below 2^53 are exact; any other decimal is within one ulp of
    // its nearest binary64.
    static Interval decimal_enclosure(const std::string& text, double x) {
        const bool integer = text.find_first_of(".eE") == std::string::npos;
        if (integer && x < 9007199254740992.0) return Interval::point(x);
        return {nudge_down(x), nudge_up(x)};
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

Interval parse_interval_expr(const std::string& text) { return ExprParser(text).parse(); }

// ---------------------------------------------------------------- config

namespace {

int to_int(const std::string& v, int line) {
    std::size_t pos = 0;
    int x = 0;
    try {
        x = std::stoi(v, &pos);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + v + "'", line);
    }
    if (pos != v.size()) throw ParseError("expected an integer, got '" + v + "'", line);
    return x;
}

double to_double(const std::string& v, int line) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + v + "'", line);
    }
    if (pos != v.size() || !std::isfinite(x)) throw ParseError("expected a number, got '" + v + "'", line);
    return x;
}

Interval to_interval(const std::string& v, int line) {
    try {
        return parse_interval_expr(v);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
}

const MassPreset* find_preset(const std::string& name) {
    for (const MassPreset& p : mass_presets())
        if (name == p.name) return &p;
    return nullptr;
}

}  // namespace

RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    std::map<std::string, int> seen;
    bool have_rho = false, have_mu = false, have_omega2 = false;
    int mode_index = 0;
    std::string mode = "nonresonant";
    std::string text;
    int line = 0;
    while (std::getline(is, text)) {
        ++line;
        const auto hash = text.find('#');
        if (hash != std::string::npos) text.resize(hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string val = trim(text.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line);
        if (seen.count(key)) throw ParseError("duplicate key '" + key + "'", line);
        seen[key] = line;

        if (key == "model") {
            if (val == "henon-heiles")
                cfg.model = ModelKind::HenonHeiles;
            else if (val == "cprtbp")
                cfg.model = ModelKind::Cprtbp;
            else
                throw ParseError("unknown model '" + val + "'", line);
        } else if (key == "omega1") {
            cfg.omega1 = to_interval(val, line);
        } else if (key == "omega2") {
            cfg.omega2 = to_interval(val, line);
            have_omega2 = true;
        } else if (key == "mu") {
            if (const MassPreset* p = find_preset(val)) {
                cfg.mu = {nudge_down(p->mu), nudge_up(p->mu)};
                if (!seen.count("period_years")) cfg.period_years = p->period_years;
            } else {
                cfg.mu = to_interval(val, line);
            }
            have_mu = true;
        } else if (key == "point") {
            if (val == "L4")
                cfg.point = LagrangePoint::L4;
            else if (val == "L5")
                cfg.point = LagrangePoint::L5;
            else
                throw ParseError("point must be L4 or L5", line);
        } else if (key == "degree") {
            cfg.degree = to_int(val, line);
        } else if (key == "period_years") {
            cfg.period_years = to_double(val, line);
        } else if (key == "mode") {
            if (val != "nonresonant" && val != "resonant") throw ParseError("mode must be nonresonant or resonant", line);
            mode = val;
        } else if (key == "resonant_index") {
            mode_index = to_int(val, line);
        } else if (key == "R_I") {
            cfg.R_I = to_int(val, line);
        } else if (key == "R_II") {
            cfg.R_II = to_int(val, line);
        } else if (key == "rho" || key == "rho2") {
            if (have_rho) throw ParseError("only one of rho, rho2, rho_range may be given", line);
            for (const std::string& w : split_list(val)) {
                const double x = to_double(w, line);
                cfg.rhos.push_back(key == "rho" ? x : std::sqrt(x));
            }
            have_rho = true;
        } else if (key == "rho_range") {
            if (have_rho) throw ParseError("only one of rho, rho2, rho_range may be given", line);
            const auto w = split_list(val);
            if (w.size() != 3) throw ParseError("rho_range needs 'first last count'", line);
            const double a = to_double(w[0], line), b = to_double(w[1], line);
            const int count = to_int(w[2], line);
            if (!(a > 0.0) || !(b >= a) || count < 1) throw ParseError("bad rho_range", line);
            for (int k = 0; k < count; ++k)
                cfg.rhos.push_back(count == 1 ? a : a * std::pow(b / a, static_cast<double>(k) / (count - 1)));
            have_rho = true;
        } else if (key == "beta") {
            cfg.beta = to_double(val, line);
        } else if (key == "log_E") {
            cfg.logE = to_double(val, line);
        } else if (key == "tail_share") {
            cfg.tail_share = to_double(val, line);
        } else if (key == "output") {
            cfg.output_path = val;
        } else if (key == "checkpoint") {
            cfg.checkpoint_path = val;
        } else if (key == "report_digits") {
            cfg.report_digits = to_int(val, line);
        } else {
            throw ParseError("unknown key '" + key + "'", line);
        }
    }

    auto at = [&](const char* k) { return seen.count(k) ? seen[k] : 0; };
    if (cfg.R_I < 1) throw ParseError("R_I must be at least 1", at("R_I"));
    if (cfg.R_II < cfg.R_I) throw ParseError("R_II must be at least R_I", at("R_II"));
    for (std::size_t k = 0; k < cfg.rhos.size(); ++k) {
        if (!(cfg.rhos[k] > 0.0)) throw ParseError("rho values must be positive", at("rho"));
        if (k > 0 && !(cfg.rhos[k] > cfg.rhos[k - 1])) throw ParseError("rho values must be increasing", at("rho"));
    }
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw ParseError("beta must lie in (0, 1)", at("beta"));
    if (cfg.report_digits < 1 || cfg.report_digits > 17) throw ParseError("report_digits must be in 1..17", at("report_digits"));
    if (cfg.model == ModelKind::HenonHeiles && !have_omega2) throw ParseError("omega2 is required", 0);
    if (cfg.model == ModelKind::Cprtbp && !have_mu) throw ParseError("mu is required", 0);
    if (mode == "resonant") {
        if (mode_index == 0) mode_index = 2;
        if (mode_index < 1 || mode_index > 2) throw ParseError("resonant_index must be 1 or 2", at("resonant_index"));
        cfg.mode = ResonanceMode::single(mode_index);
    }
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config " + path);
    return parse_config(is);
}

// ---------------------------------------------------------------- run

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const ResonanceError*>(&e)) return kExitResonance;
    if (dynamic_cast<const TailDivergentError*>(&e) || dynamic_cast<const NoStableRegimeError*>(&e))
        return kExitTailDivergent;
    if (dynamic_cast<const SafeRangeError*>(&e)) return kExitSafeRange;
    return kExitOther;
}

HamiltonianState build_state(const RunConfig& cfg) {
    if (cfg.model == ModelKind::HenonHeiles)
        return henon_heiles(cfg.omega1, cfg.omega2, cfg.R_I, cfg.R_II, cfg.mode, cfg.logE);
    return cprtbp_hamiltonian(cfg.mu, cfg.point, cfg.R_I, cfg.R_II, cfg.mode, cfg.degree);
}

namespace {

std::string sci(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    return buf;
}

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + path);
    os << text;
    if (!os.flush()) throw Error("cannot write " + path);
}

bool is_resonant(const RunConfig& cfg) { return cfg.mode.kind == ResonanceMode::Kind::SingleResonantAngle; }

}  // namespace

std::string table_report(const RunConfig& cfg, const RunOutcome& out) {
    std::ostringstream os;
    const int d = cfg.report_digits;
    if (!is_resonant(cfg)) {
        os << "rho0\trho\tr_opt\ta_r\tlog10_R\tlog10_Idot\tlog10_T\n";
        for (const StabilityResult& s : out.rows) {
            if (!s.error.empty()) continue;
            os << sci(s.rho0, d) << '\t' << sci(s.rho, d) << '\t' << s.r_opt << '\t' << sci(s.a_r, d) << '\t'
               << fixed(s.log_remainder.log10(), 2) << '\t' << fixed(s.log_action_rate.log10(), 2) << '\t'
               << fixed(s.log_T.log10(), 2) << '\n';
        }
    } else {
        os << "rho0sq\trhostar2sq\trhosq\tT\n";
        for (const ResonantStability& s : out.resonant_rows) {
            if (!s.error.empty()) continue;
            os << sci(s.rho0sq, d) << '\t' << sci(s.rhostarsq, d) << '\t' << sci(s.rhosq, d) << '\t'
               << sci(std::pow(10.0, s.log_T.log10()), d) << '\n';
        }
    }
    return os.str();
}

std::string full_report(const RunConfig& cfg, const RunOutcome& out) {
    std::ostringstream os;
    if (!is_resonant(cfg)) {
        os << "rho\trho0\tr_opt\tlog_a_r\tlog_R\tlog_Idot\tlog_T\tlog_T_without_tail\tR_II\tstatus\n";
        for (const StabilityResult& s : out.rows) {
            os << to_hex(s.rho) << '\t' << to_hex(s.rho0) << '\t' << s.r_opt << '\t'
               << to_hex(s.a_r > 0.0 ? log_plus(s.a_r) : 0.0) << '\t' << to_hex(s.log_remainder.logval) << '\t'
               << to_hex(s.log_action_rate.logval) << '\t' << to_hex(s.log_T.logval) << '\t'
               << to_hex(s.log_T_without_tail) << '\t' << s.R_II_used << '\t' << (s.error.empty() ? "ok" : s.error)
               << '\n';
        }
    } else {
        os << "rhosq\trho0sq\trhostar2sq\tlog_delta_I\tlog_T\tr_opt\tpasses\tR_II\tstatus\n";
        for (const ResonantStability& s : out.resonant_rows) {
            os << to_hex(s.rhosq) << '\t' << to_hex(s.rho0sq) << '\t' << to_hex(s.rhostarsq) << '\t'
               << to_hex(s.delta_I.logval) << '\t' << to_hex(s.log_T.logval) << '\t' << s.r_opt << '\t' << s.passes
               << '\t' << s.R_II_used << '\t' << (s.error.empty() ? "ok" : s.error) << '\n';
        }
    }
    return os.str();
}

namespace {

std::string gnuplot_data(const RunConfig& cfg, const RunOutcome& out) {
    std::ostringstream os;
    char buf[128];
    if (!is_resonant(cfg)) {
        os << "# rho0 rho log10_T\n";
        for (const StabilityResult& s : out.rows)
            if (s.error.empty()) {
                std::snprintf(buf, sizeof buf, "%.10e %.10e %.10f\n", s.rho0, s.rho, s.log_T.log10());
                os << buf;
            }
    } else {
        os << "# rhostar2 rho log10_T\n";
        for (const ResonantStability& s : out.resonant_rows)
            if (s.error.empty()) {
                std::snprintf(buf, sizeof buf, "%.10e %.10e %.10f\n", std::sqrt(s.rhostarsq), std::sqrt(s.rhosq),
                              s.log_T.log10());
                os << buf;
            }
    }
    return os.str();
}

}  // namespace

RunOutcome run(const RunConfig& cfg, const std::optional<std::string>& resume_path) {
    RunOutcome out;
    HamiltonianState h = resume_path ? load_state(*resume_path) : build_state(cfg);
    if (resume_path && (h.R_I() != cfg.R_I || h.mode != cfg.mode))
        throw Error("checkpoint does not match the configuration (R_I or mode differ)");

    ScanOptions opt;
    opt.tail_share = cfg.tail_share;
    if (!cfg.checkpoint_path.empty()) {
        const std::string path = cfg.checkpoint_path;
        opt.on_explicit_step = [path](const HamiltonianState& s) { save_state(path, s); };
    }

    auto flush = [&] {
        if (cfg.output_path.empty()) return;
        write_file(cfg.output_path, table_report(cfg, out));
        write_file(cfg.output_path + ".full.tsv", full_report(cfg, out));
        write_file(cfg.output_path + ".dat", gnuplot_data(cfg, out));
    };

    if (cfg.rhos.empty()) {
        flush();
        return out;
    }
    if (!is_resonant(cfg)) {
        out.rows = optimal_scan_grid(h, cfg.rhos, opt);
        for (const StabilityResult& s : out.rows)
            if (!s.error.empty()) {
                out.messages.push_back("rho = " + sci(s.rho, 4) + ": " + s.error);
                out.exit_code = kExitTailDivergent;
            }
    } else {
        out.resonant_rows = resonant_scan_grid(h, cfg.rhos, cfg.beta, opt);
        for (const ResonantStability& s : out.resonant_rows)
            if (!s.error.empty()) {
                out.messages.push_back("rho^2 = " + sci(s.rhosq, 4) + ": " + s.error);
                out.exit_code = kExitTailDivergent;
            }
    }
    if (cfg.model == ModelKind::Cprtbp && cfg.period_years > 0.0)
        out.messages.push_back("expected lifetime in model units: " +
                               sci(lifetime_in_units(h.omega.omega[0], cfg.period_years), 3));
    flush();
    return out;
}

// ---------------------------------------------------------------- worked example

bool verify_appendix_b(std::ostream& os) {
    RunConfig cfg = parse_config_text(
        "model = henon-heiles\nomega1 = 1\nomega2 = -sqrt(2)/2\nR_I = 2\nR_II = 5\nrho = 1e-4\n");
    HamiltonianState h = build_state(cfg);
    const StabilityResult s = optimal_scan(h, 1e-4);
    HamiltonianState g = normalize(h, 4);

    bool ok = true;
    char buf[160];
    auto check = [&](const std::string& what, double got, double want, double tol) {
        const bool good = std::fabs(got - want) <= tol;
        std::snprintf(buf, sizeof buf, "%-28s %14.9f  published %14.9f  %s\n", what.c_str(), got, want, good ? "ok" : "MISMATCH");
        os << buf;
        ok = ok && good;
    };
    const double log_a[] = {0.4424676, 2.599403, 2.664144, 3.937671, 4.002009};
    const double trace[] = {-34.71383, -39.36487, -42.15919, -41.66110};
    check("log a_0", g.log_a0, log_a[0], 5e-7);
    for (int r = 1; r <= 4; ++r) {
        const MajorantTable t = replay_majorants(g, 5, r);
        check("log a_" + std::to_string(r), t.log_a, log_a[r], 5e-6);
        check("log remainder, r = " + std::to_string(r), remainder_bound(t, 1e-4).logval, trace[r - 1], 5e-5);
    }
    check("r_opt", s.r_opt, 3, 0.0);
    check("rho_0 / 1e-5", s.rho0 * 1e5, 8.165, 5e-4);
    // The published log T omits the geometric tail from the action rate; the
    // rigorous value is printed next to it.
    check("log T (tail omitted)", s.log_T_without_tail, 24.92920, 5e-5);
    std::snprintf(buf, sizeof buf, "%-28s %14.9f  (rigorous lower bound)\n", "log T", s.log_T.logval);
    os << buf;
    return ok;
}

}  // namespace bnf
