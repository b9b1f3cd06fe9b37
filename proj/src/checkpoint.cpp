#include "bnf/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bnf {

namespace {

void put_values(std::ostream& os, const char* tag, const std::vector<double>& v) {
    os << tag << ' ' << v.size();
    for (double x : v) os << ' ' << to_hex(x);
    os << '\n';
}

void put_interval(std::ostream& os, const Interval& x) { os << to_hex(x.lo) << ' ' << to_hex(x.hi); }

void put_poly(std::ostream& os, const HomoPoly& p) {
    if (p.n() == 0) {
        os << "none\n";
        return;
    }
    write_poly(os, p);
}

class Reader {
public:
    explicit Reader(std::istream& is) : is_(is) {}

    // Next line split into words; the first word must be `tag`.
    std::istringstream line(const char* tag) {
        std::string text;
        if (!std::getline(is_, text)) throw ParseError(std::string("unexpected end of file, expected '") + tag + "'", line_ + 1);
        ++line_;
        std::istringstream ls(text);
        std::string word;
        if (!(ls >> word) || word != tag) throw ParseError(std::string("expected '") + tag + "'", line_);
        return ls;
    }

    int integer(std::istringstream& ls) {
        long long v;
        if (!(ls >> v) || v < -1000000000LL || v > 1000000000LL) throw ParseError("bad integer", line_);
        return static_cast<int>(v);
    }

    double number(std::istringstream& ls) {
        std::string w;
        if (!(ls >> w)) throw ParseError("missing number", line_);
        try {
            return parse_hex(w);
        } catch (const ParseError&) {
            throw ParseError("bad number '" + w + "'", line_);
        }
    }

    Interval interval(std::istringstream& ls) {
        const double lo = number(ls), hi = number(ls);
        if (lo > hi) throw ParseError("reversed interval", line_);
        return {lo, hi};
    }

    void end_of_line(std::istringstream& ls) {
        std::string extra;
        if (ls >> extra) throw ParseError("trailing data", line_);
    }

    std::vector<double> values(const char* tag) {
        std::istringstream ls = line(tag);
        const int count = integer(ls);
        if (count < 0) throw ParseError("negative count", line_);
        std::vector<double> v(count);
        for (double& x : v) x = number(ls);
        end_of_line(ls);
        return v;
    }

    HomoPoly poly() {
        const std::streampos pos = is_.tellg();
        std::string text;
        if (!std::getline(is_, text)) throw ParseError("unexpected end of file, expected a polynomial", line_ + 1);
        if (text == "none") {
            ++line_;
            return HomoPoly();
        }
        is_.clear();
        is_.seekg(pos);
        return read_poly(is_, line_);
    }

    int line_no() const { return line_; }

private:
    std::istream& is_;
    int line_ = 0;
};

}  // namespace

void write_state(std::ostream& os, const HamiltonianState& h) {
    os << "bnf-state 1\n";
    os << "n " << h.n << '\n';
    os << "omega " << h.omega.omega.size();
    for (const Interval& w : h.omega.omega) {
        os << ' ';
        put_interval(os, w);
    }
    os << '\n';
    if (h.omega.diophantine)
        os << "diophantine 1 " << to_hex(h.omega.diophantine->first) << ' ' << to_hex(h.omega.diophantine->second) << '\n';
    else
        os << "diophantine 0\n";
    os << "mode " << (h.mode.kind == ResonanceMode::Kind::NonResonant ? 0 : 1) << ' ' << h.mode.m << '\n';

    const MajorantTable& t = h.maj;
    os << "table " << t.R_I << ' ' << t.R_II << ' ' << t.r << ' ' << to_hex(t.logE) << ' ' << to_hex(t.log_a) << '\n';
    put_values(os, "logZ", t.logZ);
    put_values(os, "logF", t.logF);

    os << "initial " << (h.initial.cauchy ? 1 : 0) << ' ' << to_hex(h.initial.logM) << ' '
       << to_hex(h.initial.log_inv_radius) << '\n';
    put_values(os, "lognorm", h.initial.lognorm);
    put_values(os, "logf0", h.logf0);
    os << "log_a0 " << to_hex(h.log_a0) << '\n';

    os << "history " << h.history.size() << '\n';
    for (const StepRecord& s : h.history) {
        os << "step " << s.r << ' ' << (s.explicit_step ? 1 : 0) << ' ' << to_hex(s.logD) << ' ' << to_hex(s.log_alpha)
           << ' ' << to_hex(s.logZ_r) << '\n';
        put_values(os, "after", s.logf_after);
    }
    os << "Z " << h.Z.size() << '\n';
    for (const HomoPoly& p : h.Z) put_poly(os, p);
    os << "f " << h.f.size() << '\n';
    for (const HomoPoly& p : h.f) put_poly(os, p);
    os << "end-state\n";
}

HamiltonianState read_state(std::istream& is) {
    Reader rd(is);
    auto ls = rd.line("bnf-state");
    if (rd.integer(ls) != 1) throw ParseError("unsupported checkpoint version", rd.line_no());
    HamiltonianState h;
    ls = rd.line("n");
    h.n = rd.integer(ls);
    if (h.n < 1 || h.n > kMaxDof) throw ParseError("bad number of degrees of freedom", rd.line_no());

    ls = rd.line("omega");
    const int nw = rd.integer(ls);
    if (nw != h.n) throw ParseError("frequency count does not match n", rd.line_no());
    for (int j = 0; j < nw; ++j) h.omega.omega.push_back(rd.interval(ls));
    rd.end_of_line(ls);

    ls = rd.line("diophantine");
    if (rd.integer(ls) == 1) {
        const double g = rd.number(ls), tau = rd.number(ls);
        h.omega.diophantine = std::make_pair(g, tau);
    }
    rd.end_of_line(ls);

    ls = rd.line("mode");
    const int kind = rd.integer(ls);
    h.mode.kind = kind == 0 ? ResonanceMode::Kind::NonResonant : ResonanceMode::Kind::SingleResonantAngle;
    h.mode.m = rd.integer(ls);
    rd.end_of_line(ls);

    ls = rd.line("table");
    MajorantTable& t = h.maj;
    t.R_I = rd.integer(ls);
    t.R_II = rd.integer(ls);
    t.r = rd.integer(ls);
    t.logE = rd.number(ls);
    t.log_a = rd.number(ls);
    rd.end_of_line(ls);
    t.logZ = rd.values("logZ");
    t.logF = rd.values("logF");
    if (t.R_I < 1 || t.R_II < t.R_I || t.r < 0 || static_cast<int>(t.logZ.size()) != t.R_II + 1 ||
        static_cast<int>(t.logF.size()) != t.R_II + 1)
        throw ParseError("inconsistent majorant table", rd.line_no());

    ls = rd.line("initial");
    h.initial.cauchy = rd.integer(ls) != 0;
    h.initial.logM = rd.number(ls);
    h.initial.log_inv_radius = rd.number(ls);
    rd.end_of_line(ls);
    h.initial.lognorm = rd.values("lognorm");
    h.logf0 = rd.values("logf0");
    ls = rd.line("log_a0");
    h.log_a0 = rd.number(ls);
    rd.end_of_line(ls);

    ls = rd.line("history");
    const int nh = rd.integer(ls);
    if (nh < 0 || nh != t.r) throw ParseError("history length does not match the step count", rd.line_no());
    for (int k = 0; k < nh; ++k) {
        StepRecord s;
        ls = rd.line("step");
        s.r = rd.integer(ls);
        s.explicit_step = rd.integer(ls) != 0;
        s.logD = rd.number(ls);
        s.log_alpha = rd.number(ls);
        s.logZ_r = rd.number(ls);
        rd.end_of_line(ls);
        s.logf_after = rd.values("after");
        h.history.push_back(std::move(s));
    }

    ls = rd.line("Z");
    const int nz = rd.integer(ls);
    if (nz < 1) throw ParseError("missing Z_0", rd.line_no());
    for (int k = 0; k < nz; ++k) h.Z.push_back(rd.poly());
    ls = rd.line("f");
    const int nf = rd.integer(ls);
    if (nf != t.R_I + 1) throw ParseError("class count does not match R_I", rd.line_no());
    for (int k = 0; k < nf; ++k) h.f.push_back(rd.poly());
    rd.line("end-state");
    return h;
}

std::string state_to_text(const HamiltonianState& h) {
    std::ostringstream os;
    write_state(os, h);
    return os.str();
}

HamiltonianState state_from_text(const std::string& s) {
    std::istringstream is(s);
    return read_state(is);
}

void save_state(const std::string& path, const HamiltonianState& h) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot write checkpoint " + tmp);
        write_state(os, h);
        if (!os.flush()) throw Error("cannot write checkpoint " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot move checkpoint into " + path);
}

HamiltonianState load_state(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open checkpoint " + path);
    return read_state(is);
}

}  // namespace bnf
