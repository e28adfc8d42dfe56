#pragma once

// Text formats: instance files, model export, cut dumps, quantile caches and
// benchmark tables. Every writer goes through a temporary file and a rename,
// so a failed write never leaves a partial file behind.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/instance.hpp"
#include "drccp/mixing.hpp"
#include "drccp/model.hpp"
#include "drccp/quantile.hpp"
#include "drccp/solver.hpp"

namespace drccp::io {

inline constexpr int kInstanceVersion = 1;
inline constexpr int kExportVersion = 1;
inline constexpr int kCutVersion = 1;
inline constexpr int kQuantileVersion = 1;

/// Shortest decimal form that reads back to the same double (17 digits).
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& tok) {
    if (tok == "inf") return kInf;
    if (tok == "-inf") return -kInf;
    if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad number '" + tok + "'");
    }
    if (used != tok.size()) throw Error(ErrorCode::ParseError, "bad number '" + tok + "'");
    return v;
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot rename onto " + path.string());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

class Tokens {
public:
    explicit Tokens(const std::string& text) {
        std::istringstream in(text);
        std::string t;
        while (in >> t) toks_.push_back(t);
    }
    bool done() const { return pos_ >= toks_.size(); }
    const std::string& next() {
        if (done()) throw Error(ErrorCode::ParseError, "unexpected end of input");
        return toks_[pos_++];
    }
    void expect(const std::string& word) {
        const auto& t = next();
        if (t != word) throw Error(ErrorCode::ParseError, "expected '" + word + "', got '" + t + "'");
    }
    double number() { return parse_double(next()); }
    std::size_t count() {
        const auto& t = next();
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size() || t.empty() || t[0] == '-') throw Error(ErrorCode::ParseError, "bad count '" + t + "'");
        return static_cast<std::size_t>(v);
    }
    std::vector<double> numbers(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = number();
        return v;
    }

private:
    std::vector<std::string> toks_;
    std::size_t pos_ = 0;
};

inline void put_vec(std::ostringstream& os, const char* tag, const std::vector<double>& v) {
    os << tag;
    for (double x : v) os << ' ' << fmt(x);
    os << '\n';
}

/// Splits "header\nhash H\nbody" and checks H against the body.
inline std::string checked_body(const std::string& text, const std::string& header) {
    const auto nl1 = text.find('\n');
    if (nl1 == std::string::npos || text.substr(0, nl1) != header)
        throw Error(ErrorCode::ParseError, "missing header '" + header + "'");
    const auto nl2 = text.find('\n', nl1 + 1);
    if (nl2 == std::string::npos) throw Error(ErrorCode::ParseError, "missing hash line");
    const std::string hash_line = text.substr(nl1 + 1, nl2 - nl1 - 1);
    if (hash_line.rfind("hash ", 0) != 0) throw Error(ErrorCode::ParseError, "missing hash line");
    std::string body = text.substr(nl2 + 1);
    if (hash_line.substr(5) != hex64(fnv1a(body))) throw Error(ErrorCode::ParseError, "content hash mismatch");
    return body;
}

}  // namespace detail

// ---------------------------------------------------------------- instances

inline std::string instance_body(const Instance& inst) {
    const auto& S = inst.safety;
    std::ostringstream os;
    os << "kind " << to_string(inst.kind) << " seed " << inst.seed << '\n';
    os << "dims " << inst.N << ' ' << S.P << ' ' << S.K << ' ' << S.L << '\n';
    os << "ambiguity " << fmt(inst.epsilon) << ' ' << fmt(inst.theta) << ' ' << to_string(inst.norm) << '\n';
    os << "closedness " << (S.closedness == Closedness::Open ? "open" : "closed") << '\n';
    os << "meta " << inst.resources << ' ' << inst.customer_groups << ' ' << fmt(inst.target_return) << '\n';
    detail::put_vec(os, "W", S.W);
    detail::put_vec(os, "b", S.b);
    for (const auto& row : S.a) detail::put_vec(os, "a", row);
    detail::put_vec(os, "d", S.d);
    detail::put_vec(os, "lower", inst.lower);
    detail::put_vec(os, "upper", inst.upper);
    detail::put_vec(os, "cost", inst.cost);
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < S.P; ++p) {
            os << "xi " << i << ' ' << p;
            for (double v : inst.xi(i, p)) os << ' ' << fmt(v);
            os << '\n';
        }
    os << "end\n";
    return os.str();
}

inline std::uint64_t instance_hash(const Instance& inst) { return fnv1a(instance_body(inst)); }

inline std::string serialize_instance(const Instance& inst) {
    const std::string body = instance_body(inst);
    return "drccp-instance " + std::to_string(kInstanceVersion) + "\nhash " + hex64(fnv1a(body)) + "\n" + body;
}

inline Instance parse_instance(const std::string& text) {
    const std::string body = detail::checked_body(text, "drccp-instance " + std::to_string(kInstanceVersion));
    detail::Tokens tk(body);
    Instance inst;
    auto& S = inst.safety;
    tk.expect("kind");
    inst.kind = parse_kind(tk.next());
    tk.expect("seed");
    inst.seed = static_cast<std::uint64_t>(std::stoull(tk.next()));
    tk.expect("dims");
    inst.N = tk.count();
    S.P = tk.count();
    S.K = tk.count();
    S.L = tk.count();
    tk.expect("ambiguity");
    inst.epsilon = tk.number();
    inst.theta = tk.number();
    inst.norm = parse_norm(tk.next());
    tk.expect("closedness");
    const auto cl = tk.next();
    if (cl != "open" && cl != "closed") throw Error(ErrorCode::ParseError, "bad closedness '" + cl + "'");
    S.closedness = cl == "open" ? Closedness::Open : Closedness::Closed;
    tk.expect("meta");
    inst.resources = tk.count();
    inst.customer_groups = tk.count();
    inst.target_return = tk.number();
    tk.expect("W");
    S.W = tk.numbers(S.K * S.L);
    tk.expect("b");
    S.b = tk.numbers(S.K);
    S.a.resize(S.P);
    for (auto& row : S.a) {
        tk.expect("a");
        row = tk.numbers(S.L);
    }
    tk.expect("d");
    S.d = tk.numbers(S.P);
    tk.expect("lower");
    inst.lower = tk.numbers(S.L);
    tk.expect("upper");
    inst.upper = tk.numbers(S.L);
    tk.expect("cost");
    inst.cost = tk.numbers(S.L);
    inst.scenarios.assign(inst.N * S.P * S.K, 0.0);
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < S.P; ++p) {
            tk.expect("xi");
            if (tk.count() != i || tk.count() != p) throw Error(ErrorCode::ParseError, "scenario blocks out of order");
            const auto v = tk.numbers(S.K);
            std::copy(v.begin(), v.end(), inst.scenarios.begin() + static_cast<long>((i * S.P + p) * S.K));
        }
    tk.expect("end");
    if (!tk.done()) throw Error(ErrorCode::ParseError, "trailing content after 'end'");
    inst.validate();
    return inst;
}

inline void write_instance(const std::filesystem::path& path, const Instance& inst) {
    write_atomic(path, serialize_instance(inst));
}

inline Instance read_instance(const std::filesystem::path& path) { return parse_instance(read_file(path)); }

// ------------------------------------------------------------- model export

enum class ExportStyle { LinearizedText, ConicAnnotatedText };

namespace detail {

inline std::string sense_token(Sense s) {
    switch (s) {
        case Sense::GE: return ">=";
        case Sense::LE: return "<=";
        case Sense::EQ: return "=";
    }
    return "?";
}

inline void put_terms(std::ostringstream& os, const Terms& terms, const MipModel& m) {
    bool any = false;
    for (const auto& [j, c] : terms) {
        if (c == 0.0) continue;
        os << ' ' << (c < 0 ? "- " : "+ ") << fmt(std::abs(c)) << ' ' << m.vars[j].name;
        any = true;
    }
    if (!any) os << " 0 " << m.vars.front().name;
}

}  // namespace detail

/// Algebraic text layout:
///   \ comment lines
///   minimize / obj: <terms>
///   subject to / <label>: <terms> <sense> <rhs>
///   bounds / <lo> <= <name> <= <hi>  (or "<name> free", "<name> >= <lo>")
///   binaries / <name>...
///   end
/// With the conic style, each symbolic cone follows as a comment block
///   \ cone <label> bound <name> norm l2 entries <n>
///   \ entry <k> <constant> <terms>
/// Outer-approximation rows over model columns can be appended through `oa`.
inline std::string export_model(const MipModel& m, ExportStyle style, const std::vector<LinearRow>& oa = {}) {
    if (m.vars.empty()) throw Error(ErrorCode::InvalidArgument, "model has no variables");
    std::ostringstream os;
    os << "\\ drccp-model " << kExportVersion << '\n';
    os << "\\ style " << (style == ExportStyle::LinearizedText ? "linearized" : "conic-annotated") << '\n';
    os << "minimize\n obj:";
    Terms obj;
    for (std::size_t j = 0; j < m.objective.size(); ++j)
        if (m.objective[j] != 0.0) obj.emplace_back(j, m.objective[j]);
    detail::put_terms(os, obj, m);
    os << "\nsubject to\n";
    std::map<std::string, int> used;
    auto unique = [&used](const std::string& label) {
        const std::string base = label.empty() ? "row" : label;
        const int n = used[base]++;
        return n == 0 ? base : base + "_dup" + std::to_string(n);
    };
    auto put_row = [&](const LinearRow& r) {
        os << ' ' << unique(r.label) << ':';
        detail::put_terms(os, r.terms, m);
        os << ' ' << detail::sense_token(r.sense) << ' ' << fmt(r.rhs) << '\n';
    };
    for (const auto& r : m.rows) put_row(r);
    for (const auto& r : oa) {
        bool inside = true;
        for (const auto& [j, c] : r.terms) inside = inside && j < m.vars.size();
        if (inside) put_row(r);
    }
    os << "bounds\n";
    for (const auto& v : m.vars) {
        if (v.kind == VarKind::Binary) continue;
        const bool lo = std::isfinite(v.lower), hi = std::isfinite(v.upper);
        if (lo && hi) os << ' ' << fmt(v.lower) << " <= " << v.name << " <= " << fmt(v.upper) << '\n';
        else if (lo) os << ' ' << v.name << " >= " << fmt(v.lower) << '\n';
        else if (hi) os << " -inf <= " << v.name << " <= " << fmt(v.upper) << '\n';
        else os << ' ' << v.name << " free\n";
    }
    os << "binaries\n";
    for (const auto& v : m.vars)
        if (v.kind == VarKind::Binary) os << ' ' << v.name << '\n';
    os << "end\n";
    if (style == ExportStyle::ConicAnnotatedText) {
        for (const auto& c : m.cones) {
            if (c.linearized) continue;
            os << "\\ cone " << (c.label.empty() ? "cone" : c.label) << " bound " << m.vars[c.bound_var].name
               << " norm " << to_string(c.norm) << " entries " << c.entries.size() << '\n';
            for (std::size_t k = 0; k < c.entries.size(); ++k) {
                std::ostringstream e;
                detail::put_terms(e, c.entries[k].terms, m);
                os << "\\ entry " << k << ' ' << fmt(c.entries[k].constant) << e.str() << '\n';
            }
        }
    }
    return os.str();
}

inline void write_model(const std::filesystem::path& path, const MipModel& m, ExportStyle style,
                        const std::vector<LinearRow>& oa = {}) {
    write_atomic(path, export_model(m, style, oa));
}

// ---------------------------------------------------------------- cut dumps

/// One line per cut:
///   cut <probe_i|-> <probe_p|-> rhs <v> threshold <v> J <n> <j..> coef <c..> mu <L> <m..>
inline std::string serialize_cuts(const std::vector<MixingCut>& cuts) {
    std::ostringstream os;
    os << "drccp-cuts " << kCutVersion << "\ncount " << cuts.size() << '\n';
    for (const auto& c : cuts) {
        os << "cut " << (c.probe_i == kNoProbe ? std::string("-") : std::to_string(c.probe_i)) << ' '
           << (c.probe_p == kNoProbe ? std::string("-") : std::to_string(c.probe_p)) << " rhs " << fmt(c.rhs)
           << " threshold " << fmt(c.threshold) << " J " << c.J.size();
        for (auto j : c.J) os << ' ' << j;
        os << " coef";
        for (double v : c.coefficients) os << ' ' << fmt(v);
        os << " mu " << c.mu.size();
        for (double v : c.mu) os << ' ' << fmt(v);
        os << '\n';
    }
    return os.str();
}

inline std::vector<MixingCut> parse_cuts(const std::string& text) {
    detail::Tokens tk(text);
    tk.expect("drccp-cuts");
    if (tk.count() != static_cast<std::size_t>(kCutVersion)) throw Error(ErrorCode::ParseError, "unsupported cut version");
    tk.expect("count");
    std::vector<MixingCut> out(tk.count());
    for (auto& c : out) {
        tk.expect("cut");
        const auto pi = tk.next();
        const auto pp = tk.next();
        c.probe_i = pi == "-" ? kNoProbe : std::stoull(pi);
        c.probe_p = pp == "-" ? kNoProbe : std::stoull(pp);
        tk.expect("rhs");
        c.rhs = tk.number();
        tk.expect("threshold");
        c.threshold = tk.number();
        tk.expect("J");
        c.J.resize(tk.count());
        for (auto& j : c.J) j = tk.count();
        tk.expect("coef");
        c.coefficients = tk.numbers(c.J.size());
        tk.expect("mu");
        c.mu = tk.numbers(tk.count());
    }
    if (!tk.done()) throw Error(ErrorCode::ParseError, "trailing content in cut dump");
    return out;
}

// ----------------------------------------------------------- quantile cache

/// Header binds the cache to one instance; records are
///   rec <p> <i> <mode> <k> <q> h <0|N> <h..>
inline std::string serialize_quantiles(const QuantileTable& qt, const Instance& inst) {
    std::ostringstream os;
    os << "drccp-quantiles " << kQuantileVersion << '\n';
    os << "instance " << hex64(instance_hash(inst)) << '\n';
    os << "dims " << qt.N << ' ' << qt.P << ' ' << qt.k << '\n';
    for (std::size_t p = 0; p < qt.P; ++p)
        for (std::size_t i = 0; i < qt.N; ++i) {
            os << "rec " << p << ' ' << i << ' ' << to_string(qt.row_mode[p]) << ' ' << qt.k << ' '
               << fmt(qt.at(i, p));
            if (qt.has_values(i, p)) {
                os << " h " << qt.N;
                for (double v : qt.h_values(i, p)) os << ' ' << fmt(v);
            } else {
                os << " h 0";
            }
            os << '\n';
        }
    os << "end\n";
    return os.str();
}

inline QuantileTable parse_quantiles(const std::string& text, const Instance& inst) {
    detail::Tokens tk(text);
    tk.expect("drccp-quantiles");
    if (tk.count() != static_cast<std::size_t>(kQuantileVersion))
        throw Error(ErrorCode::ParseError, "unsupported quantile cache version");
    tk.expect("instance");
    if (tk.next() != hex64(instance_hash(inst))) throw Error(ErrorCode::ParseError, "cache belongs to another instance");
    tk.expect("dims");
    QuantileTable qt;
    qt.N = tk.count();
    qt.P = tk.count();
    qt.k = tk.count();
    if (qt.N != inst.N || qt.P != inst.P()) throw Error(ErrorCode::ParseError, "cache dimensions differ from instance");
    qt.row_mode.assign(qt.P, QuantileMode::ExactIndividual);
    qt.q.assign(qt.N * qt.P, -kInf);
    qt.h.assign(qt.N * qt.P * qt.N, 0.0);
    qt.has_h.assign(qt.N * qt.P, 0);
    for (std::size_t r = 0; r < qt.N * qt.P; ++r) {
        tk.expect("rec");
        const std::size_t p = tk.count(), i = tk.count();
        if (p >= qt.P || i >= qt.N) throw Error(ErrorCode::ParseError, "record index out of range");
        qt.row_mode[p] = parse_quantile_mode(tk.next());
        if (tk.count() != qt.k) throw Error(ErrorCode::ParseError, "record k differs from header");
        qt.q[i * qt.P + p] = tk.number();
        tk.expect("h");
        const std::size_t nh = tk.count();
        if (nh != 0 && nh != qt.N) throw Error(ErrorCode::ParseError, "record has a partial value list");
        if (nh) {
            const auto v = tk.numbers(nh);
            std::copy(v.begin(), v.end(), qt.h.begin() + static_cast<long>((i * qt.P + p) * qt.N));
            qt.has_h[i * qt.P + p] = 1;
        }
    }
    tk.expect("end");
    return qt;
}

// ---------------------------------------------------------- solve reports

inline std::string format_report(const SolveReport& r) {
    std::ostringstream os;
    os << "status=" << to_string(r.status) << '\n'
       << "ub=" << fmt(r.ub) << '\n'
       << "lb=" << fmt(r.lb) << '\n'
       << "gap=" << fmt(r.gap) << '\n'
       << "nodes=" << r.nodes << '\n'
       << "cuts=" << r.cuts << '\n'
       << "cut_rounds=" << r.cut_rounds << '\n'
       << "root_bound=" << fmt(r.root_bound) << '\n'
       << "root_bound_nocuts=" << fmt(r.root_bound_nocuts) << '\n'
       << "root_ub=" << fmt(r.root_ub) << '\n'
       << "root_gap=" << fmt(r.root_gap) << '\n'
       << "root_time=" << fmt(r.root_time) << '\n'
       << "wall_time=" << fmt(r.wall_time) << '\n';
    return os.str();
}

// ------------------------------------------------------------ bench tables

/// Column semantics:
///   Slv(Fnd)    solved to optimality (with an incumbent)
///   Time(Gap)   mean time of solved instances (mean final gap of the others)
///   R.time      mean root time over all instances
///   R.gap(Fnd)  mean root gap over instances with a root incumbent (their count)
///   Cuts        mean number of cuts added
/// '*' marks a statistic with no instance to average over.
struct BenchCell {
    std::size_t solved = 0, found = 0, root_found = 0, count = 0;
    double time = kInf, gap = kInf, root_time = 0.0, root_gap = kInf, cuts = 0.0;
};

inline BenchCell summarize(const std::vector<SolveReport>& reps) {
    BenchCell c;
    c.count = reps.size();
    double t = 0.0, g = 0.0, rg = 0.0, rt = 0.0, cuts = 0.0;
    std::size_t ng = 0;
    for (const auto& r : reps) {
        if (r.solved()) {
            ++c.solved;
            t += r.wall_time;
        } else {
            const double gap = percent_gap(r.ub, r.lb);
            if (std::isfinite(gap)) {
                g += gap;
                ++ng;
            }
        }
        if (r.found()) ++c.found;
        if (std::isfinite(r.root_ub)) {
            ++c.root_found;
            rg += percent_gap(r.root_ub, r.root_bound);
        }
        rt += r.root_time;
        cuts += static_cast<double>(r.cuts);
    }
    if (c.solved) c.time = t / static_cast<double>(c.solved);
    if (ng) c.gap = g / static_cast<double>(ng);
    if (c.root_found) c.root_gap = rg / static_cast<double>(c.root_found);
    if (c.count) {
        c.root_time = rt / static_cast<double>(c.count);
        c.cuts = cuts / static_cast<double>(c.count);
    }
    return c;
}

class BenchTable {
public:
    void add(std::size_t N, double theta, SolveReport r) { cells_[{N, theta}].push_back(std::move(r)); }

    const std::vector<SolveReport>& reports(std::size_t N, double theta) const { return cells_.at({N, theta}); }

    std::string render() const {
        std::ostringstream os;
        os << std::left << std::setw(6) << "N" << std::setw(9) << "theta" << std::setw(10) << "Slv(Fnd)"
           << std::setw(16) << "Time(Gap)" << std::setw(10) << "R.time" << std::setw(16) << "R.gap(Fnd)" << "Cuts\n";
        for (const auto& [key, reps] : cells_) {
            const auto c = summarize(reps);
            auto num = [](double v, int prec) {
                if (!std::isfinite(v)) return std::string("*");
                std::ostringstream s;
                s << std::fixed << std::setprecision(prec) << v;
                return s.str();
            };
            os << std::left << std::setw(6) << key.first << std::setw(9) << num(key.second, 3)
               << std::setw(10) << (std::to_string(c.solved) + "(" + std::to_string(c.found) + ")")
               << std::setw(16) << (num(c.time, 2) + "(" + num(c.gap, 2) + ")") << std::setw(10)
               << num(c.root_time, 2) << std::setw(16)
               << (num(c.root_gap, 2) + "(" + std::to_string(c.root_found) + ")") << num(c.cuts, 1) << '\n';
        }
        return os.str();
    }

private:
    std::map<std::pair<std::size_t, double>, std::vector<SolveReport>> cells_;
};

}  // namespace drccp::io
