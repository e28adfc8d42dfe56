#pragma once

// LP relaxations of a MipModel (with outer approximation of symbolic L2
// cones) and a best-bound branch-and-bound over the binaries with a root
// cut loop.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/lp.hpp"
#include "drccp/model.hpp"

namespace drccp {

struct LpSolution {
    lp::Status status = lp::Status::Infeasible;
    double objective = kInf;
    std::vector<double> primal;
    std::vector<double> row_activities;  // model rows first, then extra rows
    int cone_rounds = 0;
};

/// Outer-approximation rows shared by every relaxation of one model.
struct ConePool {
    std::vector<LinearRow> rows;
};

namespace detail {

inline double affine_value(const AffineExpr& e, const std::vector<double>& v) {
    double acc = e.constant;
    for (const auto& [j, c] : e.terms) acc += c * v[j];
    return acc;
}

inline void push_row(lp::Problem& p, const LinearRow& r) { p.add_row(r.terms, r.sense, r.rhs); }

/// Supporting hyperplane of u >= ||v(x)||_2 at the point v_hat, or nothing
/// if the point already satisfies the cone within tolerance.
inline bool cone_cut(const MipModel& m, const ConeRow& cone, const std::vector<double>& v, LinearRow& out) {
    std::vector<double> vhat(cone.entries.size());
    for (std::size_t k = 0; k < vhat.size(); ++k) vhat[k] = affine_value(cone.entries[k], v);
    const double nv = norm_value(vhat, Norm::L2);
    const double u = v[cone.bound_var];
    if (nv - u <= tol::cone * std::max(1.0, nv)) return false;
    std::vector<double> dense(m.vars.size(), 0.0);
    dense[cone.bound_var] += 1.0;
    double rhs = 0.0;
    for (std::size_t k = 0; k < vhat.size(); ++k) {
        const double g = vhat[k] / nv;
        if (g == 0.0) continue;
        for (const auto& [j, c] : cone.entries[k].terms) dense[j] -= g * c;
        rhs += g * cone.entries[k].constant;
    }
    out.terms.clear();
    for (std::size_t j = 0; j < dense.size(); ++j)
        if (dense[j] != 0.0) out.terms.emplace_back(j, dense[j]);
    out.sense = Sense::GE;
    out.rhs = rhs;
    out.family = RowFamily::ConeCut;
    out.label = cone.label + "_oa";
    return true;
}

/// Separable lifting of u >= ||v||_2 used by the relaxation: one column
/// tau_k >= 0 per entry with sum_k tau_k <= u and tau_k u >= v_k^2. The
/// two-dimensional pieces are refined far faster than the full cone.
struct ConeLifting {
    std::vector<std::size_t> begin;  // first tau column per cone, or npos if linearized
    std::size_t columns = 0;
};

inline ConeLifting cone_lifting(const MipModel& m) {
    ConeLifting l;
    std::size_t next = m.vars.size();
    for (const auto& cone : m.cones) {
        if (cone.linearized) {
            l.begin.push_back(static_cast<std::size_t>(-1));
            continue;
        }
        l.begin.push_back(next);
        next += cone.entries.size();
    }
    l.columns = next - m.vars.size();
    return l;
}

/// Tangent of tau u >= v^2 at (v, u) = (a, b), b > 0:
///   tau - 2(a/b) v + (a/b)^2 u >= 0.
inline LinearRow lifted_cut(const ConeRow& cone, std::size_t k, std::size_t tau, double a, double b) {
    const double r = a / b;
    LinearRow row;
    row.terms.emplace_back(tau, 1.0);
    for (const auto& [j, c] : cone.entries[k].terms) row.terms.emplace_back(j, -2.0 * r * c);
    row.terms.emplace_back(cone.bound_var, r * r);
    row.sense = Sense::GE;
    row.rhs = 2.0 * r * cone.entries[k].constant;
    row.family = RowFamily::ConeCut;
    row.label = cone.label + "_lift";
    return row;
}

}  // namespace detail

/// LP relaxation under the given variable bounds plus extra rows. Symbolic
/// cones are refined by supporting hyperplanes until the violation is below
/// the cone tolerance; the hyperplanes accumulate in `pool`.
inline LpSolution solve_relaxation(const MipModel& m, const std::vector<double>& lower,
                                   const std::vector<double>& upper, const std::vector<LinearRow>& extra,
                                   ConePool& pool, const lp::Options& opt = {}) {
    LpSolution sol;
    const int max_rounds = 500;
    const auto lift = detail::cone_lifting(m);
    const auto lift_rows = static_cast<std::size_t>(
        std::count_if(m.cones.begin(), m.cones.end(), [](const ConeRow& c) { return !c.linearized; }));
    for (int round = 0;; ++round) {
        lp::Problem p;
        p.cost = m.objective;
        p.lower = lower;
        p.upper = upper;
        for (std::size_t j = 0; j < lift.columns; ++j) p.add_var(0.0, kInf, 0.0);
        for (std::size_t c = 0; c < m.cones.size(); ++c) {
            if (m.cones[c].linearized) continue;
            Terms sum{{m.cones[c].bound_var, 1.0}};
            for (std::size_t k = 0; k < m.cones[c].entries.size(); ++k) sum.emplace_back(lift.begin[c] + k, -1.0);
            p.add_row(std::move(sum), Sense::GE, 0.0);
        }
        for (const auto& r : m.rows) detail::push_row(p, r);
        for (const auto& r : extra) detail::push_row(p, r);
        for (const auto& r : pool.rows) detail::push_row(p, r);
        auto res = lp::solve(p, opt);
        sol.status = res.status;
        sol.cone_rounds = round;
        if (res.status != lp::Status::Optimal) {
            sol.objective = res.status == lp::Status::Unbounded ? -kInf : kInf;
            return sol;
        }
        bool added = false;
        for (std::size_t c = 0; c < m.cones.size(); ++c) {
            const auto& cone = m.cones[c];
            if (cone.linearized) continue;
            LinearRow cut;
            if (!detail::cone_cut(m, cone, res.x, cut)) continue;
            pool.rows.push_back(std::move(cut));
            added = true;
            // Tangents are valid at any b > 0; b is kept near ||v|| so the
            // coefficients stay bounded when u collapses.
            std::vector<double> vhat(cone.entries.size());
            for (std::size_t k = 0; k < vhat.size(); ++k) vhat[k] = detail::affine_value(cone.entries[k], res.x);
            const double nv = norm_value(vhat, Norm::L2);
            const double b = std::max(res.x[cone.bound_var], 1e-2 * nv);
            for (std::size_t k = 0; k < vhat.size(); ++k) {
                const std::size_t tau = lift.begin[c] + k;
                if (vhat[k] * vhat[k] / b - res.x[tau] > 1e-12 * std::max(1.0, b))
                    pool.rows.push_back(detail::lifted_cut(cone, k, tau, vhat[k], b));
            }
        }
        if (!added) {
            sol.objective = res.objective;
            res.x.resize(m.vars.size());
            sol.primal = std::move(res.x);
            const auto first = res.activities.begin() + static_cast<long>(lift_rows);
            sol.row_activities.assign(first, first + static_cast<long>(m.rows.size() + extra.size()));
            return sol;
        }
        if (round >= max_rounds) throw Error(ErrorCode::NumericalFailure, "cone refinement did not converge");
    }
}

/// LP relaxation of the model with binaries relaxed to [0,1].
inline LpSolution solve_lp(const MipModel& m, const std::vector<LinearRow>& extra = {}) {
    if (m.vars.empty()) throw Error(ErrorCode::InvalidArgument, "model has no variables");
    std::vector<double> lo(m.vars.size()), hi(m.vars.size());
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        lo[j] = m.vars[j].lower;
        hi[j] = m.vars[j].upper;
    }
    ConePool pool;
    return solve_relaxation(m, lo, hi, extra, pool);
}

enum class MipStatus { Optimal, Infeasible, Unbounded, NodeLimit, TimeLimit };

inline std::string_view to_string(MipStatus s) {
    switch (s) {
        case MipStatus::Optimal: return "optimal";
        case MipStatus::Infeasible: return "infeasible";
        case MipStatus::Unbounded: return "unbounded";
        case MipStatus::NodeLimit: return "node_limit";
        case MipStatus::TimeLimit: return "time_limit";
    }
    return "?";
}

struct SolveReport {
    MipStatus status = MipStatus::Infeasible;
    double ub = kInf;  // incumbent objective
    double lb = -kInf;  // best bound
    double gap = kInf;  // (UB - LB) / LB * 100
    long nodes = 0;
    std::size_t cuts = 0;
    int cut_rounds = 0;
    double root_bound = -kInf;  // root relaxation value after the cut loop
    double root_bound_nocuts = -kInf;
    double root_ub = kInf;   // incumbent available when the root finished
    double root_gap = kInf;  // (root_ub - root_bound) / root_bound * 100
    double root_time = 0.0;
    double wall_time = 0.0;
    std::vector<double> solution;
    std::vector<LinearRow> root_cuts;

    bool found() const { return std::isfinite(ub); }
    bool solved() const { return status == MipStatus::Optimal; }
};

/// Returns rows violated at the given relaxation point (possibly empty).
using CutSource = std::function<std::vector<LinearRow>(const std::vector<double>& primal)>;

struct MipLimits {
    long node_limit = 1000000;
    double time_limit = 600.0;  // seconds
    double rel_gap = tol::mip_gap;
    int max_cut_rounds = 100;
    bool root_heuristic = true;
    std::ostream* log = nullptr;
    long log_every = 1000;
};

inline void log_progress(std::ostream& os, const char* event, const SolveReport& r, double elapsed) {
    std::ostringstream line;
    line.precision(10);
    line << "event=" << event << " nodes=" << r.nodes << " lb=" << r.lb << " ub=" << r.ub
         << " gap=" << percent_gap(r.ub, r.lb) << " cuts=" << r.cuts << " time=" << elapsed << '\n';
    os << line.str();
}

namespace detail {

struct BbNode {
    double bound;
    long id;
    std::vector<std::pair<std::size_t, signed char>> fixes;  // (var, value)
};

struct NodeOrder {
    bool operator()(const BbNode& a, const BbNode& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

}  // namespace detail

inline SolveReport solve_mip(const MipModel& m, const CutSource& cuts = {}, const MipLimits& limits = {}) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

    SolveReport rep;
    std::vector<std::size_t> bins;
    std::vector<double> lo(m.vars.size()), hi(m.vars.size());
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        lo[j] = m.vars[j].lower;
        hi[j] = m.vars[j].upper;
        if (m.vars[j].kind == VarKind::Binary) {
            bins.push_back(j);
            lo[j] = std::max(0.0, lo[j]);
            hi[j] = std::min(1.0, hi[j]);
        }
    }
    ConePool pool;
    std::vector<LinearRow> extra;

    auto most_fractional = [&](const std::vector<double>& v) -> long {
        long best = -1;
        double best_frac = tol::integrality;
        for (std::size_t j : bins) {
            const double f = std::abs(v[j] - std::round(v[j]));
            if (f > best_frac) {
                best_frac = f;
                best = static_cast<long>(j);
            }
        }
        return best;
    };
    auto try_incumbent = [&](double obj, const std::vector<double>& v) {
        if (obj < rep.ub) {
            rep.ub = obj;
            rep.solution = v;
            for (std::size_t j : bins) rep.solution[j] = std::round(rep.solution[j]);
        }
    };
    auto converged = [&](double ub, double lb) {
        return std::isfinite(ub) && ub - lb <= limits.rel_gap * std::max(1e-10, std::abs(ub));
    };

    // Root
    LpSolution root = solve_relaxation(m, lo, hi, extra, pool);
    rep.nodes = 1;
    if (root.status == lp::Status::Infeasible) {
        rep.status = MipStatus::Infeasible;
        rep.wall_time = elapsed();
        return rep;
    }
    if (root.status == lp::Status::Unbounded) {
        rep.status = MipStatus::Unbounded;
        rep.lb = -kInf;
        rep.wall_time = elapsed();
        return rep;
    }
    rep.root_bound_nocuts = root.objective;
    if (cuts) {
        while (rep.cut_rounds < limits.max_cut_rounds) {
            auto fresh = cuts(root.primal);
            if (fresh.empty()) break;
            ++rep.cut_rounds;
            rep.cuts += fresh.size();
            for (auto& r : fresh) {
                rep.root_cuts.push_back(r);
                extra.push_back(std::move(r));
            }
            root = solve_relaxation(m, lo, hi, extra, pool);
            if (root.status != lp::Status::Optimal) break;
        }
    }
    if (root.status == lp::Status::Infeasible) {
        rep.status = MipStatus::Infeasible;
        rep.wall_time = elapsed();
        return rep;
    }
    rep.root_bound = root.objective;
    rep.lb = root.objective;
    if (most_fractional(root.primal) < 0) try_incumbent(root.objective, root.primal);

    // Rounding heuristic: keep the largest z* values at one, up to the
    // number that are at least one half, and re-solve the LP.
    if (limits.root_heuristic && !std::isfinite(rep.ub) && !bins.empty()) {
        std::vector<std::size_t> order(bins);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return root.primal[a] > root.primal[b]; });
        auto hl = lo, hh = hi;
        for (std::size_t j : order) {
            const double v = root.primal[j] >= 0.5 ? 1.0 : 0.0;
            hl[j] = hh[j] = std::clamp(v, lo[j], hi[j]);
        }
        auto h = solve_relaxation(m, hl, hh, extra, pool);
        if (h.status == lp::Status::Optimal) try_incumbent(h.objective, h.primal);
    }
    rep.root_time = elapsed();
    rep.root_ub = rep.ub;
    if (limits.log) log_progress(*limits.log, "root", rep, elapsed());

    std::priority_queue<detail::BbNode, std::vector<detail::BbNode>, detail::NodeOrder> open;
    long next_id = 0;
    {
        const long j = most_fractional(root.primal);
        if (j >= 0 && !converged(rep.ub, root.objective)) {
            open.push({root.objective, next_id++, {{static_cast<std::size_t>(j), 0}}});
            open.push({root.objective, next_id++, {{static_cast<std::size_t>(j), 1}}});
        }
    }
    rep.status = MipStatus::Optimal;
    while (!open.empty()) {
        const double best_open = open.top().bound;
        rep.lb = std::max(rep.lb, std::min(best_open, rep.ub));
        if (converged(rep.ub, best_open)) break;
        if (rep.nodes >= limits.node_limit) {
            rep.status = MipStatus::NodeLimit;
            break;
        }
        if (elapsed() > limits.time_limit) {
            rep.status = MipStatus::TimeLimit;
            break;
        }
        detail::BbNode node = open.top();
        open.pop();
        if (node.bound >= rep.ub - 1e-9 * std::max(1.0, std::abs(rep.ub))) continue;
        auto nl = lo, nh = hi;
        for (const auto& [j, v] : node.fixes) nl[j] = nh[j] = v;
        auto sol = solve_relaxation(m, nl, nh, extra, pool);
        ++rep.nodes;
        if (limits.log && rep.nodes % limits.log_every == 0) log_progress(*limits.log, "node", rep, elapsed());
        if (sol.status != lp::Status::Optimal) continue;
        if (sol.objective >= rep.ub - 1e-9 * std::max(1.0, std::abs(rep.ub))) continue;
        const long j = most_fractional(sol.primal);
        if (j < 0) {
            try_incumbent(sol.objective, sol.primal);
            continue;
        }
        for (signed char v : {static_cast<signed char>(0), static_cast<signed char>(1)}) {
            auto fixes = node.fixes;
            fixes.emplace_back(static_cast<std::size_t>(j), v);
            open.push({sol.objective, next_id++, std::move(fixes)});
        }
    }
    if (rep.status == MipStatus::Optimal) {
        if (!std::isfinite(rep.ub)) {
            rep.status = MipStatus::Infeasible;
            rep.lb = kInf;
        } else {
            rep.lb = open.empty() ? rep.ub : std::max(rep.lb, std::min(open.top().bound, rep.ub));
        }
    } else if (!open.empty()) {
        rep.lb = std::max(rep.lb, std::min(open.top().bound, rep.ub));
    }
    rep.gap = percent_gap(rep.ub, rep.lb);
    rep.root_gap = percent_gap(rep.root_ub, rep.root_bound);
    rep.wall_time = elapsed();
    if (limits.log) log_progress(*limits.log, "done", rep, rep.wall_time);
    return rep;
}

/// (UB - root bound) / root bound * 100 after the root cut loop. Uses the
/// supplied incumbent if finite, otherwise the best solution of a full solve.
inline double root_gap(const MipModel& m, const CutSource& cuts = {}, double incumbent = kInf,
                       const MipLimits& limits = {}) {
    if (std::isfinite(incumbent)) {
        MipLimits root_only = limits;
        root_only.node_limit = 1;
        const auto rep = solve_mip(m, cuts, root_only);
        return percent_gap(incumbent, rep.root_bound);
    }
    const auto rep = solve_mip(m, cuts, limits);
    if (!rep.found()) throw Error(ErrorCode::NoIncumbent, "no feasible solution to measure the root gap");
    return percent_gap(rep.ub, rep.root_bound);
}

}  // namespace drccp
