#pragma once

// Reference computations: optimum by enumeration of the scenario indicators
// (no big-M constants involved), DR membership through the distance system,
// and classification of points with b = A^T x.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/formulation.hpp"
#include "drccp/instance.hpp"
#include "drccp/lp.hpp"
#include "drccp/model.hpp"
#include "drccp/quantile.hpp"
#include "drccp/solver.hpp"

namespace drccp::oracle {

struct EnumerationResult {
    double objective = kInf;
    std::vector<double> x;
    std::vector<char> z;
    std::size_t lp_solves = 0;
    bool feasible() const { return std::isfinite(objective); }
};

struct EnumerationOptions {
    const QuantileTable* quantiles = nullptr;  // Improved: add mu^T x >= q rows
    const BigMVector* bigM_box = nullptr;      // restrict to |s_p(x, xi^i)| <= M^i
    const std::vector<double>* fixed_x = nullptr;  // feasibility check at a given point
};

namespace detail {

/// Continuous model for a fixed z: the conic row plus, per scenario,
///   z_i = 1:  r_i >= t                      (bigM1 with the indicator on)
///   z_i = 0:  s_p(x, xi^i) >= t - r_i  for all p
/// Knapsack-type formulations also require s_p(x, xi^i) >= 0 when z_i = 0.
inline MipModel fixed_z_model(const Instance& inst, const std::vector<char>& z, bool nonneg_rows,
                              const EnumerationOptions& opt) {
    MipModel m = drccp::detail::core_model(inst, false);
    m.z_begin = m.vars.size();  // unused; no binaries
    const ScenarioRows rows(inst);
    for (std::size_t i = 0; i < inst.N; ++i) {
        if (z[i]) {
            m.add_row({{m.r(i), 1.0}, {m.t_index, -1.0}}, Sense::GE, 0.0, RowFamily::BigM1, "on_" + std::to_string(i));
            continue;
        }
        for (std::size_t p = 0; p < inst.P(); ++p) {
            Terms t = drccp::detail::sparse_mu(m, rows.mu(i, p));
            Terms plain = t;
            t.emplace_back(m.t_index, -1.0);
            t.emplace_back(m.r(i), 1.0);
            m.add_row(std::move(t), Sense::GE, -rows.constant(i, p), RowFamily::BigM2, "off_" + std::to_string(i));
            if (nonneg_rows)
                m.add_row(std::move(plain), Sense::GE, -rows.constant(i, p), RowFamily::BigM3,
                          "safe_" + std::to_string(i));
        }
    }
    if (opt.quantiles)
        for (std::size_t i = 0; i < inst.N; ++i)
            for (std::size_t p = 0; p < inst.P(); ++p) {
                const double q = opt.quantiles->at(i, p);
                if (q == -kInf) continue;
                m.add_row(drccp::detail::sparse_mu(m, rows.mu(i, p)), Sense::GE, q, RowFamily::Quantile, "q");
            }
    if (opt.bigM_box)
        for (std::size_t i = 0; i < inst.N; ++i)
            for (std::size_t p = 0; p < inst.P(); ++p) {
                const double M = (*opt.bigM_box)[i];
                Terms t = drccp::detail::sparse_mu(m, rows.mu(i, p));
                m.add_row(t, Sense::LE, M - rows.constant(i, p), RowFamily::BigM2, "mbox_hi");
                m.add_row(std::move(t), Sense::GE, -M - rows.constant(i, p), RowFamily::BigM2, "mbox_lo");
            }
    if (opt.fixed_x)
        for (std::size_t l = 0; l < inst.L(); ++l) {
            m.vars[m.x(l)].lower = (*opt.fixed_x)[l];
            m.vars[m.x(l)].upper = (*opt.fixed_x)[l];
        }
    return m;
}

}  // namespace detail

/// Optimum over all z in {0,1}^N (Basic) or all z with |z| <= floor(eps N)
/// (Knapsack, Improved, Mixing), one LP per z.
inline EnumerationResult enumerate_optimum(const Instance& inst, Formulation f, const EnumerationOptions& opt = {}) {
    inst.validate();
    if (inst.N > 16) throw Error(ErrorCode::TooManyScenarios, "enumeration supports N <= 16");
    const bool knapsack = f != Formulation::Basic;
    const std::size_t k = inst.k();
    EnumerationResult best;
    ConePool pool;
    for (std::uint32_t mask = 0; mask < (1U << inst.N); ++mask) {
        if (knapsack && static_cast<std::size_t>(std::popcount(mask)) > k) continue;
        std::vector<char> z(inst.N);
        for (std::size_t i = 0; i < inst.N; ++i) z[i] = (mask >> i) & 1U;
        EnumerationOptions o = opt;
        if (f == Formulation::Basic || f == Formulation::Knapsack) o.quantiles = nullptr;
        const MipModel m = detail::fixed_z_model(inst, z, knapsack, o);
        std::vector<double> lo(m.vars.size()), hi(m.vars.size());
        for (std::size_t j = 0; j < m.vars.size(); ++j) {
            lo[j] = m.vars[j].lower;
            hi[j] = m.vars[j].upper;
        }
        const auto sol = solve_relaxation(m, lo, hi, {}, pool);
        ++best.lp_solves;
        if (sol.status == lp::Status::Unbounded) {
            best.objective = -kInf;
            return best;
        }
        if (sol.status != lp::Status::Optimal) continue;
        if (sol.objective < best.objective - 1e-12 * std::max(1.0, std::abs(sol.objective))) {
            best.objective = sol.objective;
            best.x.assign(sol.primal.begin() + static_cast<long>(m.x_begin),
                          sol.primal.begin() + static_cast<long>(m.x_begin + inst.L()));
            best.z = z;
        }
    }
    return best;
}

/// Whether x admits some z, r, t satisfying the rows of formulation f.
inline bool point_feasible(const Instance& inst, Formulation f, const std::vector<double>& x) {
    EnumerationOptions opt;
    opt.fixed_x = &x;
    return enumerate_optimum(inst, f, opt).feasible();
}

enum class Extraneous { InDR, OpenExtraneous, ClosedExtraneous, Boundary };

inline std::string_view to_string(Extraneous e) {
    switch (e) {
        case Extraneous::InDR: return "in-dr";
        case Extraneous::OpenExtraneous: return "open-extraneous";
        case Extraneous::ClosedExtraneous: return "closed-extraneous";
        case Extraneous::Boundary: return "boundary";
    }
    return "?";
}

/// For x with b = A^T x the safety set is all of R^K or empty, decided by
/// the signs of g_p = d_p - a_p^T x.
///   some g_p < 0                    -> ClosedExtraneous (outside for both set types)
///   some g_p = 0, none < 0, open    -> OpenExtraneous
///   some g_p = 0, none < 0, closed  -> Boundary (inside the closed set)
///   all g_p > 0                     -> InDR
inline Extraneous classify_extraneous(std::span<const double> x, const Instance& inst) {
    const auto& S = inst.safety;
    const auto v = S.direction(x);
    if (norm_value(v, inst.tag().dual_norm()) > tol::degenerate_direction)
        throw Error(ErrorCode::NotDegenerate, "b - A^T x does not vanish");
    bool zero = false, negative = false;
    for (std::size_t p = 0; p < S.P; ++p) {
        double g = S.d[p];
        for (std::size_t l = 0; l < S.L; ++l) g -= S.a[p][l] * x[l];
        if (g < -tol::degenerate_direction) negative = true;
        else if (g <= tol::degenerate_direction) zero = true;
    }
    if (negative) return Extraneous::ClosedExtraneous;
    if (zero) return S.closedness == Closedness::Open ? Extraneous::OpenExtraneous : Extraneous::Boundary;
    return Extraneous::InDR;
}

/// DR feasibility of x: with theta > 0, the LP
///   max eps t - (1/N) sum r  s.t.  r_i >= t - dist_i,  r, t >= 0
/// must reach theta; with theta = 0 the SAA count decides.
inline bool membership_drccp(std::span<const double> x, const Instance& inst) {
    inst.validate();
    if (inst.theta == 0.0) return saa_violation_count(x, inst) <= inst.k();
    const auto v = inst.safety.direction(x);
    if (norm_value(v, inst.tag().dual_norm()) <= tol::degenerate_direction) {
        const auto cls = classify_extraneous(x, inst);
        return cls == Extraneous::InDR || cls == Extraneous::Boundary;
    }
    const std::size_t N = inst.N;
    lp::Problem prob;
    const std::size_t t = prob.add_var(0.0, kInf, -inst.epsilon);
    for (std::size_t i = 0; i < N; ++i) {
        const double dist = eval_distance(x, {inst.scenarios.data() + i * inst.P() * inst.K(), inst.P() * inst.K()},
                                          inst.safety, inst.tag());
        const std::size_t r = prob.add_var(0.0, kInf, 1.0 / static_cast<double>(N));
        prob.add_row({{r, 1.0}, {t, -1.0}}, Sense::GE, -dist);
    }
    const auto res = lp::solve(prob);
    if (res.status != lp::Status::Optimal) return false;
    return -res.objective >= inst.theta - 1e-9 * std::max(1.0, inst.theta);
}

}  // namespace drccp::oracle
