#pragma once

// Single-scenario subproblem values h^j(mu), their (k+1)-th largest value
// q_p^i, and the closed-form lower bounds for covering/packing rows and for
// the resource-planning application.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/instance.hpp"
#include "drccp/lp.hpp"
#include "drccp/model.hpp"
#include "drccp/resource.hpp"

namespace drccp {

enum class QuantileMode { ExactJoint, ExactIndividual, CoveringClosedForm, PackingClosedForm, ResourceRule, UserBound };

inline std::string_view to_string(QuantileMode m) {
    switch (m) {
        case QuantileMode::ExactJoint: return "exact-joint";
        case QuantileMode::ExactIndividual: return "exact-individual";
        case QuantileMode::CoveringClosedForm: return "covering";
        case QuantileMode::PackingClosedForm: return "packing";
        case QuantileMode::ResourceRule: return "resource";
        case QuantileMode::UserBound: return "user";
    }
    return "?";
}

inline QuantileMode parse_quantile_mode(std::string_view s) {
    for (auto m : {QuantileMode::ExactJoint, QuantileMode::ExactIndividual, QuantileMode::CoveringClosedForm,
                   QuantileMode::PackingClosedForm, QuantileMode::ResourceRule, QuantileMode::UserBound})
        if (to_string(m) == s) return m;
    throw Error(ErrorCode::ParseError, "unknown quantile mode '" + std::string(s) + "'");
}

enum class Relaxation { IndividualRow, JointRows };

/// Relaxed domain used by the subproblems. Box keeps the instance bounds,
/// SignOnly keeps only the sign of each variable, Free drops everything.
enum class DomainRelax { Box, SignOnly, Free };

/// q_p^i (or a lower bound) for every (i,p), together with the scenario
/// values h^j(mu_p^i) that produced it when they are available.
struct QuantileTable {
    std::size_t N = 0, P = 0, k = 0;
    std::vector<QuantileMode> row_mode;  // per p
    std::vector<double> q;               // i*P + p
    std::vector<double> h;               // ((i*P + p)*N + j), empty when not computed
    std::vector<char> has_h;             // per (i,p)

    double at(std::size_t i, std::size_t p) const { return q[i * P + p]; }
    bool has_values(std::size_t i, std::size_t p) const { return !has_h.empty() && has_h[i * P + p]; }
    std::span<const double> h_values(std::size_t i, std::size_t p) const {
        return {h.data() + (i * P + p) * N, N};
    }
};

/// min mu^T x over the relaxed domain intersected with scenario j's rows
/// (row p only, or all rows). +inf when infeasible, -inf when unbounded.
inline double subproblem_value(std::span<const double> mu, std::size_t j, const Instance& inst, Relaxation rel,
                               std::size_t p, DomainRelax dom = DomainRelax::Box) {
    const std::size_t L = inst.L();
    if (mu.size() != L) throw Error(ErrorCode::DimensionMismatch, "direction must have length L");
    lp::Problem prob;
    for (std::size_t l = 0; l < L; ++l) {
        double lo = inst.lower[l], hi = inst.upper[l];
        if (dom == DomainRelax::SignOnly) {
            lo = lo >= 0.0 ? 0.0 : -kInf;
            hi = hi <= 0.0 ? 0.0 : kInf;
        } else if (dom == DomainRelax::Free) {
            lo = -kInf;
            hi = kInf;
        }
        prob.add_var(lo, hi, mu[l]);
    }
    auto add = [&](std::size_t pp) {
        const auto c = inst.row_coeffs(j, pp);
        Terms t;
        for (std::size_t l = 0; l < L; ++l)
            if (c[l] != 0.0) t.emplace_back(l, c[l]);
        prob.add_row(std::move(t), Sense::GE, -inst.row_constant(j, pp));
    };
    if (rel == Relaxation::JointRows)
        for (std::size_t pp = 0; pp < inst.P(); ++pp) add(pp);
    else
        add(p);
    const auto res = lp::solve(prob);
    switch (res.status) {
        case lp::Status::Optimal: return res.objective;
        case lp::Status::Infeasible: return kInf;
        case lp::Status::Unbounded: return -kInf;
    }
    return kInf;
}

/// Scenario order by non-increasing value, ties by ascending index.
inline std::vector<std::size_t> sorted_desc(std::span<const double> h) {
    std::vector<std::size_t> idx(h.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return h[a] > h[b]; });
    return idx;
}

/// (k+1)-th largest entry; -inf entries take part in the order.
inline double kth_largest(std::span<const double> h, std::size_t k) {
    if (k >= h.size()) throw Error(ErrorCode::InvalidArgument, "k must be smaller than the number of values");
    if (std::all_of(h.begin(), h.end(), [](double v) { return v == kInf; }))
        throw Error(ErrorCode::AllInfeasible, "every scenario subproblem is infeasible");
    return h[sorted_desc(h)[k]];
}

/// Subproblem values over all scenarios j for the probe direction mu_p^i.
inline std::vector<double> scenario_values(std::size_t i, std::size_t p, const Instance& inst, Relaxation rel,
                                           DomainRelax dom = DomainRelax::Box) {
    const auto mu = inst.row_coeffs(i, p);
    std::vector<double> h(inst.N);
    for (std::size_t j = 0; j < inst.N; ++j) h[j] = subproblem_value(mu, j, inst, rel, p, dom);
    return h;
}

inline double quantile(std::size_t i, std::size_t p, const Instance& inst, Relaxation rel,
                       DomainRelax dom = DomainRelax::Box) {
    const auto h = scenario_values(i, p, inst, rel, dom);
    return kth_largest(h, inst.k());
}

/// Closed-form lower bound on h^j(mu_p^i) for covering or packing rows over
/// x >= 0: min over the support of c^i_l * rhs_j / c^j_l.
inline double covering_packing_bound(std::size_t i, std::size_t p, std::size_t j, const Instance& inst) {
    const auto ci = inst.row_coeffs(i, p);
    const auto cj = inst.row_coeffs(j, p);
    const double rhs = -inst.row_constant(j, p);
    for (std::size_t l = 0; l < inst.L(); ++l)
        if (inst.lower[l] < 0.0)
            throw Error(ErrorCode::SignViolation, "closed-form bound needs a nonnegative domain");
    auto sign_of = [](std::span<const double> c, double r) {
        bool pos = r >= 0.0, neg = r <= 0.0;
        for (double v : c) {
            pos = pos && v >= 0.0;
            neg = neg && v <= 0.0;
        }
        return std::pair{pos, neg};
    };
    const auto [cov_i, pack_i] = sign_of(ci, 0.0);
    const auto [cov_j, pack_j] = sign_of(cj, rhs);
    if (!((cov_i && cov_j) || (pack_i && pack_j)))
        throw Error(ErrorCode::SignViolation, "row is neither covering nor packing");
    double best = kInf;
    bool any = false;
    for (std::size_t l = 0; l < inst.L(); ++l) {
        const bool si = ci[l] != 0.0, sj = cj[l] != 0.0;
        if (si != sj) throw Error(ErrorCode::SupportMismatch, "coefficient supports differ across scenarios");
        if (!si) continue;
        any = true;
        best = std::min(best, ci[l] * rhs / cj[l]);
    }
    if (!any) return rhs <= 0.0 ? 0.0 : kInf;
    return best;
}

/// U_dp = max lambda_p^i / mu_dp^i over scenarios with mu_dp^i > 0 (0 if none).
inline std::vector<double> resource_U_bounds(const Instance& inst) {
    const auto lay = ResourceLayout::of(inst);
    std::vector<double> U(lay.D * lay.P, 0.0);
    for (std::size_t d = 0; d < lay.D; ++d)
        for (std::size_t p = 0; p < lay.P; ++p)
            for (std::size_t i = 0; i < inst.N; ++i) {
                const double m = lay.mu(inst, i, d, p);
                if (m > 0.0) U[d * lay.P + p] = std::max(U[d * lay.P + p], lay.lambda(inst, i, p) / m);
            }
    return U;
}

struct ResourceBound {
    double value = 0.0;
    bool infeasible_scenario = false;  // scenario j cannot be met; the bound is +inf
};

/// Lower bound on h^j for the assignment row of resource d probed with
/// scenario i's coefficients.
inline ResourceBound resource_quantile_bound(std::size_t d, std::size_t i, std::size_t j, const Instance& inst,
                                             const std::vector<double>& U) {
    const auto lay = ResourceLayout::of(inst);
    const double ratio = lay.rho(inst, i, d) / lay.rho(inst, j, d) - 1.0;
    ResourceBound out;
    double sumL = 0.0, sumU = 0.0;
    for (std::size_t p = 0; p < lay.P; ++p) {
        sumU += U[d * lay.P + p];
        double others = 0.0;
        for (std::size_t dd = 0; dd < lay.D; ++dd)
            if (dd != d) others += U[dd * lay.P + p];
        const double need = lay.lambda(inst, j, p) - others;
        const double m = lay.mu(inst, j, d, p);
        if (m > 0.0) sumL += std::max(0.0, need) / m;
        else if (need > 0.0) out.infeasible_scenario = true;
    }
    if (out.infeasible_scenario) {
        out.value = kInf;
        return out;
    }
    out.value = ratio >= 0.0 ? ratio * sumL : ratio * sumU;
    return out;
}

/// M^i = max of the demand-row bound max_p max{lambda_p^i, sum_d mu_dp^i U_dp - lambda_p^i}
/// and the assignment-row bound max_d max{1 - rho/rho_max, rho/rho_min - 1} sum_p U_dp.
inline BigMVector resource_bigM(const Instance& inst) {
    const auto lay = ResourceLayout::of(inst);
    const auto U = resource_U_bounds(inst);
    std::vector<double> rmax(lay.D, 0.0), rmin(lay.D, kInf);
    for (std::size_t d = 0; d < lay.D; ++d)
        for (std::size_t i = 0; i < inst.N; ++i) {
            rmax[d] = std::max(rmax[d], lay.rho(inst, i, d));
            rmin[d] = std::min(rmin[d], lay.rho(inst, i, d));
        }
    std::vector<double> M(inst.N, 0.0);
    for (std::size_t i = 0; i < inst.N; ++i) {
        double lb1 = 0.0, lb2 = 0.0;
        for (std::size_t p = 0; p < lay.P; ++p) {
            double served = 0.0;
            for (std::size_t d = 0; d < lay.D; ++d) served += lay.mu(inst, i, d, p) * U[d * lay.P + p];
            const double lam = lay.lambda(inst, i, p);
            lb1 = std::max(lb1, std::max(lam, served - lam));
        }
        for (std::size_t d = 0; d < lay.D; ++d) {
            if (!(rmin[d] > 0.0)) throw Error(ErrorCode::NonpositiveYield, "resource yield must be positive");
            double sumU = 0.0;
            for (std::size_t p = 0; p < lay.P; ++p) sumU += U[d * lay.P + p];
            const double r = lay.rho(inst, i, d);
            lb2 = std::max(lb2, std::max(1.0 - r / rmax[d], r / rmin[d] - 1.0) * sumU);
        }
        M[i] = std::max({lb1, lb2, 1e-9});
    }
    return BigMVector(std::move(M), BigMProvenance::ResourceRule);
}

/// M^i = max{w, (xi_max / xi_min - 1) w} for the covering row xi^T x > w.
inline BigMVector portfolio_bigM(const Instance& inst) {
    const double w = inst.target_return;
    double lo = kInf, hi = -kInf;
    for (double v : inst.scenarios) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo > 0.0)) throw Error(ErrorCode::NonpositiveYield, "portfolio yields must be positive");
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidArgument, "target return must be positive");
    const double m = std::max(w, (hi / lo - 1.0) * w);
    return BigMVector(std::vector<double>(inst.N, m), BigMProvenance::PortfolioRule);
}

struct QuantileConfig {
    QuantileMode mode = QuantileMode::ExactIndividual;
    std::vector<QuantileMode> row_modes;  // optional per-row override
    DomainRelax domain = DomainRelax::Box;
    std::vector<double> user_bounds;      // N*P, UserBound rows
    unsigned threads = 1;
    const QuantileTable* cache = nullptr;  // reuse rows computed with the same mode

    QuantileMode mode_for(std::size_t p) const { return p < row_modes.size() ? row_modes[p] : mode; }
};

namespace detail {

inline void fill_probe(QuantileTable& t, std::size_t i, std::size_t p, const Instance& inst,
                       const QuantileConfig& cfg, const std::vector<double>& U) {
    const std::size_t N = inst.N;
    const auto mode = cfg.mode_for(p);
    const std::size_t at = i * t.P + p;
    if (mode == QuantileMode::UserBound) {
        if (cfg.user_bounds.size() != N * t.P)
            throw Error(ErrorCode::DimensionMismatch, "user bounds must have N*P entries");
        t.q[at] = cfg.user_bounds[at];
        t.has_h[at] = 0;
        return;
    }
    if (cfg.cache && cfg.cache->N == N && cfg.cache->P == t.P && cfg.cache->k == t.k &&
        p < cfg.cache->row_mode.size() && cfg.cache->row_mode[p] == mode) {
        t.q[at] = cfg.cache->q[at];
        if (cfg.cache->has_values(i, p)) {
            const auto src = cfg.cache->h_values(i, p);
            std::copy(src.begin(), src.end(), t.h.begin() + static_cast<long>(at * N));
            t.has_h[at] = 1;
        }
        return;
    }
    double* h = t.h.data() + at * N;
    switch (mode) {
        case QuantileMode::ExactIndividual:
        case QuantileMode::ExactJoint: {
            const auto mu = inst.row_coeffs(i, p);
            const auto rel = mode == QuantileMode::ExactJoint ? Relaxation::JointRows : Relaxation::IndividualRow;
            for (std::size_t j = 0; j < N; ++j) h[j] = subproblem_value(mu, j, inst, rel, p, cfg.domain);
            break;
        }
        case QuantileMode::CoveringClosedForm:
        case QuantileMode::PackingClosedForm:
            for (std::size_t j = 0; j < N; ++j) h[j] = covering_packing_bound(i, p, j, inst);
            break;
        case QuantileMode::ResourceRule: {
            const auto lay = ResourceLayout::of(inst);
            if (!lay.is_assignment(p))
                throw Error(ErrorCode::InvalidArgument, "resource rule applies to assignment rows only");
            for (std::size_t j = 0; j < N; ++j) h[j] = resource_quantile_bound(p, i, j, inst, U).value;
            break;
        }
        case QuantileMode::UserBound: break;
    }
    t.has_h[at] = 1;
    t.q[at] = kth_largest({h, N}, t.k);
}

}  // namespace detail

inline QuantileTable build_quantile_table(const Instance& inst, const QuantileConfig& cfg) {
    QuantileTable t;
    t.N = inst.N;
    t.P = inst.P();
    t.k = inst.k();
    t.row_mode.resize(t.P);
    for (std::size_t p = 0; p < t.P; ++p) t.row_mode[p] = cfg.mode_for(p);
    t.q.assign(t.N * t.P, -kInf);
    t.h.assign(t.N * t.P * t.N, -kInf);
    t.has_h.assign(t.N * t.P, 0);
    std::vector<double> U;
    if (std::find(t.row_mode.begin(), t.row_mode.end(), QuantileMode::ResourceRule) != t.row_mode.end())
        U = resource_U_bounds(inst);

    const std::size_t probes = t.N * t.P;
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(probes)));
    if (workers == 1) {
        for (std::size_t s = 0; s < probes; ++s) detail::fill_probe(t, s / t.P, s % t.P, inst, cfg, U);
        return t;
    }
    // Each worker writes disjoint (i,p) slots; the first error is rethrown.
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t s = w; s < probes; s += workers) detail::fill_probe(t, s / t.P, s % t.P, inst, cfg, U);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return t;
}

}  // namespace drccp
