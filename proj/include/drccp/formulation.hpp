#pragma once

// Builders for the Basic, Knapsack and Improved (quantile-strengthened)
// big-M formulations, plus the domain big-M rule.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/instance.hpp"
#include "drccp/model.hpp"
#include "drccp/quantile.hpp"

namespace drccp {

enum class Formulation { Basic, Knapsack, Improved, Mixing };

inline std::string_view to_string(Formulation f) {
    switch (f) {
        case Formulation::Basic: return "basic";
        case Formulation::Knapsack: return "knapsack";
        case Formulation::Improved: return "improved";
        case Formulation::Mixing: return "mixing";
    }
    return "?";
}

inline Formulation parse_formulation(std::string_view s) {
    for (auto f : {Formulation::Basic, Formulation::Knapsack, Formulation::Improved, Formulation::Mixing})
        if (to_string(f) == s) return f;
    throw Error(ErrorCode::ParseError, "unknown formulation '" + std::string(s) + "'");
}

namespace detail {

inline std::string idx(std::size_t i) { return std::to_string(i); }

inline Terms sparse_mu(const MipModel& m, std::span<const double> mu) {
    Terms t;
    for (std::size_t l = 0; l < mu.size(); ++l)
        if (mu[l] != 0.0) t.emplace_back(m.x(l), mu[l]);
    return t;
}

/// Adds the norm variable `nrm` >= ||b - W x||_* and its linear expansion
/// (or a symbolic L2 cone). Rows of W that vanish contribute |b_k| directly.
inline std::size_t add_norm(MipModel& m, const Instance& inst) {
    const auto& S = inst.safety;
    const Norm dn = inst.tag().dual_norm();
    std::vector<char> constant_row(S.K, 1);
    double const_part = 0.0;
    for (std::size_t k = 0; k < S.K; ++k) {
        for (std::size_t l = 0; l < S.L; ++l)
            if (S.w(k, l) != 0.0) constant_row[k] = 0;
        if (constant_row[k]) {
            if (dn == Norm::L1) const_part += std::abs(S.b[k]);
            else if (dn == Norm::Linf) const_part = std::max(const_part, std::abs(S.b[k]));
        }
    }
    m.aux_begin = m.vars.size();
    const std::size_t nrm = m.add_var("nrm", VarKind::Continuous, dn == Norm::Linf ? const_part : 0.0, kInf);

    ConeRow cone;
    cone.bound_var = nrm;
    cone.norm = dn;
    cone.linearized = dn != Norm::L2;
    cone.label = "cone";
    for (std::size_t k = 0; k < S.K; ++k) {
        AffineExpr e;
        e.constant = S.b[k];
        for (std::size_t l = 0; l < S.L; ++l)
            if (S.w(k, l) != 0.0) e.terms.emplace_back(m.x(l), -S.w(k, l));
        cone.entries.push_back(std::move(e));
    }

    if (dn == Norm::L1) {
        Terms sum{{nrm, 1.0}};
        for (std::size_t k = 0; k < S.K; ++k) {
            if (constant_row[k]) continue;
            const std::size_t s = m.add_var("s" + idx(k), VarKind::Continuous, 0.0, kInf);
            sum.emplace_back(s, -1.0);
            Terms pos{{s, 1.0}}, neg{{s, 1.0}};
            for (std::size_t l = 0; l < S.L; ++l) {
                const double w = S.w(k, l);
                if (w == 0.0) continue;
                pos.emplace_back(m.x(l), w);
                neg.emplace_back(m.x(l), -w);
            }
            m.add_row(std::move(pos), Sense::GE, S.b[k], RowFamily::NormAux, "nrm_pos_" + idx(k));
            m.add_row(std::move(neg), Sense::GE, -S.b[k], RowFamily::NormAux, "nrm_neg_" + idx(k));
        }
        m.add_row(std::move(sum), Sense::GE, const_part, RowFamily::NormAux, "nrm_sum");
    } else if (dn == Norm::Linf) {
        for (std::size_t k = 0; k < S.K; ++k) {
            if (constant_row[k]) continue;
            Terms pos{{nrm, 1.0}}, neg{{nrm, 1.0}};
            for (std::size_t l = 0; l < S.L; ++l) {
                const double w = S.w(k, l);
                if (w == 0.0) continue;
                pos.emplace_back(m.x(l), w);
                neg.emplace_back(m.x(l), -w);
            }
            m.add_row(std::move(pos), Sense::GE, S.b[k], RowFamily::NormAux, "nrm_pos_" + idx(k));
            m.add_row(std::move(neg), Sense::GE, -S.b[k], RowFamily::NormAux, "nrm_neg_" + idx(k));
        }
    }
    m.cones.push_back(std::move(cone));
    m.aux_count = m.vars.size() - m.aux_begin;
    return nrm;
}

/// Variables z, r, t, x (+ norm auxiliaries) and the conic row
///   eps t - theta nrm - (1/N) sum r >= 0.
/// With theta = 0 the norm term drops out and no auxiliaries are created.
inline MipModel core_model(const Instance& inst, bool with_binaries = true) {
    inst.validate();
    MipModel m;
    m.N = inst.N;
    m.L = inst.L();
    m.z_begin = 0;
    if (with_binaries)
        for (std::size_t i = 0; i < inst.N; ++i) m.add_var("z" + idx(i), VarKind::Binary, 0.0, 1.0);
    m.r_begin = m.vars.size();
    for (std::size_t i = 0; i < inst.N; ++i) m.add_var("r" + idx(i), VarKind::Continuous, 0.0, kInf);
    m.t_index = m.add_var("t", VarKind::Continuous, 0.0, kInf);
    m.x_begin = m.vars.size();
    for (std::size_t l = 0; l < inst.L(); ++l)
        m.add_var("x" + idx(l), VarKind::Continuous, inst.lower[l], inst.upper[l], inst.cost[l]);
    m.aux_begin = m.vars.size();
    Terms conic{{m.t_index, inst.epsilon}};
    for (std::size_t i = 0; i < inst.N; ++i) conic.emplace_back(m.r(i), -1.0 / static_cast<double>(inst.N));
    if (inst.theta > 0.0) {
        const std::size_t nrm = add_norm(m, inst);
        conic.emplace_back(nrm, -inst.theta);
    }
    m.add_row(std::move(conic), Sense::GE, 0.0, RowFamily::Conic, "conic");
    return m;
}

inline void check_bigM(const Instance& inst, const BigMVector& M) {
    if (M.size() != inst.N) throw Error(ErrorCode::DimensionMismatch, "need one big-M value per scenario");
    for (double v : M.values)
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidBigM, "big-M values must be finite and positive");
}

// M (1 - z) >= t - r   as   r - t - M z >= -M
inline void add_bigM1(MipModel& m, const Instance& inst, const BigMVector& M) {
    for (std::size_t i = 0; i < inst.N; ++i)
        m.add_row({{m.r(i), 1.0}, {m.t_index, -1.0}, {m.z(i), -M[i]}}, Sense::GE, -M[i], RowFamily::BigM1,
                  "bigM1_" + idx(i));
}

// mu^T x + C z - t + r >= -c
inline void add_bigM2_row(MipModel& m, const ScenarioRows& rows, std::size_t i, std::size_t p, double C) {
    Terms t = sparse_mu(m, rows.mu(i, p));
    t.emplace_back(m.z(i), C);
    t.emplace_back(m.t_index, -1.0);
    t.emplace_back(m.r(i), 1.0);
    m.add_row(std::move(t), Sense::GE, -rows.constant(i, p), RowFamily::BigM2, "bigM2_" + idx(i) + "_" + idx(p));
}

inline void add_knapsack_rows(MipModel& m, const Instance& inst, const BigMVector& M, const ScenarioRows& rows) {
    Terms sum;
    for (std::size_t i = 0; i < inst.N; ++i) sum.emplace_back(m.z(i), 1.0);
    m.add_row(std::move(sum), Sense::LE, static_cast<double>(inst.k()), RowFamily::Knapsack, "knapsack");
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < inst.P(); ++p) {
            Terms t = sparse_mu(m, rows.mu(i, p));
            t.emplace_back(m.z(i), M[i]);
            m.add_row(std::move(t), Sense::GE, -rows.constant(i, p), RowFamily::BigM3,
                      "bigM3_" + idx(i) + "_" + idx(p));
        }
}

}  // namespace detail

inline MipModel build_basic(const Instance& inst, const BigMVector& M) {
    detail::check_bigM(inst, M);
    MipModel m = detail::core_model(inst);
    const ScenarioRows rows(inst);
    detail::add_bigM1(m, inst, M);
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < inst.P(); ++p) detail::add_bigM2_row(m, rows, i, p, M[i]);
    return m;
}

inline MipModel build_knapsack(const Instance& inst, const BigMVector& M) {
    MipModel m = build_basic(inst, M);
    const ScenarioRows rows(inst);
    detail::add_knapsack_rows(m, inst, M, rows);
    return m;
}

struct ImprovedOptions {
    // Reject strengthened coefficients below zero instead of using them.
    bool reject_negative = false;
};

/// Knapsack model with the bigM2 coefficient on z^i reduced to
/// min(M^i, -b^T xi_p^i - d_p - q_p^i) and quantile rows mu^T x >= q_p^i.
/// A q of -inf keeps M^i and adds no quantile row. A q of +inf means more
/// than k scenarios cannot satisfy row p anywhere in the domain; the model
/// then carries the infeasible row 0 >= 1.
inline MipModel build_improved(const Instance& inst, const BigMVector& M, const QuantileTable& qt,
                               const ImprovedOptions& opt = {}) {
    detail::check_bigM(inst, M);
    if (qt.N != inst.N || qt.P != inst.P() || qt.q.size() != inst.N * inst.P())
        throw Error(ErrorCode::DimensionMismatch, "quantile table does not match the instance");
    MipModel m = detail::core_model(inst);
    const ScenarioRows rows(inst);
    detail::add_bigM1(m, inst, M);
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < inst.P(); ++p) {
            const double q = qt.at(i, p);
            if (std::isnan(q))
                throw Error(ErrorCode::InvalidQuantile, "quantile for scenario " + detail::idx(i) + " row " +
                                                            detail::idx(p) + " is not a number");
            double C = M[i];
            if (std::isfinite(q)) {
                const double reduced = -rows.constant(i, p) - q;
                if (reduced < 0.0 && opt.reject_negative)
                    throw Error(ErrorCode::InvalidQuantile, "negative strengthened coefficient for scenario " +
                                                                detail::idx(i) + " row " + detail::idx(p));
                if (reduced > M[i])
                    m.diagnostics.push_back("M below strengthened coefficient at scenario " + detail::idx(i) +
                                            " row " + detail::idx(p));
                C = std::min(M[i], reduced);
            }
            detail::add_bigM2_row(m, rows, i, p, C);
        }
    detail::add_knapsack_rows(m, inst, M, rows);
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < inst.P(); ++p) {
            const double q = qt.at(i, p);
            if (q == -kInf) continue;
            if (q == kInf) {
                m.diagnostics.push_back("infeasible quantile at scenario " + detail::idx(i) + " row " + detail::idx(p));
                m.add_row({}, Sense::GE, 1.0, RowFamily::Quantile, "quantile_" + detail::idx(i) + "_" + detail::idx(p));
                continue;
            }
            m.add_row(detail::sparse_mu(m, rows.mu(i, p)), Sense::GE, q, RowFamily::Quantile,
                      "quantile_" + detail::idx(i) + "_" + detail::idx(p));
        }
    return m;
}

/// M^i = max over the box and rows p of |mu_p^i^T x + c_p^i|.
inline BigMVector compute_bigM_domain(const Instance& inst) {
    for (std::size_t l = 0; l < inst.L(); ++l)
        if (!std::isfinite(inst.lower[l]) || !std::isfinite(inst.upper[l]))
            throw Error(ErrorCode::UnboundedDomain, "domain is unbounded; supply big-M values");
    const ScenarioRows rows(inst);
    std::vector<double> M(inst.N, 0.0);
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < inst.P(); ++p) {
            const auto mu = rows.mu(i, p);
            double hi = rows.constant(i, p), lo = hi;
            for (std::size_t l = 0; l < inst.L(); ++l) {
                const double a = mu[l] * inst.lower[l], b = mu[l] * inst.upper[l];
                hi += std::max(a, b);
                lo += std::min(a, b);
            }
            M[i] = std::max({M[i], std::abs(hi), std::abs(lo)});
        }
    for (double& v : M) v = std::max(v, 1e-9);
    return BigMVector(std::move(M), BigMProvenance::DomainBound);
}

}  // namespace drccp
