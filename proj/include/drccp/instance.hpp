#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "drccp/common.hpp"

namespace drccp {

enum class Closedness { Open, Closed };

/// Linear safety set
///   S(x) = { xi : (b - W x)^T xi_p + d_p - a_p^T x  (>|>=)  0,  p = 1..P }
/// where W is the K x L weight matrix (the transpose of the coefficient
/// matrix A acting on xi), xi_p in R^K and x in R^L.
struct SafetySpec {
    std::size_t K = 0;  // length of each xi_p
    std::size_t L = 0;  // number of decision variables
    std::size_t P = 0;  // number of joint rows
    std::vector<double> W;               // K x L, row-major
    std::vector<double> b;               // K
    std::vector<std::vector<double>> a;  // P vectors of length L
    std::vector<double> d;               // P
    Closedness closedness = Closedness::Closed;

    double w(std::size_t k, std::size_t l) const { return W[k * L + l]; }

    void validate() const {
        if (P < 1) throw Error(ErrorCode::DimensionMismatch, "safety set needs P >= 1");
        if (W.size() != K * L) throw Error(ErrorCode::DimensionMismatch, "W must be K x L");
        if (b.size() != K) throw Error(ErrorCode::DimensionMismatch, "b must have length K");
        if (a.size() != P || d.size() != P)
            throw Error(ErrorCode::DimensionMismatch, "a and d must have P entries");
        for (const auto& ap : a)
            if (ap.size() != L) throw Error(ErrorCode::DimensionMismatch, "a_p must have length L");
    }

    /// b - W x
    std::vector<double> direction(std::span<const double> x) const {
        std::vector<double> v(b);
        for (std::size_t k = 0; k < K; ++k) {
            double acc = 0.0;
            for (std::size_t l = 0; l < L; ++l) acc += w(k, l) * x[l];
            v[k] -= acc;
        }
        return v;
    }
};

enum class InstanceKind { Generic, Portfolio, Resource };

inline std::string_view to_string(InstanceKind k) {
    switch (k) {
        case InstanceKind::Generic: return "generic";
        case InstanceKind::Portfolio: return "portfolio";
        case InstanceKind::Resource: return "resource";
    }
    return "?";
}

inline InstanceKind parse_kind(std::string_view s) {
    if (s == "generic") return InstanceKind::Generic;
    if (s == "portfolio") return InstanceKind::Portfolio;
    if (s == "resource") return InstanceKind::Resource;
    throw Error(ErrorCode::ParseError, "unknown instance kind '" + std::string(s) + "'");
}

/// DR-CCP data: empirical scenarios, risk level, Wasserstein radius, the
/// domain box X, the cost vector and the safety set.
///
/// Scenarios are stored row-blocked: scenario i occupies P contiguous
/// subvectors of length K.
struct Instance {
    SafetySpec safety;
    std::size_t N = 0;
    std::vector<double> scenarios;  // N * P * K
    double epsilon = 0.1;
    double theta = 0.0;
    Norm norm = Norm::L2;
    std::vector<double> lower;  // L
    std::vector<double> upper;  // L
    std::vector<double> cost;   // L

    // Metadata carried through files; the structured generators fill these.
    InstanceKind kind = InstanceKind::Generic;
    std::uint64_t seed = 0;
    std::size_t resources = 0;       // D, resource planning only
    std::size_t customer_groups = 0;  // P of the application, resource planning only
    double target_return = 0.0;       // w, portfolio only

    std::size_t L() const { return safety.L; }
    std::size_t P() const { return safety.P; }
    std::size_t K() const { return safety.K; }
    std::size_t k() const { return guarded_floor(epsilon, N); }
    DualNormTag tag() const { return {norm}; }

    std::span<const double> xi(std::size_t i, std::size_t p) const {
        const std::size_t K = safety.K;
        return {scenarios.data() + (i * safety.P + p) * K, K};
    }

    void validate() const {
        safety.validate();
        if (N < 1) throw Error(ErrorCode::InvalidArgument, "need at least one scenario");
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
        if (!(theta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be >= 0");
        if (scenarios.size() != N * safety.P * safety.K)
            throw Error(ErrorCode::DimensionMismatch, "scenario storage must be N*P*K");
        if (lower.size() != L() || upper.size() != L() || cost.size() != L())
            throw Error(ErrorCode::DimensionMismatch, "bounds and cost must have length L");
        for (std::size_t l = 0; l < L(); ++l)
            if (lower[l] > upper[l]) throw Error(ErrorCode::InvalidArgument, "empty domain box");
        if (k() >= N) throw Error(ErrorCode::InvalidArgument, "floor(epsilon*N) must be < N");
    }

    /// Coefficient vector of x in scenario row (i,p): -W^T xi_p^i - a_p.
    std::vector<double> row_coeffs(std::size_t i, std::size_t p) const {
        const auto x = xi(i, p);
        std::vector<double> mu(L());
        for (std::size_t l = 0; l < L(); ++l) mu[l] = -safety.a[p][l];
        for (std::size_t kk = 0; kk < K(); ++kk) {
            const double v = x[kk];
            if (v == 0.0) continue;
            const double* wrow = safety.W.data() + kk * L();
            for (std::size_t l = 0; l < L(); ++l) mu[l] -= v * wrow[l];
        }
        return mu;
    }

    /// Constant of scenario row (i,p): b^T xi_p^i + d_p.
    double row_constant(std::size_t i, std::size_t p) const {
        const auto x = xi(i, p);
        double acc = safety.d[p];
        for (std::size_t kk = 0; kk < K(); ++kk) acc += safety.b[kk] * x[kk];
        return acc;
    }

    /// s_p(x, xi^i) = (-W^T xi_p^i - a_p)^T x + b^T xi_p^i + d_p
    double row_value(std::size_t i, std::size_t p, std::span<const double> x) const {
        const auto mu = row_coeffs(i, p);
        double acc = row_constant(i, p);
        for (std::size_t l = 0; l < L(); ++l) acc += mu[l] * x[l];
        return acc;
    }
};

/// Precomputed scenario rows; builders and oracles read these repeatedly.
struct ScenarioRows {
    std::size_t N = 0, P = 0, L = 0;
    std::vector<double> coeffs;     // (i*P + p)*L + l
    std::vector<double> constants;  // i*P + p

    explicit ScenarioRows(const Instance& inst) : N(inst.N), P(inst.P()), L(inst.L()) {
        coeffs.resize(N * P * L);
        constants.resize(N * P);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t p = 0; p < P; ++p) {
                const auto mu = inst.row_coeffs(i, p);
                std::copy(mu.begin(), mu.end(), coeffs.begin() + (i * P + p) * L);
                constants[i * P + p] = inst.row_constant(i, p);
            }
    }

    std::span<const double> mu(std::size_t i, std::size_t p) const {
        return {coeffs.data() + (i * P + p) * L, L};
    }
    double constant(std::size_t i, std::size_t p) const { return constants[i * P + p]; }
    double value(std::size_t i, std::size_t p, std::span<const double> x) const {
        const auto m = mu(i, p);
        double acc = constant(i, p);
        for (std::size_t l = 0; l < L; ++l) acc += m[l] * x[l];
        return acc;
    }
};

/// Distance from xi to the unsafe set R^K \ S(x):
///   max{0, min_p ((b - W x)^T xi_p + d_p - a_p^T x) / ||b - W x||_*}.
/// Throws DegenerateDirection when ||b - W x||_* <= 1e-10.
inline double eval_distance(std::span<const double> x, std::span<const double> xi,
                            const SafetySpec& spec, DualNormTag tag) {
    if (x.size() != spec.L || xi.size() != spec.P * spec.K)
        throw Error(ErrorCode::DimensionMismatch, "eval_distance: bad x or xi length");
    const auto v = spec.direction(x);
    const double denom = norm_value(v, tag.dual_norm());
    if (denom <= tol::degenerate_direction)
        throw Error(ErrorCode::DegenerateDirection, "b - A^T x vanishes");
    double best = kInf;
    for (std::size_t p = 0; p < spec.P; ++p) {
        double acc = spec.d[p];
        for (std::size_t l = 0; l < spec.L; ++l) acc -= spec.a[p][l] * x[l];
        for (std::size_t k = 0; k < spec.K; ++k) acc += v[k] * xi[p * spec.K + k];
        best = std::min(best, acc);
    }
    return std::max(0.0, best / denom);
}

/// Number of scenarios falling outside S(x); Open sets also count rows
/// that are exactly zero.
inline std::size_t saa_violation_count(std::span<const double> x, const Instance& inst) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < inst.N; ++i) {
        bool violated = false;
        for (std::size_t p = 0; p < inst.P() && !violated; ++p) {
            const double s = inst.row_value(i, p, x);
            violated = inst.safety.closedness == Closedness::Closed ? s < 0.0 : s <= 0.0;
        }
        if (violated) ++count;
    }
    return count;
}

/// One row of a safety set with its own coefficient matrix:
///   (b_p - W_p x)^T xi_p + d_p - a_p^T x >= 0, with xi_p in R^{K_p}.
struct DistinctRowBlock {
    std::size_t K = 0;
    std::vector<double> W;  // K x L
    std::vector<double> b;  // K
    std::vector<double> a;  // L
    double d = 0.0;
};

/// Lifts rows with distinct matrices into a single shared-matrix safety set
/// by stacking W_p vertically and placing each xi_p in its own block.
/// The lifted ambiguity set is larger, so solutions are more conservative.
inline SafetySpec lift_distinct_matrices(const std::vector<DistinctRowBlock>& blocks, std::size_t L,
                                         Closedness closedness = Closedness::Closed) {
    if (blocks.empty()) throw Error(ErrorCode::DimensionMismatch, "no rows to lift");
    SafetySpec out;
    out.L = L;
    out.P = blocks.size();
    out.closedness = closedness;
    for (const auto& blk : blocks) {
        if (blk.W.size() != blk.K * L || blk.b.size() != blk.K || blk.a.size() != L)
            throw Error(ErrorCode::DimensionMismatch, "inconsistent row block");
        out.K += blk.K;
    }
    out.W.reserve(out.K * L);
    for (const auto& blk : blocks) {
        out.W.insert(out.W.end(), blk.W.begin(), blk.W.end());
        out.b.insert(out.b.end(), blk.b.begin(), blk.b.end());
        out.a.push_back(blk.a);
        out.d.push_back(blk.d);
    }
    return out;
}

/// Embeds per-row subvectors xi_p (length K_p) into the lifted scenario
/// layout: P subvectors of length sum K_p, zero outside their own block.
inline std::vector<double> lift_scenario(const std::vector<std::vector<double>>& parts) {
    std::size_t total = 0;
    for (const auto& v : parts) total += v.size();
    std::vector<double> out(parts.size() * total, 0.0);
    std::size_t offset = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        std::copy(parts[p].begin(), parts[p].end(), out.begin() + p * total + offset);
        offset += parts[p].size();
    }
    return out;
}

}  // namespace drccp
