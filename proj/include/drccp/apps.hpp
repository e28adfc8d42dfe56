#pragma once

// Instance generators (portfolio, resource planning, random generic) and
// benchmark assembly: big-M rule, quantile modes and builder per application.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/formulation.hpp"
#include "drccp/instance.hpp"
#include "drccp/mixing.hpp"
#include "drccp/quantile.hpp"
#include "drccp/resource.hpp"

namespace drccp {

/// Seeded stream: mt19937_64 keyed by (seed, stream) through seed_seq, with
/// fixed-width conversions so draws do not depend on the standard library's
/// distribution implementations.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        gen_.seed(seq);
    }
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0,1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    long integer(long lo, long hi) {  // inclusive
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(gen_() % span);
    }

private:
    std::mt19937_64 gen_;
};

struct PortfolioConfig {
    std::size_t K = 50;
    double w = 1.0;
    long cost_lo = 1, cost_hi = 100;
    double yield_lo = 0.8, yield_hi = 1.5;
    std::size_t N = 100;
    double epsilon = 0.1;
    double theta = 0.05;
    Norm norm = Norm::L2;
    std::uint64_t seed = 1;
};

/// min c^T x s.t. the DR chance constraint on xi^T x > w, x >= 0.
/// Encoded with W = -I, b = 0, a = 0, d = -w and an open safety set.
inline Instance gen_portfolio(const PortfolioConfig& cfg) {
    if (!(cfg.yield_lo > 0.0) || cfg.yield_hi < cfg.yield_lo)
        throw Error(ErrorCode::NonpositiveYield, "yield range must be positive");
    Instance inst;
    inst.kind = InstanceKind::Portfolio;
    inst.seed = cfg.seed;
    inst.target_return = cfg.w;
    auto& S = inst.safety;
    S.K = S.L = cfg.K;
    S.P = 1;
    S.W.assign(cfg.K * cfg.K, 0.0);
    for (std::size_t k = 0; k < cfg.K; ++k) S.W[k * cfg.K + k] = -1.0;
    S.b.assign(cfg.K, 0.0);
    S.a = {std::vector<double>(cfg.K, 0.0)};
    S.d = {-cfg.w};
    S.closedness = Closedness::Open;
    inst.N = cfg.N;
    inst.epsilon = cfg.epsilon;
    inst.theta = cfg.theta;
    inst.norm = cfg.norm;
    inst.lower.assign(cfg.K, 0.0);
    inst.upper.assign(cfg.K, kInf);
    Stream cs(cfg.seed, 0);
    inst.cost.resize(cfg.K);
    for (auto& c : inst.cost) c = static_cast<double>(cs.integer(cfg.cost_lo, cfg.cost_hi));
    inst.scenarios.resize(cfg.N * cfg.K);
    for (std::size_t i = 0; i < cfg.N; ++i) {
        Stream s(cfg.seed, i + 1);
        for (std::size_t k = 0; k < cfg.K; ++k) inst.scenarios[i * cfg.K + k] = s.uniform(cfg.yield_lo, cfg.yield_hi);
    }
    inst.validate();
    return inst;
}

/// Distribution defaults are stand-ins: rho ~ U[0.7, 1], mu ~ U(0, 1] with a
/// fixed fraction of structural zeros, lambda ~ U[5, 15], costs ~ U[1, 2].
struct ResourceConfig {
    std::size_t D = 10, P = 20;
    std::size_t N = 100;
    double epsilon = 0.1;
    double theta = 0.001;
    Norm norm = Norm::L2;
    std::uint64_t seed = 1;
    double rho_lo = 0.7, rho_hi = 1.0;
    double mu_zero_fraction = 0.2;
    double lambda_lo = 5.0, lambda_hi = 15.0;
    double cost_lo = 1.0, cost_hi = 2.0;
};

inline Instance gen_resource(const ResourceConfig& cfg) {
    if (cfg.D < 1 || cfg.P < 1) throw Error(ErrorCode::InvalidArgument, "need D >= 1 and P >= 1");
    if (!(cfg.rho_lo > 0.0) || cfg.rho_hi > 1.0 || cfg.rho_hi < cfg.rho_lo)
        throw Error(ErrorCode::InvalidArgument, "yields must lie in (0, 1]");
    const ResourceLayout lay{cfg.D, cfg.P};
    const std::size_t L = lay.L(), K = lay.K(), R = lay.rows();
    Instance inst;
    inst.kind = InstanceKind::Resource;
    inst.seed = cfg.seed;
    inst.resources = cfg.D;
    inst.customer_groups = cfg.P;
    auto& S = inst.safety;
    S.K = K;
    S.L = L;
    S.P = R;
    S.W.assign(K * L, 0.0);
    for (std::size_t l = 0; l < L; ++l) S.W[l * L + l] = -1.0;
    S.b.assign(K, 0.0);
    S.b[L] = -1.0;
    S.a.assign(R, std::vector<double>(L, 0.0));
    for (std::size_t d = 0; d < cfg.D; ++d)
        for (std::size_t p = 0; p < cfg.P; ++p) S.a[lay.assignment_row(d)][lay.y(d, p)] = 1.0;
    S.d.assign(R, 0.0);
    S.closedness = Closedness::Closed;
    inst.N = cfg.N;
    inst.epsilon = cfg.epsilon;
    inst.theta = cfg.theta;
    inst.norm = cfg.norm;
    inst.lower.assign(L, 0.0);
    inst.upper.assign(L, kInf);
    inst.cost.assign(L, 0.0);

    // Structure stream: costs and the zero pattern of mu (shared by all scenarios).
    Stream st(cfg.seed, 0);
    for (std::size_t d = 0; d < cfg.D; ++d) inst.cost[lay.x(d)] = st.uniform(cfg.cost_lo, cfg.cost_hi);
    std::vector<char> nonzero(cfg.D * cfg.P, 1);
    for (std::size_t p = 0; p < cfg.P; ++p) {
        bool any = false;
        for (std::size_t d = 0; d < cfg.D; ++d) {
            nonzero[d * cfg.P + p] = st.uniform() >= cfg.mu_zero_fraction;
            any = any || nonzero[d * cfg.P + p];
        }
        if (!any) nonzero[static_cast<std::size_t>(st.integer(0, static_cast<long>(cfg.D) - 1)) * cfg.P + p] = 1;
    }

    inst.scenarios.assign(cfg.N * R * K, 0.0);
    for (std::size_t i = 0; i < cfg.N; ++i) {
        Stream s(cfg.seed, i + 1);
        auto block = [&](std::size_t row) { return inst.scenarios.data() + (i * R + row) * K; };
        for (std::size_t d = 0; d < cfg.D; ++d) block(lay.assignment_row(d))[lay.x(d)] = s.uniform(cfg.rho_lo, cfg.rho_hi);
        for (std::size_t p = 0; p < cfg.P; ++p) {
            double* blk = block(lay.demand_row(p));
            for (std::size_t d = 0; d < cfg.D; ++d)
                if (nonzero[d * cfg.P + p]) blk[lay.y(d, p)] = 1.0 - s.uniform();  // (0, 1]
            blk[L] = s.uniform(cfg.lambda_lo, cfg.lambda_hi);
        }
    }
    inst.validate();
    return inst;
}

/// Random instance with shared W, box domain [-1, 1]^L and a closed safety set.
struct RandomConfig {
    std::size_t N = 8, L = 2, P = 1, K = 2;
    double epsilon = 0.25;
    double theta = 0.05;
    Norm norm = Norm::L1;
    std::uint64_t seed = 1;
    Closedness closedness = Closedness::Closed;
    double box = 1.0;
};

inline Instance gen_random(const RandomConfig& cfg) {
    Instance inst;
    inst.kind = InstanceKind::Generic;
    inst.seed = cfg.seed;
    auto& S = inst.safety;
    S.K = cfg.K;
    S.L = cfg.L;
    S.P = cfg.P;
    S.closedness = cfg.closedness;
    Stream st(cfg.seed, 0);
    S.W.resize(cfg.K * cfg.L);
    for (auto& v : S.W) v = st.uniform(-1.0, 1.0);
    S.b.resize(cfg.K);
    for (auto& v : S.b) v = st.uniform(-1.0, 1.0);
    S.a.assign(cfg.P, std::vector<double>(cfg.L));
    for (auto& ap : S.a)
        for (auto& v : ap) v = st.uniform(-1.0, 1.0);
    S.d.resize(cfg.P);
    for (auto& v : S.d) v = st.uniform(0.5, 2.0);
    inst.N = cfg.N;
    inst.epsilon = cfg.epsilon;
    inst.theta = cfg.theta;
    inst.norm = cfg.norm;
    inst.lower.assign(cfg.L, -cfg.box);
    inst.upper.assign(cfg.L, cfg.box);
    inst.cost.resize(cfg.L);
    for (auto& v : inst.cost) v = st.uniform(-1.0, 1.0);
    inst.scenarios.resize(cfg.N * cfg.P * cfg.K);
    for (std::size_t i = 0; i < cfg.N; ++i) {
        Stream s(cfg.seed, i + 1);
        for (std::size_t j = 0; j < cfg.P * cfg.K; ++j) inst.scenarios[i * cfg.P * cfg.K + j] = s.uniform(-1.0, 1.0);
    }
    inst.validate();
    return inst;
}

struct Benchmark {
    Formulation formulation = Formulation::Basic;
    MipModel model;
    QuantileTable quantiles;
    BigMVector bigM;
    std::vector<SortedBaseProfile> profiles;  // Mixing only
};

/// Quantile configuration per application: closed form for covering rows,
/// the yield rule for resource assignment rows, exact LPs otherwise.
inline QuantileConfig default_quantile_config(const Instance& inst) {
    QuantileConfig cfg;
    switch (inst.kind) {
        case InstanceKind::Portfolio: cfg.mode = QuantileMode::CoveringClosedForm; break;
        case InstanceKind::Resource: {
            const auto lay = ResourceLayout::of(inst);
            cfg.row_modes.assign(lay.rows(), QuantileMode::CoveringClosedForm);
            for (std::size_t d = 0; d < lay.D; ++d) cfg.row_modes[lay.assignment_row(d)] = QuantileMode::ResourceRule;
            break;
        }
        case InstanceKind::Generic: cfg.mode = QuantileMode::ExactIndividual; break;
    }
    return cfg;
}

inline BigMVector default_bigM(const Instance& inst) {
    switch (inst.kind) {
        case InstanceKind::Portfolio: return portfolio_bigM(inst);
        case InstanceKind::Resource: return resource_bigM(inst);
        case InstanceKind::Generic: return compute_bigM_domain(inst);
    }
    return compute_bigM_domain(inst);
}

/// Wires big-M rule, quantile table and builder. The portfolio safety set is
/// open and x = 0 makes b = A^T x, so its Basic model carries the knapsack
/// row as in the application's published formulation.
inline Benchmark assemble_benchmark(const Instance& inst, Formulation f, QuantileConfig qcfg = {},
                                    bool default_modes = true) {
    Benchmark out;
    out.formulation = f;
    out.bigM = default_bigM(inst);
    if (default_modes) {
        const auto d = default_quantile_config(inst);
        qcfg.mode = d.mode;
        qcfg.row_modes = d.row_modes;
    }
    switch (f) {
        case Formulation::Basic:
            out.model = inst.kind == InstanceKind::Portfolio ? build_knapsack(inst, out.bigM) : build_basic(inst, out.bigM);
            break;
        case Formulation::Knapsack: out.model = build_knapsack(inst, out.bigM); break;
        case Formulation::Improved:
        case Formulation::Mixing:
            out.quantiles = build_quantile_table(inst, qcfg);
            out.model = build_improved(inst, out.bigM, out.quantiles);
            if (f == Formulation::Mixing) out.profiles = probe_profiles(inst, out.quantiles);
            break;
    }
    return out;
}

inline Benchmark assemble_benchmark(const PortfolioConfig& cfg, Formulation f) {
    return assemble_benchmark(gen_portfolio(cfg), f);
}

inline Benchmark assemble_benchmark(const ResourceConfig& cfg, Formulation f) {
    return assemble_benchmark(gen_resource(cfg), f);
}

/// Solves an assembled benchmark; Mixing separates cuts at the root.
inline SolveReport solve_benchmark(const Benchmark& b, const MipLimits& limits = {}) {
    if (b.formulation != Formulation::Mixing) return solve_mip(b.model, {}, limits);
    auto pool = std::make_shared<CutPool>();
    return solve_mip(b.model, mixing_cut_source(b.model, b.profiles, pool), limits);
}

}  // namespace drccp
