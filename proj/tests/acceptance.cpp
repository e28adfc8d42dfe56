// Acceptance run: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace drccp;
using testsupport::rel_err;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool same_value(double a, double b, double tol) {
    if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
    return rel_err(a, b) <= tol;
}

// a >= b up to a relative round-off slack; infinities compare exactly
bool at_least(double a, double b, double tol) {
    if (!std::isfinite(a) || !std::isfinite(b)) return a >= b;
    return a >= b - tol * std::max(1.0, std::abs(b));
}

double mip_value(const SolveReport& r) {
    if (r.status == MipStatus::Infeasible) return kInf;
    return r.solved() ? r.ub : kNaN;
}

// ---------------------------------------------------------------- 1

Outcome formulation_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::size_t agree = 0, feasible = 0, total = 0;
    double worst = 0.0;
    std::string first_bad;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        RandomConfig cfg;
        cfg.seed = seed;
        cfg.N = 4 + rng() % 9;   // 4..12
        cfg.L = 1 + rng() % 4;   // 1..4
        cfg.P = 1 + rng() % 3;   // 1..3
        cfg.K = 1 + rng() % 3;
        cfg.epsilon = std::array{0.1, 0.2, 0.3}[rng() % 3];
        cfg.theta = std::array{0.0, 0.01, 0.05}[rng() % 3];
        cfg.norm = rng() % 2 ? Norm::L1 : Norm::Linf;
        const auto inst = gen_random(cfg);
        const auto ref = oracle::enumerate_optimum(inst, Formulation::Knapsack);
        ++total;
        feasible += ref.feasible();
        bool ok = true;
        for (auto f : {Formulation::Knapsack, Formulation::Improved, Formulation::Mixing}) {
            const double v = mip_value(solve_benchmark(assemble_benchmark(inst, f)));
            if (std::isfinite(v) && std::isfinite(ref.objective)) worst = std::max(worst, rel_err(v, ref.objective));
            if (!same_value(v, ref.objective, 1e-6)) {
                ok = false;
                if (first_bad.empty())
                    first_bad = " first_mismatch=seed" + std::to_string(seed) + ":" + std::string(to_string(f));
            }
        }
        agree += ok;
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "instances=" << total << " agree=" << agree << " feasible=" << feasible << " worst_rel=" << worst
      << " time=" << secs << "s" << first_bad;
    return {agree == total && secs < 300.0, d.str()};
}

// ---------------------------------------------------------------- 2

// K = L, W = I: x = b makes the safety set independent of xi.
Instance crafted_degenerate(std::uint64_t seed, std::vector<double>& witness, std::vector<double>& control) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), gap(0.05, 0.5);
    Instance inst;
    auto& S = inst.safety;
    const std::size_t L = 1 + seed % 3;
    S.K = S.L = L;
    S.P = 1 + seed % 2;
    S.W.assign(L * L, 0.0);
    for (std::size_t l = 0; l < L; ++l) S.W[l * L + l] = 1.0;
    S.b.resize(L);
    for (auto& v : S.b) v = 0.8 * u(rng);
    S.a.assign(S.P, std::vector<double>(L));
    for (auto& ap : S.a)
        for (auto& v : ap) v = u(rng);
    S.closedness = Closedness::Closed;
    witness = S.b;
    // witness: row 0 violated at x = b; control: same geometry with every row slack
    auto ax = [&](std::size_t p) {
        double s = 0.0;
        for (std::size_t l = 0; l < L; ++l) s += S.a[p][l] * witness[l];
        return s;
    };
    S.d.resize(S.P);
    S.d[0] = ax(0) - gap(rng);
    for (std::size_t p = 1; p < S.P; ++p) S.d[p] = ax(p) + gap(rng);
    inst.N = 6;
    inst.epsilon = 0.34;
    inst.theta = 0.02 + 0.01 * static_cast<double>(seed % 4);
    inst.norm = seed % 2 ? Norm::L1 : Norm::Linf;
    inst.lower.assign(L, -1.0);
    inst.upper.assign(L, 1.0);
    inst.cost.resize(L);
    for (auto& v : inst.cost) v = u(rng);
    inst.scenarios.resize(inst.N * S.P * S.K);
    for (auto& v : inst.scenarios) v = u(rng);
    control = witness;
    inst.validate();
    return inst;
}

Outcome degenerate_witness() {
    std::size_t witnesses = 0, false_pos = 0, checked = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::vector<double> w, c;
        auto inst = crafted_degenerate(seed, w, c);
        const bool basic = oracle::point_feasible(inst, Formulation::Basic, w);
        const auto cls = oracle::classify_extraneous(w, inst);
        const bool knap = oracle::point_feasible(inst, Formulation::Knapsack, w);
        if (basic && cls == oracle::Extraneous::ClosedExtraneous && !knap) ++witnesses;
        // control: lift d_0 above a_0^T x so the degenerate point is safe
        auto ctrl = inst;
        double a0x = 0.0;
        for (std::size_t l = 0; l < inst.L(); ++l) a0x += inst.safety.a[0][l] * c[l];
        ctrl.safety.d[0] = a0x + 0.1;
        for (const auto& [in, x] : {std::pair{&inst, w}, std::pair{&ctrl, c}}) {
            const auto k = oracle::classify_extraneous(x, *in);
            ++checked;
            if (k == oracle::Extraneous::ClosedExtraneous &&
                (oracle::membership_drccp(x, *in) || oracle::point_feasible(*in, Formulation::Knapsack, x)))
                ++false_pos;
            if (k != oracle::Extraneous::ClosedExtraneous && in == &ctrl &&
                !oracle::point_feasible(*in, Formulation::Knapsack, x))
                ++false_pos;
        }
    }
    std::ostringstream d;
    d << "instances=20 witnesses=" << witnesses << " points_checked=" << checked << " false_positives=" << false_pos;
    return {witnesses == 20 && false_pos == 0, d.str()};
}

// ---------------------------------------------------------------- 3

// One scenario subproblem re-solved on its own; same row coefficients as the
// table so the selected order statistic can be compared bit for bit.
double brute_subproblem(const Instance& inst, std::size_t i, std::size_t p, std::size_t j) {
    lp::Problem prob;
    const auto mu = inst.row_coeffs(i, p);
    for (std::size_t l = 0; l < inst.L(); ++l) prob.add_var(inst.lower[l], inst.upper[l], mu[l]);
    const auto cj = inst.row_coeffs(j, p);
    Terms t;
    for (std::size_t l = 0; l < inst.L(); ++l)
        if (cj[l] != 0.0) t.emplace_back(l, cj[l]);
    prob.add_row(std::move(t), Sense::GE, -inst.row_constant(j, p));
    const auto r = lp::solve(prob);
    if (r.status == lp::Status::Optimal) return r.objective;
    return r.status == lp::Status::Unbounded ? -kInf : kInf;
}

// Same subproblem from the raw data by vertex enumeration.
std::optional<double> vertex_subproblem(const Instance& inst, std::size_t i, std::size_t p, std::size_t j) {
    testsupport::DenseLp d;
    d.cost = testsupport::raw_row_coeffs(inst, i, p);
    d.lower = inst.lower;
    d.upper = inst.upper;
    d.A.push_back(testsupport::raw_row_coeffs(inst, j, p));
    d.rhs.push_back(-testsupport::raw_row_value(inst, j, p, std::vector<double>(inst.L(), 0.0)));
    return testsupport::vertex_enumeration(d);
}

Outcome quantile_correctness() {
    std::size_t pairs = 0, exact = 0, vertex_ok = 0, dominance = 0, dom_total = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto inst = testsupport::random_instance(seed, 4 + seed % 7, 1 + seed % 3, 1 + seed % 3, 1 + seed % 3,
                                                       0.1 + 0.05 * static_cast<double>(seed % 4), 0.01, Norm::L1);
        QuantileConfig ind;
        ind.mode = QuantileMode::ExactIndividual;
        QuantileConfig joint;
        joint.mode = QuantileMode::ExactJoint;
        const auto qi = build_quantile_table(inst, ind);
        const auto qj = build_quantile_table(inst, joint);
        for (std::size_t i = 0; i < inst.N; ++i)
            for (std::size_t p = 0; p < inst.P(); ++p) {
                std::vector<double> h(inst.N), hv(inst.N);
                for (std::size_t j = 0; j < inst.N; ++j) {
                    h[j] = brute_subproblem(inst, i, p, j);
                    const auto v = vertex_subproblem(inst, i, p, j);
                    hv[j] = v ? *v : kInf;
                }
                std::sort(h.begin(), h.end(), std::greater<>());
                std::sort(hv.begin(), hv.end(), std::greater<>());
                const double want = h[inst.k()];
                ++pairs;
                exact += qi.at(i, p) == want;
                vertex_ok += same_value(qi.at(i, p), hv[inst.k()], 1e-9);
                ++dom_total;
                // equal optima reached through different bases differ in the last bits
                dominance += at_least(qj.at(i, p), qi.at(i, p), 1e-12);
            }
    }
    std::ostringstream d;
    d << "pairs=" << pairs << " exact=" << exact << " vertex_agree=" << vertex_ok << " joint>=individual=" << dominance
      << "/" << dom_total;
    return {exact == pairs && vertex_ok == pairs && dominance == dom_total, d.str()};
}

// ---------------------------------------------------------------- 4

Outcome covering_closed_form() {
    std::mt19937_64 rng(77);
    std::size_t orthant_eq = 0, orthant_n = 0, box_le = 0, box_n = 0;
    double worst = 0.0;
    for (std::size_t trial = 0; trial < 1000; ++trial) {
        const std::size_t K = 2 + rng() % 5, N = 2 + rng() % 6;
        auto inst = testsupport::small_portfolio(1000 + trial, K, N, 0.0, 0.3);
        const std::size_t i = rng() % N, j = rng() % N;
        const double bound = covering_packing_bound(i, 0, j, inst);
        if (trial % 2 == 0) {
            // exactly the nonnegative orthant, strictly positive yields
            const double lp = subproblem_value(inst.row_coeffs(i, 0), j, inst, Relaxation::IndividualRow, 0);
            ++orthant_n;
            worst = std::max(worst, rel_err(bound, lp));
            orthant_eq += rel_err(bound, lp) <= 1e-9;
        } else {
            for (auto& u : inst.upper) u = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
            const auto lp = vertex_subproblem(inst, i, 0, j);
            ++box_n;
            const double v = lp ? *lp : kInf;
            box_le += bound <= v + 1e-9 * std::max(1.0, std::abs(v));
        }
    }
    std::ostringstream d;
    d << "pairs=1000 orthant_equal=" << orthant_eq << "/" << orthant_n << " worst_rel=" << worst
      << " box_bound<=lp=" << box_le << "/" << box_n;
    return {orthant_eq == orthant_n && box_le == box_n, d.str()};
}

// ---------------------------------------------------------------- 5

Outcome separation_exactness() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t agree = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t N = 2 + rng() % 13;  // 2..14
        const std::size_t k = rng() % std::min<std::size_t>(7, N);
        std::vector<double> h(N), z(N);
        for (auto& v : h) v = t % 3 == 0 ? std::round(6.0 * u(rng)) : 10.0 * u(rng) - 5.0;
        for (auto& v : z) v = u(rng) < 0.3 ? 0.0 : (u(rng) < 0.2 ? 1.0 : u(rng));
        const auto prof = SortedBaseProfile::make({1.0}, h, k);
        const std::vector<double> x{prof.threshold + 3.0 * u(rng) - 0.5};
        double best = -kInf;
        for (const auto& c : enumerate_all_cuts(prof)) best = std::max(best, c.violation(x, z));
        const auto cut = separate(prof, x, z, 1e-9);
        const bool ref_exists = best > 1e-9;
        bool ok = cut.has_value() == ref_exists;
        if (ok && cut) ok = std::abs(cut->violation(x, z) - best) <= 1e-9;
        agree += ok;
    }
    // operation counts normalised by N log2 N
    std::vector<double> ratio;
    for (std::size_t N : {1000u, 10000u, 100000u}) {
        std::vector<double> h(N), z(N);
        for (auto& v : h) v = u(rng);
        for (auto& v : z) v = u(rng);
        SeparationStats st;
        const auto prof = SortedBaseProfile::make({1.0}, h, N / 10, &st);
        separate(prof, std::vector<double>{0.0}, z, 1e-9, &st);
        ratio.push_back(static_cast<double>(st.total()) / (static_cast<double>(N) * std::log2(static_cast<double>(N))));
    }
    const double band = *std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end());
    std::ostringstream d;
    d << "profiles=500 agree=" << agree << " ops/(NlogN)=" << ratio[0] << "," << ratio[1] << "," << ratio[2]
      << " band=" << band;
    return {agree == 500 && band <= 2.0, d.str()};
}

// ---------------------------------------------------------------- 6

Outcome cut_validity() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t checks = 0, cut_off = 0, points = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        auto inst = testsupport::random_instance(seed, 6 + seed % 4, 2 + seed % 2, 1 + seed % 2, 2,
                                                 0.25, 0.01 * static_cast<double>(seed % 6), Norm::L1);
        const auto qt = build_quantile_table(inst, {});
        const auto m = build_knapsack(inst, compute_bigM_domain(inst));
        const auto profiles = probe_profiles(inst, qt);
        std::vector<MixingCut> cuts;
        for (const auto& prof : profiles) {
            const auto all = enumerate_all_cuts(prof);
            cuts.insert(cuts.end(), all.begin(), all.end());
            for (std::size_t pos = 0; pos <= prof.k; ++pos) {
                const double v = prof.h_sorted[pos].second;
                if (pos < prof.k && v <= prof.threshold) continue;
                cuts.push_back(base_inequality(prof, prof.h_sorted[pos].first));
            }
        }
        // cuts the solver generated at its own root
        const auto b = assemble_benchmark(inst, Formulation::Mixing);
        const auto rep = solve_benchmark(b);
        for (int d = 0; d < 6; ++d) {
            auto probe = inst;
            for (auto& c : probe.cost) c = u(rng);
            const auto r = oracle::enumerate_optimum(probe, Formulation::Knapsack);
            if (!r.feasible()) continue;
            ++points;
            const std::vector<double> z(r.z.begin(), r.z.end());
            for (const auto& c : cuts) {
                ++checks;
                cut_off += c.violation(r.x, z) > 1e-7;
            }
            std::vector<double> v(m.vars.size(), 0.0);
            for (std::size_t l = 0; l < inst.L(); ++l) v[m.x(l)] = r.x[l];
            for (std::size_t i = 0; i < inst.N; ++i) v[m.z(i)] = z[i];
            for (std::size_t i = 0; i < inst.N; ++i)
                for (std::size_t p = 0; p < inst.P(); ++p)
                    for (const auto& row : strengthened_base_pair(i, p, qt, inst, m)) {
                        ++checks;
                        cut_off += MipModel::row_violation(row, m.row_activity(row, v)) > 1e-7;
                    }
            std::vector<double> vb(b.model.vars.size(), 0.0);
            for (std::size_t l = 0; l < inst.L(); ++l) vb[b.model.x(l)] = r.x[l];
            for (std::size_t i = 0; i < inst.N; ++i) vb[b.model.z(i)] = z[i];
            for (const auto& row : rep.root_cuts) {
                bool xz_only = true;
                for (const auto& [j, c] : row.terms)
                    xz_only = xz_only && ((j >= b.model.x_begin && j < b.model.x_begin + inst.L()) ||
                                          (j >= b.model.z_begin && j < b.model.z_begin + inst.N));
                if (!xz_only) continue;
                ++checks;
                cut_off += MipModel::row_violation(row, b.model.row_activity(row, vb)) > 1e-7;
            }
        }
    }
    std::ostringstream d;
    d << "feasible_points=" << points << " inequality_checks=" << checks << " cut_off=" << cut_off;
    return {cut_off == 0 && checks > 0, d.str()};
}

// ---------------------------------------------------------------- 7

Outcome portfolio_constant() {
    std::size_t ones = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        PortfolioConfig cfg;  // w = 1, yields in [0.8, 1.5]
        cfg.N = 100;
        cfg.seed = seed;
        const auto M = portfolio_bigM(gen_portfolio(cfg));
        for (double v : M.values) {
            ++total;
            ones += v == 1.0;
        }
    }
    std::ostringstream d;
    d << "entries=" << total << " equal_to_one=" << ones;
    return {ones == total, d.str()};
}

// ---------------------------------------------------------------- 8

Outcome radius_collapse_and_monotone() {
    std::size_t saa_eq = 0, saa_n = 0, mono = 0;
    double worst = 0.0;
    std::vector<double> grid{0.0};
    for (int s = 1; s <= 10; ++s) grid.push_back(0.001 * s);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto inst = testsupport::random_instance(seed, 6 + seed % 5, 2, 1 + seed % 2, 2, 0.2 + 0.05 * (seed % 3), 0.0,
                                                 seed % 2 ? Norm::L1 : Norm::Linf);
        const double saa = testsupport::saa_optimum(inst);
        const auto dr = oracle::enumerate_optimum(inst, Formulation::Knapsack);
        const auto mip = solve_benchmark(assemble_benchmark(inst, Formulation::Improved));
        ++saa_n;
        if (std::isfinite(saa)) worst = std::max(worst, rel_err(dr.objective, saa));
        saa_eq += same_value(dr.objective, saa, 1e-9) && same_value(mip_value(mip), saa, 1e-6);
        bool ok = true;
        double last = -kInf;
        for (double th : grid) {
            inst.theta = th;
            const double v = oracle::enumerate_optimum(inst, Formulation::Knapsack).objective;
            ok = ok && at_least(v, last, 1e-9);
            last = v;
        }
        mono += ok;
    }
    std::ostringstream d;
    d << "instances=50 zero_radius_equals_saa=" << saa_eq << "/" << saa_n << " worst_rel=" << worst
      << " monotone=" << mono << "/50";
    return {saa_eq == saa_n && mono == 50, d.str()};
}

// ---------------------------------------------------------------- 9

Outcome directional_strength() {
    std::size_t dominates = 0, strict = 0;
    std::vector<double> cuts_small, cuts_large;
    MipLimits root_only;
    root_only.node_limit = 0;
    MipLimits lim;
    lim.time_limit = 30.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto inst = testsupport::small_portfolio(seed, 10, 20, 0.01);
        const auto basic = solve_mip(assemble_benchmark(inst, Formulation::Basic).model, {}, root_only);
        const auto imp = solve_mip(assemble_benchmark(inst, Formulation::Improved).model, {}, root_only);
        const double scale = std::max(1.0, std::abs(basic.root_bound));
        dominates += imp.root_bound >= basic.root_bound - 1e-7 * scale;
        strict += imp.root_bound > basic.root_bound + 1e-7 * scale;
        for (double th : {0.001, 0.1}) {
            const auto r = solve_benchmark(assemble_benchmark(testsupport::small_portfolio(seed, 10, 20, th), Formulation::Mixing), lim);
            (th < 0.01 ? cuts_small : cuts_large).push_back(static_cast<double>(r.cuts));
        }
    }
    const double ms = median(cuts_small), ml = median(cuts_large);
    std::ostringstream d;
    d << "instances=50 improved>=basic=" << dominates << " strictly=" << strict << " median_cuts(0.001)=" << ms
      << " median_cuts(0.1)=" << ml;
    return {dominates == 50 && strict >= 25 && ms > 0.0 && ms >= 5.0 * ml, d.str()};
}

// ---------------------------------------------------------------- 10

// The computed M is valid when some optimum lies inside the box
// |s_p(x, xi^i)| <= M^i, i.e. restricting to the box keeps the optimal value.
struct BigMTally {
    std::size_t solved = 0, violated = 0;
    std::map<double, std::pair<std::size_t, std::size_t>> by_theta;  // violated, solved
};

void check_bigM(const Instance& inst, BigMTally& tally) {
    const auto ref = oracle::enumerate_optimum(inst, Formulation::Knapsack);
    if (!ref.feasible()) return;
    ++tally.solved;
    auto& cell = tally.by_theta[inst.theta];
    ++cell.second;
    const auto M = default_bigM(inst);
    oracle::EnumerationOptions opt;
    opt.bigM_box = &M;
    const auto boxed = oracle::enumerate_optimum(inst, Formulation::Knapsack, opt);
    if (same_value(boxed.objective, ref.objective, 1e-6)) return;
    ++tally.violated;
    ++cell.first;
}

Outcome bigM_validity() {
    BigMTally gen, port, res;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        check_bigM(testsupport::random_instance(seed, 8, 2, 1 + seed % 3, 2, 0.25, 0.01 * (seed % 5), Norm::L1), gen);
    for (double th : {0.0, 0.01, 0.05, 0.1})
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
            check_bigM(testsupport::small_portfolio(seed, 5, 12, th), port);
    for (double th : {0.0, 0.0001, 0.001, 0.005})
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ResourceConfig cfg;
            cfg.D = 2;
            cfg.P = 2;
            cfg.N = 8;
            cfg.epsilon = 0.25;
            cfg.theta = th;
            cfg.seed = seed;
            check_bigM(gen_resource(cfg), res);
        }
    std::ostringstream d;
    auto put = [&d](const char* name, const BigMTally& t) {
        d << ' ' << name << "=" << t.violated << "/" << t.solved << " violated";
        if (!t.violated) return;
        d << " (by theta";
        for (const auto& [th, c] : t.by_theta) d << ' ' << th << ":" << c.first << "/" << c.second;
        d << ")";
    };
    put("generic", gen);
    put("portfolio", port);
    put("resource", res);
    return {gen.violated + port.violated + res.violated == 0, d.str().substr(1)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"formulation-equivalence", formulation_equivalence},
        {"degenerate-witness", degenerate_witness},
        {"quantile-correctness", quantile_correctness},
        {"covering-closed-form", covering_closed_form},
        {"separation-exactness", separation_exactness},
        {"cut-validity", cut_validity},
        {"portfolio-bigM-constant", portfolio_constant},
        {"zero-radius-and-monotone", radius_collapse_and_monotone},
        {"directional-strength", directional_strength},
        {"bigM-validity", bigM_validity},
    };
    int failures = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[c].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c + 1 << ' ' << criteria[c].first << ": " << o.detail << " ["
                  << seconds_since(t0) << "s]" << std::endl;
    }
    return failures ? 1 : 0;
}
