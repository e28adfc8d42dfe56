#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace drccp;

namespace {

MipModel bound_model() {
    MipModel m;
    const auto x = m.add_var("x", VarKind::Continuous, -kInf, kInf, 1.0);
    m.add_row({{x, 1.0}}, Sense::GE, 3.0, RowFamily::Cut, "lb");
    return m;
}

// min t  s.t.  eps t >= theta ||x||_2  with x fixed.
MipModel cone_model(const std::vector<double>& x, double eps, double theta) {
    MipModel m;
    std::vector<std::size_t> xs;
    for (std::size_t l = 0; l < x.size(); ++l) xs.push_back(m.add_var("x" + std::to_string(l), VarKind::Continuous, x[l], x[l]));
    const auto nrm = m.add_var("nrm", VarKind::Continuous, 0.0, kInf);
    const auto t = m.add_var("t", VarKind::Continuous, 0.0, kInf, 1.0);
    ConeRow cone;
    cone.bound_var = nrm;
    cone.norm = Norm::L2;
    for (auto j : xs) cone.entries.push_back(AffineExpr{{{j, 1.0}}, 0.0});
    m.cones.push_back(cone);
    m.add_row({{t, eps}, {nrm, -theta}}, Sense::GE, 0.0, RowFamily::Conic, "conic");
    return m;
}

std::vector<std::pair<std::string, double>> parse_kv(const std::string& line) {
    std::vector<std::pair<std::string, double>> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "event") continue;
        out.emplace_back(key, io::parse_double(val));
    }
    return out;
}

}  // namespace

TEST(Solver, LpLowerBound) {
    const auto sol = solve_lp(bound_model());
    ASSERT_EQ(sol.status, lp::Status::Optimal);
    EXPECT_NEAR(sol.objective, 3.0, 1e-12);
}

TEST(Solver, LpMatchesVertexEnumeration) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> c(-4, 4);
    for (int t = 0; t < 100; ++t) {
        MipModel m;
        testsupport::DenseLp d;
        for (int j = 0; j < 2; ++j) {
            d.cost.push_back(c(rng));
            d.lower.push_back(-2.0);
            d.upper.push_back(3.0);
            m.add_var("v", VarKind::Continuous, -2.0, 3.0, d.cost.back());
        }
        for (int r = 0; r < 3; ++r) {
            const double a = c(rng), b = c(rng), rhs = c(rng);
            d.A.push_back({a, b});
            d.rhs.push_back(rhs);
            m.add_row({{0, a}, {1, b}}, Sense::GE, rhs, RowFamily::Cut, "r");
        }
        const auto ref = testsupport::vertex_enumeration(d);
        const auto sol = solve_lp(m);
        if (!ref) {
            EXPECT_EQ(sol.status, lp::Status::Infeasible);
            continue;
        }
        ASSERT_EQ(sol.status, lp::Status::Optimal);
        EXPECT_NEAR(sol.objective, *ref, 1e-9);
    }
}

TEST(Solver, ConeRefinementConverges) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x(1 + t % 5);
        for (auto& v : x) v = u(rng);
        const double eps = 0.1, theta = 0.3;
        const auto sol = solve_lp(cone_model(x, eps, theta));
        ASSERT_EQ(sol.status, lp::Status::Optimal);
        const double want = theta * norm_value(x, Norm::L2) / eps;
        EXPECT_LE(std::abs(sol.objective - want), 1e-6 * std::max(1.0, want));
    }
}

TEST(Solver, SingleBinaryNodeCount) {
    const auto inst = testsupport::random_instance(3, 1, 2, 1, 2, 0.5, 0.05, Norm::L1);
    const auto rep = solve_mip(build_basic(inst, compute_bigM_domain(inst)));
    EXPECT_LE(rep.nodes + 1, 3);
}

TEST(Solver, MipMatchesOracle) {
    int n = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = testsupport::random_instance(seed, 8, 3, 2, 2, 0.25, 0.03, seed % 2 ? Norm::L1 : Norm::Linf);
        const auto ref = oracle::enumerate_optimum(inst, Formulation::Improved);
        const auto b = assemble_benchmark(inst, Formulation::Improved);
        const auto rep = solve_mip(b.model);
        if (!ref.feasible()) {
            EXPECT_EQ(rep.status, MipStatus::Infeasible);
            continue;
        }
        ++n;
        ASSERT_EQ(rep.status, MipStatus::Optimal);
        EXPECT_LT(testsupport::rel_err(rep.ub, ref.objective), 1e-6) << seed;
        EXPECT_GE(rep.ub, rep.lb - 1e-6);
    }
    EXPECT_GE(n, 7);
}

TEST(Solver, L2InstancesMatchOracle) {
    for (std::uint64_t seed = 2; seed <= 4; ++seed) {
        const auto inst = testsupport::random_instance(seed, 6, 2, 1, 2, 0.34, 0.04, Norm::L2);
        const auto ref = oracle::enumerate_optimum(inst, Formulation::Knapsack);
        if (!ref.feasible()) continue;
        const auto rep = solve_mip(build_knapsack(inst, compute_bigM_domain(inst)));
        EXPECT_LT(testsupport::rel_err(rep.ub, ref.objective), 1e-6) << seed;
    }
}

TEST(Solver, ImprovedRootDominatesBasic) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto inst = testsupport::small_portfolio(seed, 5, 12, 0.01);
        const auto basic = solve_mip(assemble_benchmark(inst, Formulation::Basic).model, {}, {.node_limit = 0});
        const auto imp = solve_mip(assemble_benchmark(inst, Formulation::Improved).model, {}, {.node_limit = 0});
        EXPECT_GE(imp.root_bound, basic.root_bound - 1e-7 * std::max(1.0, std::abs(basic.root_bound)));
    }
}

TEST(Solver, ImprovedRootGapUsuallySmaller) {
    int better = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = testsupport::small_portfolio(seed, 5, 12, 0.01);
        const auto bb = assemble_benchmark(inst, Formulation::Basic);
        const auto ib = assemble_benchmark(inst, Formulation::Improved);
        const auto opt = solve_mip(ib.model);
        if (!opt.found()) continue;
        ++total;
        better += root_gap(ib.model, {}, opt.ub) <= root_gap(bb.model, {}, opt.ub) + 1e-9;
    }
    ASSERT_GT(total, 0);
    EXPECT_GE(better, (8 * total + 9) / 10);
}

TEST(Solver, RootGapDefinition) {
    const auto m = bound_model();
    EXPECT_EQ(root_gap(m, {}, 3.0), 0.0);
    EXPECT_NEAR(root_gap(m, {}, 3.0 * 1.2309), 23.09, 1e-9);
    MipModel bad = bound_model();
    bad.add_row({{0, 1.0}}, Sense::LE, 1.0, RowFamily::Cut, "ub");
    try {
        root_gap(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoIncumbent);
    }
}

TEST(Solver, RootCutsNeverRemoveOptimum) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = testsupport::small_portfolio(seed, 5, 15, 0.002);
        const auto b = assemble_benchmark(inst, Formulation::Mixing);
        const auto with = solve_benchmark(b);
        ASSERT_TRUE(with.solved());
        MipModel hard = b.model;
        for (const auto& r : with.root_cuts) hard.rows.push_back(r);
        const auto plain = solve_mip(b.model);
        const auto cut = solve_mip(hard);
        EXPECT_LT(testsupport::rel_err(cut.ub, plain.ub), 1e-6) << seed;
        EXPECT_LT(testsupport::rel_err(with.ub, plain.ub), 1e-6) << seed;
    }
}

TEST(Solver, Deterministic) {
    const auto inst = testsupport::small_portfolio(4, 6, 15, 0.005);
    const auto b = assemble_benchmark(inst, Formulation::Mixing);
    const auto r1 = solve_benchmark(b), r2 = solve_benchmark(b);
    EXPECT_EQ(r1.ub, r2.ub);
    EXPECT_EQ(r1.lb, r2.lb);
    EXPECT_EQ(r1.nodes, r2.nodes);
    EXPECT_EQ(r1.cuts, r2.cuts);
    EXPECT_EQ(r1.root_bound, r2.root_bound);
    EXPECT_EQ(r1.solution, r2.solution);
}

TEST(Solver, ProgressLogMonotone) {
    const auto inst = testsupport::small_portfolio(6, 6, 20, 0.01);
    const auto b = assemble_benchmark(inst, Formulation::Basic);
    std::ostringstream log;
    MipLimits lim;
    lim.log = &log;
    lim.log_every = 1;
    const auto rep = solve_mip(b.model, {}, lim);
    std::istringstream is(log.str());
    std::string line;
    double last_lb = -kInf, last_ub = kInf;
    int lines = 0;
    while (std::getline(is, line)) {
        ++lines;
        double lb = kNaN, ub = kNaN;
        for (auto [k, v] : parse_kv(line)) {
            if (k == "lb") lb = v;
            if (k == "ub") ub = v;
        }
        EXPECT_GE(lb, last_lb - 1e-9);
        EXPECT_LE(ub, last_ub + 1e-9);
        last_lb = lb;
        last_ub = ub;
    }
    EXPECT_GE(lines, 2);
    EXPECT_NEAR(last_ub, rep.ub, 1e-8 * std::abs(rep.ub));
}

TEST(Solver, BudgetExhaustedStillReports) {
    const auto inst = testsupport::small_portfolio(2, 8, 30, 0.01);
    const auto b = assemble_benchmark(inst, Formulation::Basic);
    MipLimits lim;
    lim.node_limit = 2;
    const auto rep = solve_mip(b.model, {}, lim);
    if (rep.status == MipStatus::Optimal) GTEST_SKIP() << "solved within the budget";
    EXPECT_EQ(rep.status, MipStatus::NodeLimit);
    EXPECT_TRUE(std::isfinite(rep.lb));
    if (rep.found()) EXPECT_NEAR(rep.gap, percent_gap(rep.ub, rep.lb), 1e-12);
}

TEST(Solver, GapFormula) {
    EXPECT_NEAR(percent_gap(12.0, 10.0), 20.0, 1e-12);
    EXPECT_EQ(percent_gap(10.0, 10.0), 0.0);
    EXPECT_EQ(percent_gap(kInf, 10.0), kInf);
}
