#pragma once

// Command-line front end: generate, build, strengthen, separate, solve,
// bench, export and verify.

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "drccp/apps.hpp"
#include "drccp/io.hpp"
#include "drccp/oracle.hpp"

namespace drccp::cli {

struct Args {
    std::string kind = "generic";
    std::vector<std::size_t> n;
    std::vector<double> theta;
    double epsilon = -1.0;  // negative: generator default
    std::uint64_t seed = 1;
    std::size_t seeds = 1;
    std::string formulation = "improved";
    std::string norm;
    std::string quantile_mode;
    std::string style = "linearized";
    double time_limit = 600.0;
    std::string instance, out, cache, log;
    unsigned jobs = 1;
};

inline Instance generate(const std::string& kind, std::size_t N, double theta, const Args& a, std::uint64_t seed) {
    const auto k = parse_kind(kind);
    if (k == InstanceKind::Portfolio) {
        PortfolioConfig c;
        if (N) c.N = N;
        c.theta = theta;
        if (a.epsilon >= 0) c.epsilon = a.epsilon;
        if (!a.norm.empty()) c.norm = parse_norm(a.norm);
        c.seed = seed;
        return gen_portfolio(c);
    }
    if (k == InstanceKind::Resource) {
        ResourceConfig c;
        if (N) c.N = N;
        c.theta = theta;
        if (a.epsilon >= 0) c.epsilon = a.epsilon;
        if (!a.norm.empty()) c.norm = parse_norm(a.norm);
        c.seed = seed;
        return gen_resource(c);
    }
    RandomConfig c;
    if (N) c.N = N;
    c.theta = theta;
    if (a.epsilon >= 0) c.epsilon = a.epsilon;
    if (!a.norm.empty()) c.norm = parse_norm(a.norm);
    c.seed = seed;
    return gen_random(c);
}

inline QuantileConfig quantile_config(const Args& a, bool& defaults) {
    QuantileConfig q;
    defaults = a.quantile_mode.empty();
    if (!defaults) q.mode = parse_quantile_mode(a.quantile_mode);
    return q;
}

inline Benchmark assemble(const Instance& inst, const Args& a) {
    bool defaults = true;
    const auto q = quantile_config(a, defaults);
    return assemble_benchmark(inst, parse_formulation(a.formulation), q, defaults);
}

inline Instance load(const Args& a) {
    if (a.instance.empty()) throw Error(ErrorCode::InvalidArgument, "--instance is required");
    return io::read_instance(a.instance);
}

inline std::string need_out(const Args& a) {
    if (a.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
    return a.out;
}

inline int run_generate(const Args& a, std::ostream& out) {
    const auto inst = generate(a.kind, a.n.empty() ? 0 : a.n.front(), a.theta.empty() ? 0.05 : a.theta.front(), a, a.seed);
    io::write_instance(need_out(a), inst);
    out << "wrote " << a.out << " hash " << io::hex64(io::instance_hash(inst)) << '\n';
    return 0;
}

inline int run_build(const Args& a, std::ostream& out) {
    const auto inst = load(a);
    const auto b = assemble(inst, a);
    const auto path = need_out(a);
    io::write_model(path, b.model, io::ExportStyle::LinearizedText);
    out << "model " << path << " rows " << b.model.rows.size() << " vars " << b.model.vars.size() << '\n';
    if (!b.quantiles.q.empty()) {
        const auto cache = a.cache.empty() ? path + ".quantiles" : a.cache;
        io::write_atomic(cache, io::serialize_quantiles(b.quantiles, inst));
        out << "quantiles " << cache << '\n';
    }
    for (const auto& d : b.model.diagnostics) out << "diagnostic " << d << '\n';
    return 0;
}

inline int run_strengthen(const Args& a, std::ostream& out) {
    const auto inst = load(a);
    bool defaults = true;
    auto q = quantile_config(a, defaults);
    if (defaults) {
        const auto d = default_quantile_config(inst);
        q.mode = d.mode;
        q.row_modes = d.row_modes;
    }
    q.threads = std::max(1U, a.jobs);
    const auto qt = build_quantile_table(inst, q);
    const auto M = default_bigM(inst);
    std::size_t reduced = 0, total = 0;
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < inst.P(); ++p) {
            ++total;
            const double coef = -inst.row_constant(i, p) - qt.at(i, p);
            if (coef < M[i]) ++reduced;
        }
    io::write_atomic(need_out(a), io::serialize_quantiles(qt, inst));
    out << "coefficients reduced " << reduced << " of " << total << '\n';
    return 0;
}

inline int run_separate(const Args& a, std::ostream& out) {
    const auto inst = load(a);
    Args m = a;
    m.formulation = "mixing";
    const auto b = assemble(inst, m);
    const auto lp = solve_lp(b.model);
    if (lp.status != lp::Status::Optimal) throw Error(ErrorCode::NumericalFailure, "root relaxation not optimal");
    std::span<const double> v(lp.primal);
    const auto x = v.subspan(b.model.x_begin, b.model.L);
    const auto z = v.subspan(b.model.z_begin, b.model.N);
    std::vector<MixingCut> cuts;
    for (const auto& prof : b.profiles)
        if (auto c = separate(prof, x, z)) cuts.push_back(*c);
    io::write_atomic(need_out(a), io::serialize_cuts(cuts));
    out << "root " << io::fmt(lp.objective) << " cuts " << cuts.size() << '\n';
    return 0;
}

inline int run_solve(const Args& a, std::ostream& out) {
    const auto inst = load(a);
    const auto b = assemble(inst, a);
    MipLimits lim;
    lim.time_limit = a.time_limit;
    std::ostringstream log;
    if (!a.log.empty()) lim.log = &log;
    const auto r = solve_benchmark(b, lim);
    if (!a.log.empty()) io::write_atomic(a.log, log.str());
    const auto text = io::format_report(r);
    if (!a.out.empty()) io::write_atomic(a.out, text);
    out << text;
    return 0;
}

inline int run_bench(const Args& a, std::ostream& out) {
    struct Task {
        std::size_t N;
        double theta;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    const std::vector<std::size_t> ns = a.n.empty() ? std::vector<std::size_t>{0} : a.n;
    const std::vector<double> ths = a.theta.empty() ? std::vector<double>{0.05} : a.theta;
    for (auto N : ns)
        for (double th : ths)
            for (std::size_t s = 0; s < a.seeds; ++s) tasks.push_back({N, th, a.seed + s});
    std::vector<SolveReport> reports(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t; (t = next++) < tasks.size();) {
            try {
                const auto inst = generate(a.kind, tasks[t].N, tasks[t].theta, a, tasks[t].seed);
                MipLimits lim;
                lim.time_limit = a.time_limit;
                reports[t] = solve_benchmark(assemble(inst, a), lim);
                if (!a.out.empty()) {
                    const auto name = "report_N" + std::to_string(inst.N) + "_theta" + io::fmt(tasks[t].theta) +
                                      "_seed" + std::to_string(tasks[t].seed) + ".txt";
                    io::write_atomic(std::filesystem::path(a.out) / name, io::format_report(reports[t]));
                }
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };
    if (!a.out.empty()) std::filesystem::create_directories(a.out);
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::max(1U, a.jobs); ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    io::BenchTable table;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (!errors[t].empty()) throw Error(ErrorCode::NumericalFailure, "task " + std::to_string(t) + ": " + errors[t]);
        const std::size_t N = tasks[t].N ? tasks[t].N : generate(a.kind, 0, tasks[t].theta, a, tasks[t].seed).N;
        table.add(N, tasks[t].theta, reports[t]);
    }
    const auto text = table.render();
    if (!a.out.empty()) io::write_atomic(std::filesystem::path(a.out) / "table.txt", text);
    out << text;
    return 0;
}

inline int run_export(const Args& a, std::ostream& out) {
    const auto inst = load(a);
    const auto b = assemble(inst, a);
    io::ExportStyle style;
    if (a.style == "linearized") style = io::ExportStyle::LinearizedText;
    else if (a.style == "conic") style = io::ExportStyle::ConicAnnotatedText;
    else throw Error(ErrorCode::InvalidArgument, "--style must be linearized or conic");
    std::vector<LinearRow> oa;
    if (style == io::ExportStyle::LinearizedText && !b.model.cones.empty()) {
        std::vector<double> lo, hi;
        for (const auto& v : b.model.vars) {
            lo.push_back(v.lower);
            hi.push_back(v.upper);
        }
        ConePool pool;
        solve_relaxation(b.model, lo, hi, {}, pool);
        oa = pool.rows;
    }
    io::write_model(need_out(a), b.model, style, oa);
    out << "exported " << a.out << '\n';
    return 0;
}

/// Oracle checks on one instance: every formulation's MIP optimum against
/// enumeration, and Improved against Knapsack.
inline int run_verify(const Args& a, std::ostream& out) {
    const auto inst = load(a);
    const auto ref = oracle::enumerate_optimum(inst, Formulation::Knapsack);
    bool all = true;
    double improved = kNaN;
    double knapsack = kNaN;
    for (auto f : {Formulation::Knapsack, Formulation::Improved, Formulation::Mixing}) {
        const auto b = assemble_benchmark(inst, f);
        const auto r = solve_benchmark(b);
        const double v = r.found() ? r.ub : (r.status == MipStatus::Infeasible ? kInf : kNaN);
        const bool ok = (v == ref.objective) || rel_close(v, ref.objective, 1e-6);
        all = all && ok;
        if (f == Formulation::Improved) improved = v;
        if (f == Formulation::Knapsack) knapsack = v;
        out << (ok ? "PASS " : "FAIL ") << to_string(f) << " mip=" << io::fmt(v) << " oracle=" << io::fmt(ref.objective)
            << '\n';
    }
    const bool eq = improved == knapsack || rel_close(improved, knapsack, 1e-6);
    all = all && eq;
    out << (eq ? "PASS " : "FAIL ") << "improved-equals-knapsack\n";
    return all ? 0 : 1;
}

inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    CLI::App app{"Distributionally robust chance-constrained programs: build, strengthen, solve"};
    app.require_subcommand(1, 1);
    Args a;
    auto common = [&a](CLI::App* s) {
        s->add_option("--instance", a.instance, "Instance file");
        s->add_option("--out", a.out, "Output file or directory");
        s->add_option("--formulation", a.formulation, "basic, knapsack, improved or mixing")->capture_default_str();
        s->add_option("--quantile-mode", a.quantile_mode,
                      "exact-joint, exact-individual, covering, packing, resource or user");
        s->add_option("--time-limit", a.time_limit, "Seconds per solve")->capture_default_str();
        s->add_option("--jobs", a.jobs, "Worker threads")->capture_default_str();
    };
    auto gen_opts = [&a](CLI::App* s) {
        s->add_option("--kind", a.kind, "generic, portfolio or resource")->capture_default_str();
        s->add_option("--n", a.n, "Scenario counts")->delimiter(',');
        s->add_option("--theta", a.theta, "Wasserstein radii")->delimiter(',');
        s->add_option("--epsilon", a.epsilon, "Risk level");
        s->add_option("--seed", a.seed, "First seed")->capture_default_str();
        s->add_option("--norm", a.norm, "l1, l2 or linf");
    };
    auto* gen = app.add_subcommand("generate", "Write a seeded instance file");
    common(gen);
    gen_opts(gen);
    auto* build = app.add_subcommand("build", "Write the model file and the quantile cache");
    common(build);
    build->add_option("--cache", a.cache, "Quantile cache path");
    auto* stren = app.add_subcommand("strengthen", "Compute strengthened coefficients into a quantile cache");
    common(stren);
    auto* sep = app.add_subcommand("separate", "One separation round at the root relaxation; dump cuts");
    common(sep);
    auto* solve = app.add_subcommand("solve", "Solve an instance and print the report");
    common(solve);
    solve->add_option("--log", a.log, "Progress log file");
    auto* bench = app.add_subcommand("bench", "Sweep an (N, theta) grid and print the statistics table");
    common(bench);
    gen_opts(bench);
    bench->add_option("--seeds", a.seeds, "Instances per grid cell")->capture_default_str();
    auto* exp = app.add_subcommand("export", "Write the model in the algebraic text layout");
    common(exp);
    exp->add_option("--style", a.style, "linearized or conic")->capture_default_str();
    auto* ver = app.add_subcommand("verify", "Check formulations against the enumeration oracle");
    common(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return 2;
    }
    try {
        if (*gen) return run_generate(a, out);
        if (*build) return run_build(a, out);
        if (*stren) return run_strengthen(a, out);
        if (*sep) return run_separate(a, out);
        if (*solve) return run_solve(a, out);
        if (*bench) return run_bench(a, out);
        if (*exp) return run_export(a, out);
        if (*ver) return run_verify(a, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 2;
}

}  // namespace drccp::cli
