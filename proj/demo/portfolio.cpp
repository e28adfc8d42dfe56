// Small portfolio instance solved with each formulation; prints the root
// bound, the optimum and the number of separated cuts.

#include <cstdio>

#include "drccp/drccp.hpp"

int main() {
    drccp::PortfolioConfig cfg;
    cfg.K = 10;
    cfg.N = 40;
    cfg.theta = 0.001;
    cfg.seed = 7;
    const auto inst = drccp::gen_portfolio(cfg);
    std::printf("%-9s %12s %12s %8s %6s\n", "form", "root", "optimum", "nodes", "cuts");
    for (auto f : {drccp::Formulation::Basic, drccp::Formulation::Improved, drccp::Formulation::Mixing}) {
        const auto b = drccp::assemble_benchmark(inst, f);
        drccp::MipLimits lim;
        lim.time_limit = 60.0;
        const auto r = drccp::solve_benchmark(b, lim);
        std::printf("%-9s %12.6f %12.6f %8ld %6zu\n", std::string(drccp::to_string(f)).c_str(), r.root_bound, r.ub,
                    r.nodes, r.cuts);
    }
}
