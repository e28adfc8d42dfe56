#pragma once

// Index layout of resource-planning instances.
//
// Decisions: x_d (d < D) followed by y_dp at D + d*P + p, so L = D + D*P.
// Rows: D assignment rows  rho_d x_d - sum_p y_dp >= 0, then P demand rows
// sum_d mu_dp y_dp - lambda_p >= 0. Every row's random vector lives in the
// same (L+1)-dimensional space: coordinate l < L multiplies decision l and
// the last coordinate carries lambda. With W = -[I; 0] and b = (0, ..., 0, -1)
// the direction b - W x is (x, y, -1), whose norm equals that of (x, y, 1).

#include <cstddef>
#include <vector>

#include "drccp/instance.hpp"

namespace drccp {

struct ResourceLayout {
    std::size_t D = 0, P = 0;

    std::size_t L() const { return D + D * P; }
    std::size_t K() const { return L() + 1; }
    std::size_t rows() const { return D + P; }
    std::size_t x(std::size_t d) const { return d; }
    std::size_t y(std::size_t d, std::size_t p) const { return D + d * P + p; }
    std::size_t assignment_row(std::size_t d) const { return d; }
    std::size_t demand_row(std::size_t p) const { return D + p; }
    bool is_assignment(std::size_t row) const { return row < D; }

    static ResourceLayout of(const Instance& inst) {
        if (inst.kind != InstanceKind::Resource)
            throw Error(ErrorCode::InvalidArgument, "not a resource-planning instance");
        ResourceLayout lay{inst.resources, inst.customer_groups};
        if (inst.L() != lay.L() || inst.K() != lay.K() || inst.P() != lay.rows())
            throw Error(ErrorCode::DimensionMismatch, "resource instance dimensions do not match D and P");
        return lay;
    }

    double rho(const Instance& inst, std::size_t i, std::size_t d) const {
        return inst.xi(i, assignment_row(d))[x(d)];
    }
    double mu(const Instance& inst, std::size_t i, std::size_t d, std::size_t p) const {
        return inst.xi(i, demand_row(p))[y(d, p)];
    }
    double lambda(const Instance& inst, std::size_t i, std::size_t p) const {
        return inst.xi(i, demand_row(p))[L()];
    }
};

}  // namespace drccp
