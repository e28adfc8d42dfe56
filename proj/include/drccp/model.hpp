#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "drccp/common.hpp"

namespace drccp {

enum class VarKind { Continuous, Binary };
enum class Sense { GE, LE, EQ };

/// Constraint family each row belongs to.
enum class RowFamily {
    Conic,      // eps*t >= theta*||b - A^T x||_* + (1/N) sum r
    NormAux,    // linear expansion of the dual norm (L1 / Linf duals)
    BigM1,      // M (1 - z) >= t - r
    BigM2,      // s_p(x, xi^i) + M z >= t - r   (or the strengthened coefficient)
    BigM3,      // s_p(x, xi^i) + M z >= 0
    Knapsack,   // sum z <= floor(eps N)
    Quantile,   // (-A xi_p^i - a_p)^T x >= q_p^i
    Cut,        // separated mixing inequality
    ConeCut,    // outer-approximation cut for a symbolic L2 cone
};

inline std::string_view to_string(RowFamily f) {
    switch (f) {
        case RowFamily::Conic: return "conic";
        case RowFamily::NormAux: return "normaux";
        case RowFamily::BigM1: return "bigM1";
        case RowFamily::BigM2: return "bigM2";
        case RowFamily::BigM3: return "bigM3";
        case RowFamily::Knapsack: return "knapsack";
        case RowFamily::Quantile: return "quantile";
        case RowFamily::Cut: return "cut";
        case RowFamily::ConeCut: return "conecut";
    }
    return "?";
}

using Terms = std::vector<std::pair<std::size_t, double>>;

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInf;
};

struct LinearRow {
    Terms terms;
    Sense sense = Sense::GE;
    double rhs = 0.0;
    RowFamily family = RowFamily::Cut;
    std::string label;
};

struct AffineExpr {
    Terms terms;
    double constant = 0.0;
};

/// bound_var >= || (entries) ||_norm.  Linear norms are also expanded into
/// NormAux rows at build time (linearized = true); L2 rows stay symbolic and
/// are handled by outer approximation or passed through on export.
struct ConeRow {
    std::size_t bound_var = 0;
    std::vector<AffineExpr> entries;
    Norm norm = Norm::L2;
    bool linearized = false;
    std::string label;
};

/// Solver-agnostic MIP: minimize objective^T v subject to linear rows, cone
/// rows and variable bounds; binaries are the scenario indicators z.
struct MipModel {
    std::vector<Variable> vars;
    std::vector<LinearRow> rows;
    std::vector<ConeRow> cones;
    std::vector<double> objective;

    // Variable layout written by the formulation builders.
    std::size_t N = 0, L = 0;
    std::size_t z_begin = 0, r_begin = 0, t_index = 0, x_begin = 0;
    std::size_t aux_begin = 0, aux_count = 0;

    // Build-time notes, e.g. big-M values below the strengthened coefficient.
    std::vector<std::string> diagnostics;

    std::size_t add_var(std::string name, VarKind kind, double lo, double hi, double obj = 0.0) {
        vars.push_back({std::move(name), kind, lo, hi});
        objective.push_back(obj);
        return vars.size() - 1;
    }

    void add_row(Terms terms, Sense sense, double rhs, RowFamily family, std::string label) {
        for (const auto& [j, c] : terms)
            if (j >= vars.size())
                throw Error(ErrorCode::InvalidArgument, "row '" + label + "' references undeclared variable");
        rows.push_back({std::move(terms), sense, rhs, family, std::move(label)});
    }

    std::size_t count(RowFamily f) const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.family == f;
        return n;
    }

    std::size_t num_binaries() const {
        std::size_t n = 0;
        for (const auto& v : vars) n += v.kind == VarKind::Binary;
        return n;
    }

    std::size_t z(std::size_t i) const { return z_begin + i; }
    std::size_t r(std::size_t i) const { return r_begin + i; }
    std::size_t x(std::size_t l) const { return x_begin + l; }

    double row_activity(const LinearRow& row, const std::vector<double>& v) const {
        double acc = 0.0;
        for (const auto& [j, c] : row.terms) acc += c * v[j];
        return acc;
    }

    static double row_violation(const LinearRow& row, double activity) {
        switch (row.sense) {
            case Sense::GE: return std::max(0.0, row.rhs - activity);
            case Sense::LE: return std::max(0.0, activity - row.rhs);
            case Sense::EQ: return std::abs(activity - row.rhs);
        }
        return 0.0;
    }
};

enum class BigMProvenance { DomainBound, PortfolioRule, ResourceRule, UserSupplied };

inline std::string_view to_string(BigMProvenance p) {
    switch (p) {
        case BigMProvenance::DomainBound: return "domain";
        case BigMProvenance::PortfolioRule: return "portfolio";
        case BigMProvenance::ResourceRule: return "resource";
        case BigMProvenance::UserSupplied: return "user";
    }
    return "?";
}

struct BigMVector {
    std::vector<double> values;
    BigMProvenance provenance = BigMProvenance::UserSupplied;

    BigMVector() = default;
    BigMVector(std::vector<double> v, BigMProvenance prov) : values(std::move(v)), provenance(prov) {
        for (double m : values)
            if (!(m > 0.0) || !std::isfinite(m))
                throw Error(ErrorCode::InvalidBigM, "big-M values must be finite and positive");
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

}  // namespace drccp
