#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace drccp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Numeric tolerances shared across modules.
namespace tol {
inline constexpr double degenerate_direction = 1e-10;  // ||b - A^T x||_* threshold
inline constexpr double integrality = 1e-6;
inline constexpr double feasibility = 1e-8;
inline constexpr double mip_gap = 1e-6;
inline constexpr double cone = 1e-7;
inline constexpr double violation = 1e-6;  // default cut violation threshold
inline constexpr double floor_guard = 1e-9;
}  // namespace tol

enum class ErrorCode {
    DegenerateDirection,
    DimensionMismatch,
    InvalidArgument,
    UnboundedDomain,
    InvalidQuantile,
    InvalidBigM,
    AllInfeasible,
    SupportMismatch,
    SignViolation,
    NonpositiveYield,
    RedundantIndex,
    TooManySubsets,
    TooManyScenarios,
    NumericalFailure,
    NoIncumbent,
    NotDegenerate,
    ParseError,
    IoError,
};

inline std::string_view to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::DegenerateDirection: return "DegenerateDirection";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnboundedDomain: return "UnboundedDomain";
        case ErrorCode::InvalidQuantile: return "InvalidQuantile";
        case ErrorCode::InvalidBigM: return "InvalidBigM";
        case ErrorCode::AllInfeasible: return "AllInfeasible";
        case ErrorCode::SupportMismatch: return "SupportMismatch";
        case ErrorCode::SignViolation: return "SignViolation";
        case ErrorCode::NonpositiveYield: return "NonpositiveYield";
        case ErrorCode::RedundantIndex: return "RedundantIndex";
        case ErrorCode::TooManySubsets: return "TooManySubsets";
        case ErrorCode::TooManyScenarios: return "TooManyScenarios";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::NoIncumbent: return "NoIncumbent";
        case ErrorCode::NotDegenerate: return "NotDegenerate";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Norm used by the Wasserstein metric on the uncertainty space.
enum class Norm { L1, L2, Linf };

inline Norm dual(Norm n) {
    switch (n) {
        case Norm::L1: return Norm::Linf;
        case Norm::Linf: return Norm::L1;
        case Norm::L2: return Norm::L2;
    }
    return n;
}

/// The Wasserstein norm together with the dual norm that appears in the
/// distance formula and the conic row.
struct DualNormTag {
    Norm norm = Norm::L2;
    Norm dual_norm() const { return dual(norm); }
};

inline std::string_view to_string(Norm n) {
    switch (n) {
        case Norm::L1: return "l1";
        case Norm::L2: return "l2";
        case Norm::Linf: return "linf";
    }
    return "?";
}

inline Norm parse_norm(std::string_view s) {
    if (s == "l1") return Norm::L1;
    if (s == "l2") return Norm::L2;
    if (s == "linf") return Norm::Linf;
    throw Error(ErrorCode::ParseError, "unknown norm '" + std::string(s) + "'");
}

template <class Range>
double norm_value(const Range& v, Norm n) {
    double acc = 0.0;
    for (double e : v) {
        switch (n) {
            case Norm::L1: acc += std::abs(e); break;
            case Norm::L2: acc += e * e; break;
            case Norm::Linf: acc = std::max(acc, std::abs(e)); break;
        }
    }
    return n == Norm::L2 ? std::sqrt(acc) : acc;
}

/// floor(epsilon * n), snapping to the nearest integer when the product is
/// within 1e-9 of it (0.1 * 100 must give 10, not 9).
inline std::size_t guarded_floor(double epsilon, std::size_t n) {
    const double prod = epsilon * static_cast<double>(n);
    const double nearest = std::round(prod);
    if (std::abs(prod - nearest) <= tol::floor_guard) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::floor(prod));
}

/// (UB - LB) / LB * 100, the reporting convention for optimality gaps.
inline double percent_gap(double ub, double lb) {
    if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
    const double diff = ub - lb;
    if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(ub))) return 0.0;
    if (std::abs(lb) < 1e-12) return kInf;
    return diff / std::abs(lb) * 100.0;
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 1e-9) {
    if (a == b) return true;
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace drccp
