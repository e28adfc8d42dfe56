#pragma once

// Base and mixing inequalities for the substructure
//   mu^T x + (h^j - h_thr) z^j >= h^j,
// exact separation by the prefix-minimum scan over the sorted scenario values,
// and a deduplicating cut pool.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/instance.hpp"
#include "drccp/model.hpp"
#include "drccp/quantile.hpp"
#include "drccp/solver.hpp"

namespace drccp {

inline constexpr std::size_t kNoProbe = std::numeric_limits<std::size_t>::max();

struct SeparationStats {
    std::uint64_t comparisons = 0;
    std::uint64_t scan_steps = 0;
    std::uint64_t total() const { return comparisons + scan_steps; }
};

struct SortedBaseProfile {
    std::vector<double> mu;
    std::size_t probe_i = kNoProbe, probe_p = kNoProbe;
    std::vector<std::pair<std::size_t, double>> h_sorted;  // (scenario, value), non-increasing
    std::size_t k = 0;
    double threshold = -kInf;  // (k+1)-th largest value

    static SortedBaseProfile make(std::vector<double> mu, std::span<const double> h, std::size_t k,
                                  SeparationStats* stats = nullptr) {
        if (k >= h.size()) throw Error(ErrorCode::InvalidArgument, "k must be smaller than the number of scenarios");
        SortedBaseProfile prof;
        prof.mu = std::move(mu);
        prof.k = k;
        prof.h_sorted.resize(h.size());
        for (std::size_t j = 0; j < h.size(); ++j) prof.h_sorted[j] = {j, h[j]};
        std::uint64_t cmp = 0;
        std::stable_sort(prof.h_sorted.begin(), prof.h_sorted.end(), [&cmp](const auto& a, const auto& b) {
            ++cmp;
            return a.second > b.second;
        });
        if (stats) stats->comparisons += cmp;
        prof.threshold = prof.h_sorted[k].second;
        return prof;
    }

    /// Profile of the probe direction mu_p^i from a quantile table.
    static SortedBaseProfile from_table(const Instance& inst, const QuantileTable& qt, std::size_t i, std::size_t p) {
        if (!qt.has_values(i, p)) throw Error(ErrorCode::InvalidArgument, "quantile table has no scenario values");
        auto prof = make(inst.row_coeffs(i, p), qt.h_values(i, p), qt.k);
        prof.probe_i = i;
        prof.probe_p = p;
        return prof;
    }

    std::size_t N() const { return h_sorted.size(); }

    /// Sorted positions that may enter a cut: the top k with finite value above the threshold.
    bool eligible(std::size_t pos) const {
        return pos < k && std::isfinite(threshold) && std::isfinite(h_sorted[pos].second) &&
               h_sorted[pos].second > threshold;
    }

    std::size_t rank_of(std::size_t scenario) const {
        for (std::size_t pos = 0; pos < h_sorted.size(); ++pos)
            if (h_sorted[pos].first == scenario) return pos;
        throw Error(ErrorCode::InvalidArgument, "scenario not in profile");
    }
};

/// mu^T x + sum_i coef_i z^{j_i} >= rhs
struct MixingCut {
    std::vector<double> mu;
    std::size_t probe_i = kNoProbe, probe_p = kNoProbe;
    std::vector<std::size_t> J;  // scenario indices, by non-increasing h
    std::vector<double> coefficients;
    double rhs = 0.0;
    double threshold = 0.0;

    double violation(std::span<const double> x, std::span<const double> z) const {
        double lhs = 0.0;
        for (std::size_t l = 0; l < mu.size(); ++l) lhs += mu[l] * x[l];
        for (std::size_t s = 0; s < J.size(); ++s) lhs += coefficients[s] * z[J[s]];
        return rhs - lhs;
    }

    LinearRow to_row(const MipModel& m) const {
        LinearRow row;
        for (std::size_t l = 0; l < mu.size(); ++l)
            if (mu[l] != 0.0) row.terms.emplace_back(m.x(l), mu[l]);
        for (std::size_t s = 0; s < J.size(); ++s)
            if (coefficients[s] != 0.0) row.terms.emplace_back(m.z(J[s]), coefficients[s]);
        row.sense = Sense::GE;
        row.rhs = rhs;
        row.family = RowFamily::Cut;
        row.label = "mix";
        if (probe_i != kNoProbe) row.label += "_" + std::to_string(probe_i) + "_" + std::to_string(probe_p);
        for (std::size_t j : J) row.label += "_" + std::to_string(j);
        return row;
    }
};

/// Cut with the given sorted positions (strictly increasing).
inline MixingCut make_cut(const SortedBaseProfile& prof, const std::vector<std::size_t>& positions) {
    MixingCut c;
    c.mu = prof.mu;
    c.probe_i = prof.probe_i;
    c.probe_p = prof.probe_p;
    c.threshold = prof.threshold;
    c.rhs = positions.empty() ? prof.threshold : prof.h_sorted[positions.front()].second;
    for (std::size_t s = 0; s < positions.size(); ++s) {
        const double cur = prof.h_sorted[positions[s]].second;
        const double next = s + 1 < positions.size() ? prof.h_sorted[positions[s + 1]].second : prof.threshold;
        c.J.push_back(prof.h_sorted[positions[s]].first);
        c.coefficients.push_back(cur - next);
    }
    return c;
}

/// mu^T x + (h^i - h_thr) z^i >= h^i for a scenario among the top k+1.
inline MixingCut base_inequality(const SortedBaseProfile& prof, std::size_t scenario) {
    const std::size_t pos = prof.rank_of(scenario);
    if (pos > prof.k) throw Error(ErrorCode::RedundantIndex, "scenario is not among the top k+1 values");
    if (pos == prof.k || !std::isfinite(prof.h_sorted[pos].second)) {
        MixingCut c = make_cut(prof, {});
        if (pos < prof.k) c.rhs = prof.threshold;
        return c;
    }
    return make_cut(prof, {pos});
}

/// Quantile row and relaxed big-M row for (i,p):
///   mu^T x >= q  and  mu^T x + c + (-c - q) z^i >= 0.
inline std::array<LinearRow, 2> strengthened_base_pair(std::size_t i, std::size_t p, const QuantileTable& qt,
                                                       const Instance& inst, const MipModel& m) {
    const auto mu = inst.row_coeffs(i, p);
    const double c = inst.row_constant(i, p);
    const double q = qt.at(i, p);
    std::array<LinearRow, 2> out;
    for (std::size_t l = 0; l < mu.size(); ++l)
        if (mu[l] != 0.0) out[0].terms.emplace_back(m.x(l), mu[l]);
    out[0].sense = Sense::GE;
    out[0].rhs = q;
    out[0].family = RowFamily::Quantile;
    out[0].label = "quantile_" + std::to_string(i) + "_" + std::to_string(p);
    out[1].terms = out[0].terms;
    out[1].terms.emplace_back(m.z(i), -c - q);
    out[1].sense = Sense::GE;
    out[1].rhs = -c;
    out[1].family = RowFamily::BigM3;
    out[1].label = "relaxed_" + std::to_string(i) + "_" + std::to_string(p);
    return out;
}

/// Most violated mixing cut at (x*, z*), or nothing if its violation is at
/// most tol. The scan keeps the top position and then every eligible
/// position whose z* is below that of the last kept one.
inline std::optional<MixingCut> separate(const SortedBaseProfile& prof, std::span<const double> x_star,
                                         std::span<const double> z_star, double tol = tol::violation,
                                         SeparationStats* stats = nullptr) {
    if (!std::isfinite(prof.threshold)) return std::nullopt;
    std::vector<std::size_t> positions;
    std::uint64_t steps = 0;
    double last = kInf;
    for (std::size_t pos = 0; pos < prof.k; ++pos) {
        ++steps;
        if (!prof.eligible(pos)) continue;
        const double zv = z_star[prof.h_sorted[pos].first];
        if (positions.empty() || zv < last) {
            positions.push_back(pos);
            last = zv;
        }
    }
    if (stats) stats->scan_steps += steps;
    MixingCut cut = make_cut(prof, positions);
    if (cut.violation(x_star, z_star) <= tol) return std::nullopt;
    return cut;
}

/// Every mixing cut of the profile: one per nonempty subset of eligible
/// positions, plus the degenerate cut mu^T x >= threshold.
inline std::vector<MixingCut> enumerate_all_cuts(const SortedBaseProfile& prof) {
    if (prof.k > 20) throw Error(ErrorCode::TooManySubsets, "enumeration limited to k <= 20");
    std::vector<MixingCut> out;
    if (!std::isfinite(prof.threshold)) return out;
    std::vector<std::size_t> elig;
    for (std::size_t pos = 0; pos < prof.k; ++pos)
        if (prof.eligible(pos)) elig.push_back(pos);
    out.push_back(make_cut(prof, {}));
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << elig.size()); ++mask) {
        std::vector<std::size_t> pos;
        for (std::size_t b = 0; b < elig.size(); ++b)
            if (mask >> b & 1U) pos.push_back(elig[b]);
        out.push_back(make_cut(prof, pos));
    }
    return out;
}

/// Cuts keyed by (probe identity or direction hash, J).
class CutPool {
public:
    bool insert(const MixingCut& c) {
        Key key{probe_key(c), c.J};
        if (!seen_.insert(key).second) return false;
        cuts_.push_back(c);
        return true;
    }
    const std::vector<MixingCut>& cuts() const { return cuts_; }
    std::size_t size() const { return cuts_.size(); }

private:
    using Key = std::pair<std::uint64_t, std::vector<std::size_t>>;
    static std::uint64_t probe_key(const MixingCut& c) {
        if (c.probe_i != kNoProbe) return (static_cast<std::uint64_t>(c.probe_i) << 20) ^ c.probe_p;
        std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the direction bytes
        for (double v : c.mu) {
            const auto* bytes = reinterpret_cast<const unsigned char*>(&v);
            for (std::size_t b = 0; b < sizeof(double); ++b) {
                h ^= bytes[b];
                h *= 1099511628211ULL;
            }
        }
        return h | (std::uint64_t{1} << 63);
    }
    std::set<Key> seen_;
    std::vector<MixingCut> cuts_;
};

/// Profiles for every probe (i,p) that has scenario values in the table.
inline std::vector<SortedBaseProfile> probe_profiles(const Instance& inst, const QuantileTable& qt) {
    std::vector<SortedBaseProfile> out;
    for (std::size_t i = 0; i < inst.N; ++i)
        for (std::size_t p = 0; p < inst.P(); ++p)
            if (qt.has_values(i, p)) out.push_back(SortedBaseProfile::from_table(inst, qt, i, p));
    return out;
}

/// Root cut source for solve_mip: separates every profile at the current
/// relaxation point and returns the new violated cuts as model rows.
inline CutSource mixing_cut_source(const MipModel& m, std::vector<SortedBaseProfile> profiles,
                                   std::shared_ptr<CutPool> pool, double tol = tol::violation) {
    return [&m, profiles = std::move(profiles), pool, tol](const std::vector<double>& v) {
        std::vector<LinearRow> rows;
        std::span<const double> all(v);
        const auto x = all.subspan(m.x_begin, m.L);
        const auto z = all.subspan(m.z_begin, m.N);
        for (const auto& prof : profiles) {
            auto cut = separate(prof, x, z, tol);
            if (cut && pool->insert(*cut)) rows.push_back(cut->to_row(m));
        }
        return rows;
    };
}

}  // namespace drccp
