#pragma once

// Dense bounded-variable simplex. Two phases with artificial variables,
// Dantzig pricing with a switch to Bland's rule after a run of degenerate
// pivots, and a final re-solve of the basic system to clean up tableau drift.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "drccp/common.hpp"
#include "drccp/model.hpp"

namespace drccp::lp {

struct Row {
    Terms terms;
    Sense sense = Sense::GE;
    double rhs = 0.0;
};

/// minimize cost^T x  s.t.  rows,  lower <= x <= upper
struct Problem {
    std::vector<double> cost, lower, upper;
    std::vector<Row> rows;

    std::size_t add_var(double lo, double hi, double c) {
        cost.push_back(c);
        lower.push_back(lo);
        upper.push_back(hi);
        return cost.size() - 1;
    }
    void add_row(Terms t, Sense s, double rhs) { rows.push_back({std::move(t), s, rhs}); }
};

enum class Status { Optimal, Infeasible, Unbounded };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "?";
}

struct Result {
    Status status = Status::Infeasible;
    double objective = kInf;
    std::vector<double> x;
    std::vector<double> activities;
    long iterations = 0;
};

struct Options {
    long max_iterations = 200000;
    double pivot_tol = 1e-7;
    double opt_tol = 1e-9;
    double feas_tol = 1e-9;
    int degenerate_switch = 50;  // consecutive degenerate pivots before Bland
    bool polish = true;
    long refactor_every = 100;  // pivots between rebuilds of the tableau
};

namespace detail {

class DenseSimplex {
public:
    DenseSimplex(const Problem& prob, const Options& opt) : prob_(prob), opt_(opt) {}

    Result run() {
        Result res;
        if (!transform()) {
            res.status = Status::Infeasible;
            return res;
        }
        // Phase 1
        std::vector<double> c1(ncol_, 0.0);
        for (std::size_t j = first_art_; j < ncol_; ++j) c1[j] = 1.0;
        set_costs(c1);
        Status st = iterate(res.iterations);
        if (st == Status::Unbounded)
            throw Error(ErrorCode::NumericalFailure, "phase 1 reported unbounded");
        double infeas = 0.0;
        for (std::size_t j = first_art_; j < ncol_; ++j) infeas += val_[j];
        if (infeas > 1e-7 * rhs_scale_) {
            res.status = Status::Infeasible;
            return res;
        }
        for (std::size_t j = first_art_; j < ncol_; ++j) {
            ub_[j] = 0.0;
            blocked_[j] = true;
            if (!is_basic_[j]) val_[j] = 0.0;
        }
        // Phase 2
        set_costs(cost_);
        st = iterate(res.iterations);
        if (st == Status::Unbounded) {
            res.status = Status::Unbounded;
            res.objective = -kInf;
            return res;
        }
        if (opt_.polish) polish();
        res.status = Status::Optimal;
        res.x.assign(prob_.cost.size(), 0.0);
        for (std::size_t j = 0; j < prob_.cost.size(); ++j) {
            const auto& m = map_[j];
            double v = m.offset + m.sign * val_[m.col];
            if (m.col2 >= 0) v -= val_[static_cast<std::size_t>(m.col2)];
            res.x[j] = std::clamp(v, prob_.lower[j], prob_.upper[j]);
        }
        res.objective = 0.0;
        for (std::size_t j = 0; j < res.x.size(); ++j) res.objective += prob_.cost[j] * res.x[j];
        res.activities.resize(prob_.rows.size());
        for (std::size_t r = 0; r < prob_.rows.size(); ++r) {
            double acc = 0.0;
            for (const auto& [j, c] : prob_.rows[r].terms) acc += c * res.x[j];
            res.activities[r] = acc;
            const auto& row = prob_.rows[r];
            const double slack = 1e-6 * std::max(1.0, std::abs(row.rhs));
            const bool ok = row.sense == Sense::GE   ? acc >= row.rhs - slack
                            : row.sense == Sense::LE ? acc <= row.rhs + slack
                                                     : std::abs(acc - row.rhs) <= slack;
            if (!ok) throw Error(ErrorCode::NumericalFailure, "solution violates a row");
        }
        return res;
    }

private:
    struct ColMap {
        std::size_t col = 0;
        double sign = 1.0;
        double offset = 0.0;
        long col2 = -1;  // negative part of a free variable
    };

    const Problem& prob_;
    Options opt_;
    std::size_t m_ = 0, ncol_ = 0, first_art_ = 0;
    std::vector<ColMap> map_;
    std::vector<double> A0_;  // original transformed matrix m x ncol
    std::vector<double> T_;   // tableau m x ncol
    std::vector<double> rhs_;
    std::vector<double> ub_, val_, cost_, d_, cur_cost_;
    std::vector<std::size_t> basis_;
    std::vector<char> is_basic_, at_upper_, blocked_;
    double rhs_scale_ = 1.0;

    double& T(std::size_t i, std::size_t j) { return T_[i * ncol_ + j]; }

    bool transform() {
        const std::size_t n = prob_.cost.size();
        m_ = prob_.rows.size();
        map_.resize(n);
        std::size_t ny = 0;
        std::vector<double> yub;
        std::vector<double> ycost;
        double dummy = 0.0;
        (void)dummy;
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = prob_.lower[j], hi = prob_.upper[j];
            if (lo > hi + opt_.feas_tol) return false;
            auto& mp = map_[j];
            if (std::isfinite(lo)) {
                mp = {ny++, 1.0, lo, -1};
                yub.push_back(std::isfinite(hi) ? std::max(0.0, hi - lo) : kInf);
                ycost.push_back(prob_.cost[j]);
            } else if (std::isfinite(hi)) {
                mp = {ny++, -1.0, hi, -1};
                yub.push_back(kInf);
                ycost.push_back(-prob_.cost[j]);
            } else {
                mp = {ny, 1.0, 0.0, static_cast<long>(ny + 1)};
                ny += 2;
                yub.push_back(kInf);
                yub.push_back(kInf);
                ycost.push_back(prob_.cost[j]);
                ycost.push_back(-prob_.cost[j]);
            }
        }
        // Row normalization: rhs >= 0, count slacks and artificials.
        std::vector<double> rrhs(m_);
        std::vector<Sense> rsense(m_);
        std::vector<double> rsign(m_, 1.0);
        std::size_t nslack = 0, nart = 0;
        for (std::size_t r = 0; r < m_; ++r) {
            const auto& row = prob_.rows[r];
            double rhs = row.rhs;
            for (const auto& [j, c] : row.terms) rhs -= c * map_[j].offset;
            Sense s = row.sense;
            if (rhs < 0.0 || (rhs == 0.0 && s == Sense::GE)) {
                rsign[r] = -1.0;
                rhs = -rhs;
                if (s == Sense::GE) s = Sense::LE;
                else if (s == Sense::LE) s = Sense::GE;
            }
            rrhs[r] = rhs;
            rsense[r] = s;
            if (s != Sense::EQ) ++nslack;
            if (s != Sense::LE) ++nart;
        }
        first_art_ = ny + nslack;
        ncol_ = first_art_ + nart;
        A0_.assign(m_ * ncol_, 0.0);
        rhs_ = rrhs;
        ub_.assign(ncol_, kInf);
        cost_.assign(ncol_, 0.0);
        for (std::size_t k = 0; k < ny; ++k) {
            ub_[k] = yub[k];
            cost_[k] = ycost[k];
        }
        val_.assign(ncol_, 0.0);
        is_basic_.assign(ncol_, 0);
        at_upper_.assign(ncol_, 0);
        blocked_.assign(ncol_, 0);
        basis_.assign(m_, 0);
        std::size_t sc = ny, ac = first_art_;
        rhs_scale_ = 1.0;
        for (std::size_t r = 0; r < m_; ++r) {
            const auto& row = prob_.rows[r];
            for (const auto& [j, c] : row.terms) {
                const auto& mp = map_[j];
                A0_[r * ncol_ + mp.col] += rsign[r] * c * mp.sign;
                if (mp.col2 >= 0) A0_[r * ncol_ + static_cast<std::size_t>(mp.col2)] -= rsign[r] * c;
            }
            double rmax = 0.0;
            for (std::size_t j = 0; j < first_art_; ++j) rmax = std::max(rmax, std::abs(A0_[r * ncol_ + j]));
            if (rmax > 0.0) {
                for (std::size_t j = 0; j < first_art_; ++j) A0_[r * ncol_ + j] /= rmax;
                rrhs[r] /= rmax;
                rhs_[r] = rrhs[r];
            }
            rhs_scale_ = std::max(rhs_scale_, rrhs[r]);
            if (rsense[r] == Sense::LE) {
                A0_[r * ncol_ + sc] = 1.0;
                basis_[r] = sc++;
            } else {
                if (rsense[r] == Sense::GE) A0_[r * ncol_ + sc++] = -1.0;
                A0_[r * ncol_ + ac] = 1.0;
                basis_[r] = ac++;
            }
            is_basic_[basis_[r]] = 1;
            val_[basis_[r]] = rrhs[r];
        }
        T_ = A0_;
        return true;
    }

    void set_costs(const std::vector<double>& c) {
        cur_cost_ = c;
        d_ = c;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &T_[i * ncol_];
            for (std::size_t j = 0; j < ncol_; ++j) d_[j] -= cb * row[j];
        }
        for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
    }

    Status iterate(long& iters) {
        int degenerate_run = 0;
        bool bland = false;
        long since_refactor = 0;
        bool fresh = false;  // tableau rebuilt since the last pivot
        for (;;) {
            if (++iters > opt_.max_iterations)
                throw Error(ErrorCode::NumericalFailure, "simplex iteration limit reached");
            if (++since_refactor >= opt_.refactor_every) {
                fresh = refactor();
                since_refactor = 0;
            }
            // Pricing
            std::size_t q = ncol_;
            double best = 0.0;
            for (std::size_t j = 0; j < ncol_; ++j) {
                if (is_basic_[j] || blocked_[j]) continue;
                const double dj = d_[j];
                double gain = 0.0;
                if (!at_upper_[j] && dj < -opt_.opt_tol) gain = -dj;
                else if (at_upper_[j] && dj > opt_.opt_tol) gain = dj;
                if (gain <= 0.0) continue;
                if (bland) {
                    q = j;
                    break;
                }
                if (gain > best) {
                    best = gain;
                    q = j;
                }
            }
            if (q == ncol_) {
                if (fresh) return Status::Optimal;
                if (!refactor()) throw Error(ErrorCode::NumericalFailure, "singular basis");
                fresh = true;
                since_refactor = 0;
                continue;
            }
            const double dir = at_upper_[q] ? -1.0 : 1.0;

            // Harris ratio test: bound the step with a small feasibility
            // slack, then take the largest pivot among rows within that bound.
            auto ratio = [&](std::size_t i, double alpha, double slack) {
                const std::size_t bv = basis_[i];
                if (alpha > opt_.pivot_tol) return (std::max(0.0, val_[bv]) + slack) / alpha;
                if (alpha < -opt_.pivot_tol && std::isfinite(ub_[bv]))
                    return (std::max(0.0, ub_[bv] - val_[bv]) + slack) / (-alpha);
                return kInf;
            };
            double bound = kInf;
            for (std::size_t i = 0; i < m_; ++i)
                bound = std::min(bound, ratio(i, T_[i * ncol_ + q] * dir, opt_.feas_tol));
            double step = kInf;
            std::size_t leave = m_;
            double leave_alpha = 0.0;
            if (std::isfinite(ub_[q]) && ub_[q] <= bound) {
                step = ub_[q];
            } else if (std::isfinite(bound)) {
                for (std::size_t i = 0; i < m_; ++i) {
                    const double alpha = T_[i * ncol_ + q] * dir;
                    const double lim = ratio(i, alpha, 0.0);
                    if (lim > bound) continue;
                    bool take = leave == m_;
                    if (!take) take = bland ? basis_[i] < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
                    if (take) {
                        leave = i;
                        leave_alpha = alpha;
                        step = lim;
                    }
                }
            }
            if (!std::isfinite(step)) {
                if (fresh) return Status::Unbounded;
                if (!refactor()) throw Error(ErrorCode::NumericalFailure, "singular basis");
                fresh = true;
                since_refactor = 0;
                continue;
            }
            fresh = false;

            if (step <= 1e-12) {
                if (++degenerate_run > opt_.degenerate_switch) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }

            // Move
            if (step > 0.0) {
                for (std::size_t i = 0; i < m_; ++i) {
                    const double a = T_[i * ncol_ + q];
                    if (a != 0.0) val_[basis_[i]] -= a * dir * step;
                }
                val_[q] += dir * step;
            }
            if (leave == m_) {
                at_upper_[q] = !at_upper_[q];
                val_[q] = at_upper_[q] ? ub_[q] : 0.0;
                continue;
            }
            const std::size_t out = basis_[leave];
            const bool out_upper = leave_alpha < 0.0;
            pivot(leave, q);
            is_basic_[out] = 0;
            at_upper_[out] = out_upper ? 1 : 0;
            val_[out] = out_upper ? ub_[out] : 0.0;
            is_basic_[q] = 1;
            at_upper_[q] = 0;
            basis_[leave] = q;
        }
    }

    void pivot(std::size_t r, std::size_t q) {
        double* prow = &T_[r * ncol_];
        const double inv = 1.0 / prow[q];
        for (std::size_t j = 0; j < ncol_; ++j) prow[j] *= inv;
        prow[q] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &T_[i * ncol_];
            const double f = row[q];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < ncol_; ++j) row[j] -= f * prow[j];
            row[q] = 0.0;
        }
        const double f = d_[q];
        if (f != 0.0) {
            for (std::size_t j = 0; j < ncol_; ++j) d_[j] -= f * prow[j];
            d_[q] = 0.0;
        }
    }

    // Rebuild T = B^{-1} A, the basic values and the reduced costs from the
    // original matrix. Returns false if the basis matrix is singular.
    bool refactor() {
        if (m_ == 0) return false;
        using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const auto m = static_cast<Eigen::Index>(m_), n = static_cast<Eigen::Index>(ncol_);
        Eigen::Map<const RowMat> A(A0_.data(), m, n);
        Eigen::MatrixXd B(m, m);
        for (Eigen::Index c = 0; c < m; ++c) B.col(c) = A.col(static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(c)]));
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        if (!(std::abs(lu.determinant()) > 0.0) || !std::isfinite(lu.determinant())) return false;
        Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), m);
        for (std::size_t j = 0; j < ncol_; ++j)
            if (!is_basic_[j] && val_[j] != 0.0) rhs -= A.col(static_cast<Eigen::Index>(j)) * val_[j];
        RowMat T = lu.solve(Eigen::MatrixXd(A));
        const Eigen::VectorXd y = lu.solve(rhs);
        if (!T.allFinite() || !y.allFinite()) return false;
        std::copy(T.data(), T.data() + T.size(), T_.begin());
        for (std::size_t i = 0; i < m_; ++i) {
            T_[i * ncol_ + basis_[i]] = 1.0;
            val_[basis_[i]] = y(static_cast<Eigen::Index>(i));
        }
        set_costs(cur_cost_);
        return true;
    }

    // Recompute basic values from the original matrix: B y_B = rhs - N y_N.
    void polish() {
        if (m_ == 0) return;
        Eigen::MatrixXd B(m_, m_);
        Eigen::VectorXd rhs(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = rhs_[i];
            for (std::size_t j = 0; j < ncol_; ++j)
                if (!is_basic_[j] && val_[j] != 0.0) acc -= A0_[i * ncol_ + j] * val_[j];
            rhs(static_cast<Eigen::Index>(i)) = acc;
            for (std::size_t c = 0; c < m_; ++c)
                B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = A0_[i * ncol_ + basis_[c]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        if (!lu.isInvertible()) return;
        const Eigen::VectorXd y = lu.solve(rhs);
        double worst_new = 0.0, worst_old = 0.0;
        for (std::size_t c = 0; c < m_; ++c) {
            const std::size_t j = basis_[c];
            const double yn = y(static_cast<Eigen::Index>(c));
            if (!std::isfinite(yn)) return;
            auto viol = [&](double v) { return std::max({0.0, -v, std::isfinite(ub_[j]) ? v - ub_[j] : 0.0}); };
            worst_new = std::max(worst_new, viol(yn));
            worst_old = std::max(worst_old, viol(val_[j]));
        }
        if (worst_new > std::max(worst_old, 1e-9)) return;
        for (std::size_t c = 0; c < m_; ++c) val_[basis_[c]] = y(static_cast<Eigen::Index>(c));
    }
};

}  // namespace detail

inline Result solve(const Problem& prob, const Options& opt = {}) {
    if (prob.cost.empty()) throw Error(ErrorCode::InvalidArgument, "LP needs at least one variable");
    if (prob.lower.size() != prob.cost.size() || prob.upper.size() != prob.cost.size())
        throw Error(ErrorCode::DimensionMismatch, "LP bound vectors must match cost length");
    // Retry with stricter pivoting and more frequent rebuilds on drift.
    Options o = opt;
    for (int attempt = 0;; ++attempt) {
        try {
            detail::DenseSimplex s(prob, o);
            return s.run();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NumericalFailure || attempt == 2) throw;
        }
        o.pivot_tol *= 10.0;
        o.refactor_every = std::max(5L, o.refactor_every / 4);
        o.degenerate_switch = 10;
    }
}

}  // namespace drccp::lp
