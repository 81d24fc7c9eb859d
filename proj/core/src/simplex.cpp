#include "qcsynth/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace qcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;   // reject tiny pivots
constexpr double kDualTol = 1e-9;    // reduced-cost optimality threshold
constexpr int kRefactorEvery = 100;  // pivots between LU rebuilds
constexpr int kStallWindow = 200;    // degenerate pivots before Bland's rule

enum State : uint8_t { AtLower = 0, AtUpper = 1, Basic = 2 };

struct Eta {
    int r;
    double pivot;  // d[r]
    std::vector<std::pair<int, double>> d;  // sparse entries of the FTRAN'd column
};

}  // namespace

SimplexSolver::SimplexSolver(const MIPModel& model) : model_(model) {
    n_ = static_cast<int>(model.vars.size());
    m_ = static_cast<int>(model.rows.size());
    cols_.assign(n_, {});
    rhs_.resize(m_);
    slack_lb_.resize(m_);
    slack_ub_.resize(m_);
    for (int i = 0; i < m_; ++i) {
        const auto& row = model.rows[i];
        rhs_[i] = row.rhs;
        for (const auto& [v, c] : row.terms)
            if (c != 0.0) cols_[v].emplace_back(i, c);
        switch (row.sense) {
            case RowSense::LessEqual:
                slack_lb_[i] = 0.0;
                slack_ub_[i] = kInf;
                break;
            case RowSense::GreaterEqual:
                slack_lb_[i] = -kInf;
                slack_ub_[i] = 0.0;
                break;
            case RowSense::Equal:
                slack_lb_[i] = 0.0;
                slack_ub_[i] = 0.0;
                break;
        }
    }
    base_lb_.resize(n_);
    base_ub_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        base_lb_[j] = model.vars[j].lb;
        base_ub_[j] = model.vars[j].ub;
    }
}

namespace {

/// Working state for one solve: columns n structural + m slack + m artificial.
struct Tableau {
    int n, m, total;
    const std::vector<std::vector<std::pair<int, double>>>* scols;
    std::vector<double> lb, ub, cost;
    std::vector<double> art_sign;  // +-1 per artificial column
    std::vector<uint8_t> state;
    std::vector<int> basis;      // column index per row
    std::vector<int> basis_pos;  // column -> row position or -1
    std::vector<double> xb;      // basic values, aligned with basis
    std::vector<double> xn;      // nonbasic resting values (by state)

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool lu_good = false;
    std::vector<Eta> etas;

    double value_of(int j) const {
        const int pos = basis_pos[j];
        if (pos >= 0) return xb[pos];
        return state[j] == AtUpper ? ub[j] : lb[j];
    }

    void column_of(int j, std::vector<std::pair<int, double>>& out) const {
        out.clear();
        if (j < n) {
            out = (*scols)[j];
        } else if (j < n + m) {
            out.emplace_back(j - n, 1.0);
        } else {
            out.emplace_back(j - n - m, art_sign[j - n - m]);
        }
    }

    void refactor() {
        Eigen::SparseMatrix<double> B(m, m);
        std::vector<Eigen::Triplet<double>> trips;
        std::vector<std::pair<int, double>> col;
        for (int p = 0; p < m; ++p) {
            column_of(basis[p], col);
            for (const auto& [r, v] : col) trips.emplace_back(r, p, v);
        }
        B.setFromTriplets(trips.begin(), trips.end());
        lu.compute(B);
        lu_good = lu.info() == Eigen::Success;
        etas.clear();
    }

    // y := B^{-1} v for dense v (overwritten).
    void ftran(Eigen::VectorXd& v) const {
        Eigen::VectorXd y = lu.solve(v);
        for (const auto& e : etas) {
            const double t = y[e.r] / e.pivot;
            if (t != 0.0) {
                for (const auto& [i, di] : e.d) y[i] -= di * t;
            }
            y[e.r] += t;
        }
        v = std::move(y);
    }

    // y := B^{-T} v.
    void btran(Eigen::VectorXd& v) const {
        for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
            double dot = 0.0;
            for (const auto& [i, di] : it->d) dot += di * v[i];
            v[it->r] -= (dot - v[it->r]) / it->pivot;
        }
        Eigen::VectorXd y = lu.transpose().solve(v);
        v = std::move(y);
    }

    // Recompute xb = B^{-1} (b - N x_N) from scratch.
    void recompute_basics(const std::vector<double>& rhs) {
        Eigen::VectorXd r(m);
        for (int i = 0; i < m; ++i) r[i] = rhs[i];
        std::vector<std::pair<int, double>> col;
        for (int j = 0; j < total; ++j) {
            if (basis_pos[j] >= 0) continue;
            const double v = state[j] == AtUpper ? ub[j] : lb[j];
            if (v == 0.0) continue;
            column_of(j, col);
            for (const auto& [i, c] : col) r[i] -= c * v;
        }
        ftran(r);
        for (int p = 0; p < m; ++p) xb[p] = r[p];
    }
};

}  // namespace

LPResult SimplexSolver::solve(const std::vector<BoundOverride>& overrides) {
    std::vector<double> lb = base_lb_, ub = base_ub_;
    for (const auto& o : overrides) {
        lb[o.var] = std::max(lb[o.var], o.lb);
        ub[o.var] = std::min(ub[o.var], o.ub);
    }
    return solve_with_bounds(lb, ub);
}

LPResult SimplexSolver::solve_with_bounds(const std::vector<double>& slb,
                                          const std::vector<double>& sub) {
    LPResult res;
    for (int j = 0; j < n_; ++j)
        if (slb[j] > sub[j] + kLpTol) {
            res.status = LPStatus::Infeasible;
            return res;
        }

    Tableau t;
    t.n = n_;
    t.m = m_;
    t.total = n_ + 2 * m_;
    t.scols = &cols_;
    t.lb.assign(t.total, 0.0);
    t.ub.assign(t.total, 0.0);
    t.cost.assign(t.total, 0.0);
    t.art_sign.assign(m_, 1.0);
    t.state.assign(t.total, AtLower);
    t.basis_pos.assign(t.total, -1);
    for (int j = 0; j < n_; ++j) {
        t.lb[j] = slb[j];
        t.ub[j] = sub[j];
        // Rest at the bound of smaller magnitude for better conditioning;
        // ties go to the lower bound for determinism.
        t.state[j] = std::abs(sub[j]) < std::abs(slb[j]) ? AtUpper : AtLower;
        if (slb[j] == -kInf) t.state[j] = AtUpper;
        if (sub[j] == kInf) t.state[j] = AtLower;
    }
    for (int i = 0; i < m_; ++i) {
        t.lb[n_ + i] = slack_lb_[i];
        t.ub[n_ + i] = slack_ub_[i];
        t.state[n_ + i] = slack_lb_[i] == -kInf ? AtUpper : AtLower;
    }

    // Initial residuals decide artificial signs; artificials form the basis.
    std::vector<double> resid = rhs_;
    for (int j = 0; j < n_ + m_; ++j) {
        const double v = t.state[j] == AtUpper ? t.ub[j] : t.lb[j];
        if (v == 0.0) continue;
        if (j < n_) {
            for (const auto& [i, c] : cols_[j]) resid[i] -= c * v;
        } else {
            resid[j - n_] -= v;
        }
    }
    t.basis.resize(m_);
    t.xb.resize(m_);
    for (int i = 0; i < m_; ++i) {
        t.art_sign[i] = resid[i] >= 0 ? 1.0 : -1.0;
        const int aj = n_ + m_ + i;
        t.lb[aj] = 0.0;
        t.ub[aj] = kInf;
        t.basis[i] = aj;
        t.basis_pos[aj] = i;
        t.state[aj] = Basic;
        t.xb[i] = std::abs(resid[i]);
    }
    t.refactor();
    if (!t.lu_good) {
        res.status = LPStatus::Stalled;
        return res;
    }

    const double b_scale = 1.0 + [&] {
        double mx = 0.0;
        for (double b : rhs_) mx = std::max(mx, std::abs(b));
        return mx;
    }();

    long iters = 0;
    auto run_phase = [&](bool phase1) -> LPStatus {
        int stall = 0;
        bool bland = false;
        Eigen::VectorXd pi(m_), ycol(m_);
        std::vector<std::pair<int, double>> col;
        while (true) {
            ++iters;
            if (iters > 50L * (t.total + m_) + 20000L) return LPStatus::Stalled;
            if (deadline_ && (iters & 255) == 0 &&
                std::chrono::steady_clock::now() >= *deadline_)
                return LPStatus::Aborted;

            // Reduced costs via BTRAN.
            for (int p = 0; p < m_; ++p) pi[p] = t.cost[t.basis[p]];
            t.btran(pi);

            int enter = -1;
            double best_score = 0.0;
            bool enter_from_lower = true;
            for (int j = 0; j < t.total; ++j) {
                if (t.basis_pos[j] >= 0) continue;
                if (t.lb[j] == t.ub[j]) continue;  // fixed
                double dj = t.cost[j];
                if (j < n_) {
                    for (const auto& [i, c] : cols_[j]) dj -= pi[i] * c;
                } else if (j < n_ + m_) {
                    dj -= pi[j - n_];
                } else {
                    dj -= pi[j - n_ - m_] * t.art_sign[j - n_ - m_];
                }
                const bool at_lower = t.state[j] == AtLower;
                double score = 0.0;
                if (at_lower && dj < -kDualTol) score = -dj;
                else if (!at_lower && dj > kDualTol) score = dj;
                else continue;
                if (bland) {
                    enter = j;
                    enter_from_lower = at_lower;
                    break;
                }
                if (score > best_score + 1e-15) {
                    best_score = score;
                    enter = j;
                    enter_from_lower = at_lower;
                }
            }
            if (enter < 0) return LPStatus::Optimal;

            t.column_of(enter, col);
            ycol.setZero(m_);
            for (const auto& [i, c] : col) ycol[i] = c;
            t.ftran(ycol);

            // Entering moves by step >= 0; from the lower bound it increases
            // (sign +1), from the upper it decreases (sign -1). Basic values
            // change by -sign * step * y.
            const double sgn = enter_from_lower ? 1.0 : -1.0;
            double limit = t.ub[enter] - t.lb[enter];  // bound flip
            int leave_pos = -1;
            double leave_pivot = 0.0;
            bool leave_to_upper = false;
            for (int p = 0; p < m_; ++p) {
                const double y = ycol[p];
                if (std::abs(y) < kPivotTol) continue;
                const int bj = t.basis[p];
                const double delta = -sgn * y;  // x_B[p] += delta * step
                double cap;
                bool to_upper;
                if (delta > 0) {
                    if (t.ub[bj] == kInf) continue;
                    cap = (t.ub[bj] - t.xb[p]) / delta;
                    to_upper = true;
                } else {
                    if (t.lb[bj] == -kInf) continue;
                    cap = (t.lb[bj] - t.xb[p]) / delta;
                    to_upper = false;
                }
                if (cap < 0.0) cap = 0.0;  // numerical dust on a bound
                // Strictly smaller cap wins; among near-ties prefer the
                // larger pivot magnitude for stability (positions ascending,
                // so the choice is deterministic).
                const bool take = cap < limit - 1e-12 ||
                                  (leave_pos >= 0 && cap <= limit + 1e-12 &&
                                   std::abs(y) > std::abs(leave_pivot) + 1e-12);
                if (take) {
                    limit = std::min(limit, cap);
                    leave_pos = p;
                    leave_pivot = y;
                    leave_to_upper = to_upper;
                }
            }

            if (leave_pos < 0 && limit == kInf) {
                return phase1 ? LPStatus::Stalled : LPStatus::Unbounded;
            }

            // Apply the step.
            const double step = limit;
            if (step > 0) {
                for (int p = 0; p < m_; ++p) {
                    const double y = ycol[p];
                    if (y != 0.0) t.xb[p] -= sgn * step * y;
                }
                stall = 0;
                bland = false;
            } else if (++stall > kStallWindow) {
                bland = true;
            }

            if (leave_pos < 0) {
                // Bound flip: no basis change.
                t.state[enter] = enter_from_lower ? AtUpper : AtLower;
                continue;
            }

            const int leave = t.basis[leave_pos];
            t.state[leave] = leave_to_upper ? AtUpper : AtLower;
            t.basis_pos[leave] = -1;
            t.basis[leave_pos] = enter;
            t.basis_pos[enter] = leave_pos;
            t.state[enter] = Basic;
            t.xb[leave_pos] = (enter_from_lower ? t.lb[enter] : t.ub[enter]) + sgn * step;

            Eta eta;
            eta.r = leave_pos;
            eta.pivot = ycol[leave_pos];
            for (int i = 0; i < m_; ++i)
                if (ycol[i] != 0.0) eta.d.emplace_back(i, ycol[i]);
            t.etas.push_back(std::move(eta));

            if (static_cast<int>(t.etas.size()) >= kRefactorEvery) {
                t.refactor();
                if (!t.lu_good) return LPStatus::Stalled;
                t.recompute_basics(rhs_);
            }
        }
    };

    // Phase 1: minimize total artificial mass.
    for (int i = 0; i < m_; ++i) t.cost[n_ + m_ + i] = 1.0;
    LPStatus st = run_phase(true);
    if (st == LPStatus::Stalled || st == LPStatus::Aborted) {
        res.status = st;
        res.iterations = iters;
        total_iterations_ += iters;
        return res;
    }
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas += t.value_of(n_ + m_ + i);
    if (infeas > kLpTol * b_scale) {
        res.status = LPStatus::Infeasible;
        res.iterations = iters;
        total_iterations_ += iters;
        return res;
    }

    // Phase 2: pin artificials at zero, restore the real objective.
    for (int i = 0; i < m_; ++i) {
        const int aj = n_ + m_ + i;
        t.cost[aj] = 0.0;
        t.lb[aj] = 0.0;
        t.ub[aj] = 0.0;
    }
    for (int j = 0; j < n_; ++j) t.cost[j] = model_.objective[j];
    st = run_phase(false);
    res.iterations = iters;
    total_iterations_ += iters;
    if (st != LPStatus::Optimal) {
        res.status = st;
        return res;
    }

    // Final cleanup solve for accuracy, then extract.
    t.refactor();
    if (t.lu_good) t.recompute_basics(rhs_);
    res.x.resize(n_);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) {
        double v = t.value_of(j);
        v = std::min(std::max(v, slb[j]), sub[j]);
        res.x[j] = v;
        obj += model_.objective[j] * v;
    }
    res.objective = obj;
    res.status = LPStatus::Optimal;
    return res;
}

LPResult solve_lp(const MIPModel& model, const std::vector<BoundOverride>& overrides) {
    SimplexSolver solver(model);
    return solver.solve(overrides);
}

}  // namespace qcs
