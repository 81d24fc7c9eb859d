#include "qcsynth/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace qcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-6;

bool sequence_product_matches(const MIPModel& model, const std::vector<int>& seq) {
    const VariableMap& m = model.map;
    Unitary p = Unitary::identity(m.dim);
    for (int g : seq) p = p * m.gate_matrices[g];
    return p.max_abs_diff(m.target_scaled) < kFeasTol;
}

double sequence_objective(const MIPModel& model, const std::vector<int>& seq) {
    const VariableMap& m = model.map;
    double obj = 0.0;
    for (int d = 1; d <= m.depth; ++d) obj += model.objective[m.z_var(seq[d - 1], d)];
    return obj;
}

}  // namespace

std::optional<std::vector<double>> round_heuristic(const LPResult& lp, const MIPModel& model) {
    if (lp.status != LPStatus::Optimal) return std::nullopt;
    const VariableMap& m = model.map;
    std::vector<int> seq(m.depth);
    for (int d = 1; d <= m.depth; ++d) {
        int best = 0;
        double best_v = -1.0;
        for (int g = 0; g < m.num_gates; ++g) {
            const double v = lp.x[m.z_var(g, d)];
            if (v > best_v + 1e-12) {
                best_v = v;
                best = g;
            }
        }
        seq[d - 1] = best;
    }
    if (!sequence_product_matches(model, seq)) return std::nullopt;
    return assignment_from_sequence(model, seq);
}

namespace {

struct SharedState {
    std::mutex mtx;
    std::condition_variable cv;

    std::map<long, BnBNode> open;                 // id -> node
    std::multiset<std::pair<double, long>> open_bounds;
    std::multiset<double> in_flight_bounds;
    long next_id = 0;
    int in_flight = 0;
    bool done = false;
    bool timed_out = false;
    std::optional<std::string> failure;

    std::optional<std::vector<double>> incumbent;
    double incumbent_obj = kInf;
    double global_lb = -kInf;
    long nodes = 0;
    long lp_iterations = 0;

    double current_lb_locked() const {
        double lb = kInf;
        if (!open_bounds.empty()) lb = std::min(lb, open_bounds.begin()->first);
        if (!in_flight_bounds.empty()) lb = std::min(lb, *in_flight_bounds.begin());
        return lb;
    }
};

class Search {
public:
    Search(const MIPModel& model, const MIPSolveOptions& options)
        : model_(model), options_(options) {
        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::duration<double>(std::min(options.time_limit, 1e17));
        cutoff_ = options.objective_cutoff.value_or(kInf);
    }

    MIPResult run();

private:
    double effective_cutoff_locked() const { return std::min(st_.incumbent_obj, cutoff_); }

    double lift_bound(double lp_obj) const {
        // Integer-valued objectives admit rounding the LP bound up.
        if (model_.objective_integral) return std::ceil(lp_obj - kIntTol);
        return lp_obj;
    }

    bool prunable_locked(double bound) const {
        const double cut = effective_cutoff_locked();
        if (cut == kInf) return false;
        if (model_.objective_integral) return bound >= cut - 1e-9;
        return bound >= cut - kGapTol;
    }

    void try_install_incumbent_locked(std::vector<double> assignment, double obj) {
        if (obj < st_.incumbent_obj - 1e-12 && obj < cutoff_ - 1e-12) {
            st_.incumbent_obj = obj;
            st_.incumbent = std::move(assignment);
        }
    }

    std::optional<BnBNode> pop_locked() {
        if (st_.open.empty()) return std::nullopt;
        long id;
        const bool dive = options_.node_order == NodeOrder::DepthFirst ||
                          (!options_.emphasize_optimality && !st_.incumbent.has_value());
        if (dive) {
            id = st_.open.rbegin()->first;  // most recent: depth-first dive
        } else {
            id = st_.open_bounds.begin()->second;  // best bound
        }
        auto it = st_.open.find(id);
        BnBNode node = std::move(it->second);
        st_.open.erase(it);
        st_.open_bounds.erase(st_.open_bounds.find({node.parent_bound, id}));
        st_.in_flight_bounds.insert(node.parent_bound);
        ++st_.in_flight;
        return node;
    }

    void push_locked(BnBNode node) {
        node.id = st_.next_id++;
        st_.open_bounds.insert({node.parent_bound, node.id});
        st_.open.emplace(node.id, std::move(node));
    }

    void worker(SimplexSolver& solver);
    void process_node(SimplexSolver& solver, const BnBNode& node);

    const MIPModel& model_;
    const MIPSolveOptions& options_;
    std::chrono::steady_clock::time_point deadline_;
    double cutoff_ = kInf;
    SharedState st_;
};

void Search::process_node(SimplexSolver& solver, const BnBNode& node) {
    LPResult lp = solver.solve(node.overrides);
    {
        std::lock_guard<std::mutex> lk(st_.mtx);
        st_.lp_iterations += lp.iterations;
        ++st_.nodes;
    }
    switch (lp.status) {
        case LPStatus::Aborted: {
            std::lock_guard<std::mutex> lk(st_.mtx);
            st_.timed_out = true;
            // Keep the node's bound alive for honest gap reporting.
            BnBNode back = node;
            push_locked(std::move(back));
            return;
        }
        case LPStatus::Infeasible:
            return;  // pruned by infeasibility
        case LPStatus::Unbounded:
        case LPStatus::Stalled:
            throw std::runtime_error(
                "LP relaxation failed (" +
                std::string(lp.status == LPStatus::Unbounded ? "unbounded" : "numerical stall") +
                ") at node " + std::to_string(node.id) + " after " +
                std::to_string(lp.iterations) + " iterations");
        case LPStatus::Optimal:
            break;
    }

    const double bound = lift_bound(lp.objective);

    // Fractionality scan over the selection binaries.
    int branch_var = -1;
    double best_frac = kIntTol;
    for (size_t j = 0; j < model_.vars.size(); ++j) {
        if (model_.vars[j].kind != VarKind::Binary) continue;
        const double v = lp.x[j];
        const double frac = std::abs(v - std::round(v));
        if (frac > best_frac + 1e-12) {
            best_frac = frac;
            branch_var = static_cast<int>(j);
        }
    }

    std::lock_guard<std::mutex> lk(st_.mtx);
    if (prunable_locked(bound)) return;

    if (branch_var < 0) {
        // Integral point: re-derive the exact circuit and its objective; the
        // LP merely suggested it, the algebra must confirm it.
        std::vector<int> seq;
        try {
            seq = sequence_from_assignment(model_, lp.x, 1e-4);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("integral LP failed extraction: ") + e.what());
        }
        if (!sequence_product_matches(model_, seq)) {
            throw std::runtime_error(
                "integral LP point fails exact verification at node " + std::to_string(node.id) +
                "; the relaxation is numerically inconsistent");
        }
        try_install_incumbent_locked(assignment_from_sequence(model_, seq),
                                     sequence_objective(model_, seq));
        return;
    }

    // Rounding heuristic: cheap incumbent candidates along the way.
    if (auto rounded = round_heuristic(lp, model_)) {
        const double obj = objective_value(model_, *rounded);
        try_install_incumbent_locked(std::move(*rounded), obj);
        if (prunable_locked(bound)) return;
    }

    BnBNode one, zero;
    one.overrides = node.overrides;
    one.overrides.push_back({branch_var, 1.0, 1.0});
    one.parent_bound = bound;
    one.depth = node.depth + 1;
    zero.overrides = node.overrides;
    zero.overrides.push_back({branch_var, 0.0, 0.0});
    zero.parent_bound = bound;
    zero.depth = node.depth + 1;
    // Pushed zero-then-one so depth-first dives explore the selected gate
    // first.
    push_locked(std::move(zero));
    push_locked(std::move(one));
}

void Search::worker(SimplexSolver& solver) {
    solver.set_deadline(deadline_);
    while (true) {
        std::optional<BnBNode> node;
        {
            std::unique_lock<std::mutex> lk(st_.mtx);
            st_.cv.wait(lk, [&] {
                return st_.done || st_.failure || !st_.open.empty() || st_.in_flight == 0;
            });
            if (st_.done || st_.failure) return;
            if (st_.timed_out && !st_.open.empty()) {
                st_.done = true;
                st_.cv.notify_all();
                return;
            }
            node = pop_locked();
            if (!node) {
                if (st_.in_flight == 0) {
                    st_.done = true;
                    st_.cv.notify_all();
                }
                return;
            }
            // Re-check the stored bound against the current incumbent.
            if (prunable_locked(node->parent_bound)) {
                st_.in_flight_bounds.erase(st_.in_flight_bounds.find(node->parent_bound));
                --st_.in_flight;
                st_.cv.notify_all();
                continue;
            }
        }
        try {
            process_node(solver, *node);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lk(st_.mtx);
            st_.failure = e.what();
            st_.cv.notify_all();
            return;
        }
        {
            std::lock_guard<std::mutex> lk(st_.mtx);
            st_.in_flight_bounds.erase(st_.in_flight_bounds.find(node->parent_bound));
            --st_.in_flight;
            st_.global_lb = std::max(st_.global_lb, std::min(st_.current_lb_locked(),
                                                             effective_cutoff_locked()));
            if (std::chrono::steady_clock::now() >= deadline_) st_.timed_out = true;
            st_.cv.notify_all();
        }
    }
}

MIPResult Search::run() {
    const auto start = std::chrono::steady_clock::now();
    MIPResult res;

    if (model_.pre_infeasible) {
        res.status = MIPStatus::Infeasible;
        res.lower_bound = kInf;
        return res;
    }

    // Warm start installs an incumbent before the root solve.
    if (options_.warm_start_sequence) {
        const auto& seq = *options_.warm_start_sequence;
        if (static_cast<int>(seq.size()) == model_.map.depth &&
            sequence_product_matches(model_, seq)) {
            std::lock_guard<std::mutex> lk(st_.mtx);
            try_install_incumbent_locked(assignment_from_sequence(model_, seq),
                                         sequence_objective(model_, seq));
        }
    }

    {
        std::lock_guard<std::mutex> lk(st_.mtx);
        BnBNode root;
        root.parent_bound = -kInf;
        push_locked(std::move(root));
    }

    const int workers = std::max(1, options_.workers);
    if (workers == 1) {
        SimplexSolver solver(model_);
        worker(solver);
        // Single worker drains the pool itself; loop until settled.
        while (!st_.done && !st_.failure && !st_.open.empty() && !st_.timed_out) worker(solver);
    } else {
        std::vector<std::unique_ptr<SimplexSolver>> solvers;
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) solvers.push_back(std::make_unique<SimplexSolver>(model_));
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([this, &solvers, w] {
                while (true) {
                    worker(*solvers[w]);
                    std::lock_guard<std::mutex> lk(st_.mtx);
                    if (st_.done || st_.failure || (st_.open.empty() && st_.in_flight == 0) ||
                        st_.timed_out)
                        break;
                }
                std::lock_guard<std::mutex> lk(st_.mtx);
                st_.done = st_.done || (st_.open.empty() && st_.in_flight == 0);
                st_.cv.notify_all();
            });
        for (auto& th : threads) th.join();
    }

    if (st_.failure) throw std::runtime_error(*st_.failure);

    res.nodes = st_.nodes;
    res.lp_iterations = st_.lp_iterations;
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool exhausted = st_.open.empty() && st_.in_flight == 0;
    if (st_.incumbent) {
        res.assignment = st_.incumbent;
        res.objective = st_.incumbent_obj;
        if (exhausted) {
            res.status = MIPStatus::Optimal;
            res.lower_bound = st_.incumbent_obj;
            res.gap = 0.0;
        } else {
            res.status = MIPStatus::TimeLimit;
            res.lower_bound = std::max(st_.global_lb, model_.objective_integral ? 0.0 : -kInf);
            res.gap = (res.objective - res.lower_bound) / std::max(1.0, std::abs(res.objective));
        }
    } else if (exhausted) {
        res.status = MIPStatus::Infeasible;
        res.lower_bound = kInf;
    } else {
        res.status = MIPStatus::TimeLimit;
        res.lower_bound = std::max(st_.global_lb, 0.0);
        res.gap = kInf;
    }
    return res;
}

}  // namespace

MIPResult solve_mip(const MIPModel& model, const MIPSolveOptions& options) {
    Search search(model, options);
    return search.run();
}

}  // namespace qcs
