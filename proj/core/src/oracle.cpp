#include "qcsynth/oracle.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

namespace qcs {

namespace {

struct LeafCheck {
    double residual = 1e30;
    int candidate = -1;  // first candidate within tolerance, else best
};

LeafCheck check_leaf(const Unitary& product, const std::vector<Unitary>& scaled_targets) {
    LeafCheck out;
    for (size_t c = 0; c < scaled_targets.size(); ++c) {
        const double r = product.max_abs_diff(scaled_targets[c]);
        if (r < out.residual) {
            out.residual = r;
            out.candidate = static_cast<int>(c);
        }
        if (r < kFeasTol) {
            out.residual = r;
            out.candidate = static_cast<int>(c);
            break;
        }
    }
    return out;
}

struct WorkerOut {
    bool found = false;
    std::vector<int> seq;
    double objective = 0.0;
    int candidate = 0;
    long long tried = 0;
};

}  // namespace

OracleResult enumerate_exhaustive(const PresolvedProblem& p, int max_depth, int workers) {
    const int ng = static_cast<int>(p.gates.size());
    if (ng == 0) throw std::invalid_argument("enumerate_exhaustive: empty gate catalog");
    const double budget = std::pow(static_cast<double>(ng), max_depth);
    if (budget > kEnumerationGuard)
        throw std::invalid_argument(
            "enumerate_exhaustive: budget " + std::to_string(budget) + " sequences exceeds the guard limit " +
            std::to_string(kEnumerationGuard));

    std::vector<Unitary> scaled;
    for (const auto& c : p.phase_candidates) scaled.push_back(p.target * c);
    std::vector<const Unitary*> mats;
    for (const auto& g : p.gates) mats.push_back(&g.lifted);

    const bool min_cnot = p.objective == Objective::MinimizeCnot;

    auto gate_cost = [&](int g) {
        if (min_cnot) return p.is_cnot_gate(g) ? 1 : 0;
        return g == p.identity_index ? 0 : 1;
    };

    OracleResult result;
    // best-so-far for minimize_cnot across depths
    bool have_best = false;
    double best_obj = 0.0;
    std::vector<int> best_seq;
    int best_cand = 0;

    for (int depth = 1; depth <= max_depth; ++depth) {
        const int nthreads = std::max(1, std::min(workers, ng));
        std::vector<WorkerOut> outs(nthreads);
        auto run_worker = [&](int w, WorkerOut& out) {
            std::vector<int> seq(depth, 0);
            // Depth-first with prefix products reused across siblings.
            std::vector<Unitary> prefix(depth + 1);
            prefix[0] = Unitary::identity(1 << p.num_qubits);
            std::function<bool(int)> dfs = [&](int pos) -> bool {
                const int lo = pos == 0 ? w : 0;
                const int step = pos == 0 ? nthreads : 1;
                for (int g = lo; g < ng; g += step) {
                    seq[pos] = g;
                    prefix[pos + 1] = prefix[pos] * *mats[g];
                    if (pos + 1 == depth) {
                        ++out.tried;
                        const LeafCheck leaf = check_leaf(prefix[pos + 1], scaled);
                        if (leaf.residual < kFeasTol) {
                            double obj = 0.0;
                            for (int gg : seq) obj += gate_cost(gg);
                            if (!min_cnot) {
                                out.found = true;
                                out.seq = seq;
                                out.objective = obj;
                                out.candidate = leaf.candidate;
                                return true;  // first match in lexicographic order
                            }
                            if (!out.found || obj < out.objective ||
                                (obj == out.objective && seq < out.seq)) {
                                out.found = true;
                                out.seq = seq;
                                out.objective = obj;
                                out.candidate = leaf.candidate;
                            }
                        }
                    } else {
                        if (dfs(pos + 1)) return true;
                    }
                }
                return false;
            };
            dfs(0);
        };
        if (nthreads == 1) {
            run_worker(0, outs[0]);
        } else {
            std::vector<std::thread> threads;
            for (int w = 0; w < nthreads; ++w)
                threads.emplace_back([&, w] { run_worker(w, outs[w]); });
            for (auto& t : threads) t.join();
        }
        // Merge preserving (depth, lexicographic) determinism.
        for (const auto& out : outs) result.sequences_tried += out.tried;
        const WorkerOut* chosen = nullptr;
        for (const auto& out : outs) {
            if (!out.found) continue;
            if (!chosen || out.objective < chosen->objective ||
                (out.objective == chosen->objective && out.seq < chosen->seq))
                chosen = &out;
        }
        if (chosen) {
            if (!min_cnot) {
                result.feasible = true;
                result.sequence = chosen->seq;
                result.objective = chosen->objective;
                result.phase = p.phase_candidates[chosen->candidate];
                return result;
            }
            if (!have_best || chosen->objective < best_obj ||
                (chosen->objective == best_obj && chosen->seq.size() < best_seq.size())) {
                have_best = true;
                best_obj = chosen->objective;
                best_seq = chosen->seq;
                best_cand = chosen->candidate;
            }
        }
    }
    if (have_best) {
        result.feasible = true;
        result.sequence = best_seq;
        result.objective = best_obj;
        result.phase = p.phase_candidates[best_cand];
    }
    return result;
}

OracleResult enumerate_random(const PresolvedProblem& p, int max_depth,
                              const RandomSearchOptions& options) {
    if (options.time_limit <= 0 && !options.max_tries)
        throw std::invalid_argument("enumerate_random: time limit must be positive");
    const int ng = static_cast<int>(p.gates.size());
    std::vector<Unitary> scaled;
    for (const auto& c : p.phase_candidates) scaled.push_back(p.target * c);

    const bool min_cnot = p.objective == Objective::MinimizeCnot;
    auto gate_cost = [&](int g) {
        if (min_cnot) return p.is_cnot_gate(g) ? 1 : 0;
        return g == p.identity_index ? 0 : 1;
    };

    std::mt19937_64 rng(options.seed);
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(options.time_limit);

    OracleResult result;
    result.best_residual = 1e30;
    std::vector<int> seq(max_depth);
    while (true) {
        if (options.max_tries && result.sequences_tried >= *options.max_tries) break;
        if ((result.sequences_tried & 15) == 0 &&
            std::chrono::steady_clock::now() >= deadline)
            break;
        for (int d = 0; d < max_depth; ++d)
            seq[d] = static_cast<int>(rng() % static_cast<unsigned long long>(ng));
        Unitary prod = p.gates[seq[0]].lifted;
        for (int d = 1; d < max_depth; ++d) prod = prod * p.gates[seq[d]].lifted;
        ++result.sequences_tried;
        const LeafCheck leaf = check_leaf(prod, scaled);
        if (leaf.residual < result.best_residual) {
            result.best_residual = leaf.residual;
            result.best_residual_sequence = seq;
        }
        if (leaf.residual < kFeasTol) {
            double obj = 0.0;
            for (int g : seq) obj += gate_cost(g);
            if (!result.feasible || obj < result.objective) {
                result.feasible = true;
                result.sequence = seq;
                result.objective = obj;
                result.phase = p.phase_candidates[leaf.candidate];
            }
        }
    }
    return result;
}

}  // namespace qcs
