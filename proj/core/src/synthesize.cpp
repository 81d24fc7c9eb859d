#include "qcsynth/synthesize.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "qcsynth/formulation.hpp"
#include "qcsynth/oracle.hpp"

namespace qcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Decomposition synthesize(const PresolvedProblem& p, const SynthesisOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const double total_limit = options.time_limit.value_or(p.time_limit);
    auto remaining = [&] {
        return total_limit -
               std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    Decomposition best;
    best.status = SolveStatus::Infeasible;
    best.lower_bound = kInf;
    bool any_timeout = false;
    bool have_best = false;
    std::optional<MIPResult> best_mip;
    std::optional<MIPModel> best_model;

    for (const auto& phase : p.phase_candidates) {
        // A real-arithmetic chain can never equal a non-real scaled target.
        if (p.all_real && std::abs(phase.imag()) > kUnitTol) continue;

        FormulationOptions fopts;
        fopts.phase = phase;
        fopts.valid_inequalities = options.valid_inequalities;
        fopts.objective_override = options.objective_override;
        MIPModel model = build_model(p, fopts);

        MIPSolveOptions sopts;
        sopts.time_limit = std::max(0.0, remaining());
        sopts.warm_start_sequence = p.warm_start_sequence;
        sopts.emphasize_optimality = p.emphasize_optimality;
        sopts.node_order = options.node_order;
        sopts.workers = options.workers;
        if (have_best) sopts.objective_cutoff = best.objective;

        const MIPResult r = solve_mip(model, sopts);
        if (r.status == MIPStatus::TimeLimit) any_timeout = true;
        if (r.assignment) {
            // With a cutoff installed, any incumbent here is strictly better
            // than the previous best.
            have_best = true;
            best_mip = r;
            best_model = std::move(model);
            if (r.objective < 0.5) break;  // objectives are nonnegative integers
        }
        if (remaining() <= 0) {
            any_timeout = true;
            break;
        }
    }

    const Objective effective_objective = options.objective_override.value_or(p.objective);
    long total_nodes = best_mip ? best_mip->nodes : 0;

    if (have_best) {
        best = extract_circuit(*best_model, *best_mip->assignment, p);
        const VerifyOutcome v =
            verify_circuit(best.circuit, p.target, p.num_qubits, p.phase_candidates);
        best.verified = v.ok;
        best.verification_residual = v.residual;
        best.phase = v.phase;
        best.status = (best_mip->status == MIPStatus::Optimal && !any_timeout)
                          ? SolveStatus::Optimal
                          : (best_mip->status == MIPStatus::Optimal ? SolveStatus::Optimal
                                                                    : SolveStatus::TimeLimit);
        best.gap = best_mip->gap;
        best.lower_bound = best_mip->lower_bound;
        best.nodes = best_mip->nodes;
    } else {
        best.status = any_timeout ? SolveStatus::TimeLimit : SolveStatus::Infeasible;
        best.gap = any_timeout ? kInf : 0.0;
        best.lower_bound = any_timeout ? 0.0 : kInf;
    }

    // Approximate mode: if no exact decomposition emerged, report the best
    // circuit randomized search can reach in the remaining budget, with its
    // residual disclosed.
    if (p.decomposition_type == DecompositionType::Approximate && !have_best) {
        RandomSearchOptions ropts;
        ropts.time_limit = std::max(1.0, remaining());
        ropts.seed = p.rng_seed;
        const OracleResult r = enumerate_random(p, p.depth, ropts);
        const auto& seq = r.feasible ? r.sequence : r.best_residual_sequence;
        if (!seq.empty()) {
            best.circuit.clear();
            best.cnot_count = 0;
            for (int g : seq) {
                if (g == p.identity_index) continue;
                best.circuit.push_back(p.gates[g].spec);
                if (p.is_cnot_gate(g)) ++best.cnot_count;
            }
            best.depth = static_cast<int>(best.circuit.size());
            best.compressed_depth = compressed_depth(best.circuit, p.num_qubits);
            const VerifyOutcome v =
                verify_circuit(best.circuit, p.target, p.num_qubits, p.phase_candidates);
            best.verified = v.ok;
            best.verification_residual = v.residual;
            best.phase = v.phase;
            double obj = 0.0;
            for (int g : seq) {
                const bool counted = effective_objective == Objective::MinimizeDepth
                                         ? g != p.identity_index
                                         : p.is_cnot_gate(g);
                if (counted) obj += 1.0;
            }
            best.objective = obj;
            best.notes.push_back("approximate fallback: best circuit from randomized search after " +
                                 std::to_string(r.sequences_tried) + " draws, residual " +
                                 std::to_string(v.residual));
        }
    }

    for (const auto& w : p.warnings) best.notes.push_back(w);
    best.nodes = total_nodes;
    best.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return best;
}

Decomposition synthesize(const ProblemSpec& spec, const SynthesisOptions& options) {
    return synthesize(presolve(spec), options);
}

}  // namespace qcs
