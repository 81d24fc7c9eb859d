#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/unitary.hpp"

namespace qcs {

enum class Objective { MinimizeDepth, MinimizeCnot };
enum class DecompositionType { Exact, Approximate };

/// A decomposition request, as read from a problem document.
struct ProblemSpec {
    int num_qubits = 0;
    int maximum_depth = 0;
    /// Gate patterns; entries without explicit angles take them from
    /// angle_grids at presolve time.
    std::vector<GateSpec> elementary_gates;
    Unitary target_gate;
    std::string target_label;  // informational; empty for raw matrices
    Objective objective = Objective::MinimizeDepth;
    DecompositionType decomposition_type = DecompositionType::Exact;
    std::optional<int> cnot_lower_bound;
    std::vector<GateSpec> input_circuit;  // optional warm start
    std::vector<std::complex<double>> phase_candidates{
        {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    double time_limit = 600.0;  // seconds
    unsigned long long rng_seed = 1;

    /// Per-family angle grids keyed "U3_theta", "U3_phi", "U3_lambda",
    /// "Rx", "Ry", "Rz".
    std::vector<std::pair<std::string, std::vector<double>>> angle_grids;

    std::vector<double> grid_for(const std::string& key) const;
};

/// Parsed and validated problem document (JSON, UTF-8). Throws
/// std::invalid_argument with a descriptive message on schema violations,
/// malformed gate labels, non-unitary targets, or maximum_depth < 2.
ProblemSpec parse_spec(const std::string& document_text);
ProblemSpec parse_spec_file(const std::string& path);

/// Canonical internal problem: grids expanded, catalog deduplicated up to
/// global phase and sorted by label, Identity guaranteed present exactly
/// once, pairwise algebraic flags precomputed.
struct PresolvedProblem {
    int num_qubits = 0;
    int depth = 0;
    std::vector<ElementaryGate> gates;  // sorted by label
    Unitary target;
    Objective objective = Objective::MinimizeDepth;
    DecompositionType decomposition_type = DecompositionType::Exact;
    std::optional<int> cnot_lower_bound;
    std::vector<std::complex<double>> phase_candidates;
    double time_limit = 600.0;
    unsigned long long rng_seed = 1;

    bool all_real = false;
    int identity_index = -1;
    /// Warm start as one catalog gate index per depth slot, if the input
    /// circuit was recognized and verified.
    std::optional<std::vector<int>> warm_start_sequence;
    bool emphasize_optimality = false;
    std::vector<std::string> warnings;

    /// pair_flags[i][j] for ordered pairs; single_flags[i] per gate.
    std::vector<std::vector<PairFlags>> pair_flags;
    std::vector<SingleFlags> single_flags;

    bool is_cnot_gate(int gate_index) const;
    /// Matrix product of catalog gates in depth order.
    Unitary product_of(const std::vector<int>& sequence) const;
    /// Re-emit a spec whose gate list is the expanded concrete catalog.
    ProblemSpec as_spec() const;
};

PresolvedProblem presolve(const ProblemSpec& spec);

}  // namespace qcs
