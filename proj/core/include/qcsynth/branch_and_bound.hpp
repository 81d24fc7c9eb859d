#pragma once

#include <optional>
#include <vector>

#include "qcsynth/mip_model.hpp"
#include "qcsynth/simplex.hpp"

namespace qcs {

enum class MIPStatus { Optimal, Infeasible, TimeLimit };
enum class NodeOrder { BestBound, DepthFirst };

/// Absolute optimality gap threshold. The objectives are integer-valued
/// sums of binaries, so any gap below one already proves optimality; the
/// tighter default is kept for safety.
inline constexpr double kGapTol = 1e-6;

struct MIPSolveOptions {
    double time_limit = 1e18;  // seconds
    std::optional<std::vector<int>> warm_start_sequence;
    bool emphasize_optimality = false;
    NodeOrder node_order = NodeOrder::BestBound;
    int workers = 1;
    /// Only solutions strictly below this value are accepted or searched
    /// for; used when scanning phase candidates after a first optimum.
    std::optional<double> objective_cutoff;
};

struct MIPResult {
    MIPStatus status = MIPStatus::Infeasible;
    std::optional<std::vector<double>> assignment;
    double objective = 0.0;    // incumbent objective when present
    double lower_bound = 0.0;  // proven global lower bound
    double gap = 0.0;          // (objective - lower_bound) / max(1, |objective|)
    long nodes = 0;
    long lp_iterations = 0;
    double wall_time = 0.0;
};

/// One branch-and-bound node: bound tightenings relative to the base model.
struct BnBNode {
    std::vector<BoundOverride> overrides;
    double parent_bound = 0.0;
    int depth = 0;
    long id = 0;
};

/// Round a fractional LP point to one gate per depth (arg-max selection
/// binary), then accept only if the exact re-multiplied product matches the
/// model's scaled target within the feasibility tolerance. Returns the full
/// exact assignment on success.
std::optional<std::vector<double>> round_heuristic(const LPResult& lp, const MIPModel& model);

/// Branch-and-bound over the bounded-variable LP relaxation: best-bound
/// node selection by default (depth-first dives while no incumbent exists
/// unless optimality is emphasized), branching on the most fractional
/// selection binary with (depth, gate label) tie-breaking. Terminates with
/// a proven optimum, a proven infeasibility (every node pruned, no
/// incumbent), or the best incumbent plus gap at the time limit.
MIPResult solve_mip(const MIPModel& model, const MIPSolveOptions& options = {});

}  // namespace qcs
