#pragma once

#include <complex>
#include <optional>

#include "qcsynth/mip_model.hpp"
#include "qcsynth/problem.hpp"

namespace qcs {

struct FormulationOptions {
    std::complex<double> phase{1.0, 0.0};
    bool valid_inequalities = true;
    std::optional<Objective> objective_override;
};

/// Allocate all variables (selection binaries, cumulative-product entries,
/// McCormick auxiliaries) with their bounds; no rows yet.
MIPModel allocate_variables(const PresolvedProblem& p, std::complex<double> phase);

/// One row per depth: the selected-gate binaries sum to one.
int build_selection_constraints(MIPModel& model);

/// Linear depth-1 seeding (G_0 = I), recursive interior products with exact
/// [-1,1] x {0,1} McCormick envelopes, and terminal rows equating the chain
/// to phase * target.
int build_product_chain(MIPModel& model);

/// Minimize non-identity placements (depth) or CNot-class placements.
/// Throws if minimize_cnot is requested with no CNot gate in the catalog.
void build_objective(MIPModel& model, Objective which);

/// Symmetry-breaking rows from the precomputed pair flags: commuting pairs
/// (one canonical order kept), involutory and idempotent self-successions,
/// and redundant gate pairs whose product is itself native. Returns the
/// number of rows added.
int add_valid_inequalities(MIPModel& model, const PresolvedProblem& p);

/// Require at least `bound` CNot-class placements. A zero bound adds
/// nothing; a bound exceeding the depth marks the model pre-infeasible.
int add_cnot_bound(MIPModel& model, int bound);

/// Complete model for one phase candidate.
MIPModel build_model(const PresolvedProblem& p, const FormulationOptions& opts = {});

}  // namespace qcs
