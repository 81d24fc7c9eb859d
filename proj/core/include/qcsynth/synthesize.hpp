#pragma once

#include <optional>

#include "qcsynth/branch_and_bound.hpp"
#include "qcsynth/postprocess.hpp"
#include "qcsynth/problem.hpp"

namespace qcs {

struct SynthesisOptions {
    bool valid_inequalities = true;
    std::optional<Objective> objective_override;
    std::optional<double> time_limit;
    NodeOrder node_order = NodeOrder::BestBound;
    int workers = 1;
};

/// Full pipeline for one presolved problem: one MIP per phase candidate
/// (real candidates only when the compact real formulation applies), solved
/// to proven optimality with the best value across candidates kept, then
/// extraction and independent verification. In approximate mode a failed
/// exact solve falls back to the best-residual circuit from randomized
/// search.
Decomposition synthesize(const PresolvedProblem& p, const SynthesisOptions& options = {});

/// Convenience: presolve + synthesize.
Decomposition synthesize(const ProblemSpec& spec, const SynthesisOptions& options = {});

}  // namespace qcs
