#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcsynth/problem.hpp"

namespace qcs {

/// Sequence budget above which exhaustive enumeration refuses to run.
inline constexpr double kEnumerationGuard = 1e8;

struct OracleResult {
    bool feasible = false;
    /// Catalog gate indices in depth order, identities included.
    std::vector<int> sequence;
    double objective = 0.0;
    std::complex<double> phase{1.0, 0.0};
    long long sequences_tried = 0;
    /// Smallest max-norm residual seen over all sequences and phase
    /// candidates, even when no exact match was found.
    double best_residual = 0.0;
    std::vector<int> best_residual_sequence;
};

/// Brute-force ground truth. Iterates depths 1..max_depth in order and, per
/// depth, gates in lexicographic label order, reusing prefix products across
/// siblings. For minimize_depth the first match is returned (hence minimal
/// depth); for minimize_cnot all depths are scanned and the fewest-CNOT
/// match wins. Throws if the sequence budget N_g^max_depth exceeds the
/// guard limit.
OracleResult enumerate_exhaustive(const PresolvedProblem& p, int max_depth, int workers = 1);

struct RandomSearchOptions {
    double time_limit = 500.0;  // seconds
    unsigned long long seed = 1;
    /// Optional hard cap on draws, for fully reproducible runs.
    std::optional<long long> max_tries;
};

/// Uniform random sequences of length max_depth until the time limit.
/// Records the best exact match (by the problem's objective) and the best
/// residual seen. Deterministic draw sequence for a fixed seed.
OracleResult enumerate_random(const PresolvedProblem& p, int max_depth,
                              const RandomSearchOptions& options);

}  // namespace qcs
