#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "qcsynth/mip_model.hpp"

namespace qcs {

enum class LPStatus { Optimal, Infeasible, Unbounded, Stalled, Aborted };

struct LPResult {
    LPStatus status = LPStatus::Stalled;
    double objective = 0.0;
    std::vector<double> x;  // structural variable values
    long iterations = 0;
};

/// Primal feasibility tolerance.
inline constexpr double kLpTol = 1e-7;

struct BoundOverride {
    int var;
    double lb, ub;
};

/// Bounded-variable primal revised simplex over the model's LP relaxation.
///
/// Rows are converted to equalities with sense-bounded slacks; phase one
/// drives per-row artificials to zero, phase two optimizes the original
/// objective. The basis is kept as a sparse LU refreshed periodically with
/// product-form eta updates in between. Dantzig pricing with lowest-index
/// tie-breaking; Bland's rule takes over when degeneracy stalls progress.
/// Deterministic for a fixed model and bound set.
class SimplexSolver {
public:
    explicit SimplexSolver(const MIPModel& model);

    /// Solve with the model's bounds tightened by the overrides.
    LPResult solve(const std::vector<BoundOverride>& overrides = {});
    /// Solve with explicit structural bounds (sizes must match).
    LPResult solve_with_bounds(const std::vector<double>& lb, const std::vector<double>& ub);

    /// Optional wall-clock deadline, polled every few hundred iterations; an
    /// expired solve reports LPStatus::Aborted.
    void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
        deadline_ = deadline;
    }

    long total_iterations() const { return total_iterations_; }

private:
    struct Impl;
    const MIPModel& model_;
    int n_ = 0, m_ = 0;
    // Structural columns, column-major.
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> rhs_;
    std::vector<double> slack_lb_, slack_ub_;
    std::vector<double> base_lb_, base_ub_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    long total_iterations_ = 0;
};

/// One-shot convenience wrapper.
LPResult solve_lp(const MIPModel& model, const std::vector<BoundOverride>& overrides = {});

}  // namespace qcs
