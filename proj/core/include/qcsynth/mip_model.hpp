#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qcsynth/problem.hpp"
#include "qcsynth/unitary.hpp"

namespace qcs {

enum class VarKind { Binary, Continuous };
enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Variable {
    VarKind kind = VarKind::Continuous;
    double lb = 0.0, ub = 0.0;
    std::string name;
};

struct LinearRow {
    std::vector<std::pair<int, double>> terms;  // (variable id, coefficient)
    RowSense sense = RowSense::Equal;
    double rhs = 0.0;
    std::string name;
};

/// Index map from formulation entities to variable ids, plus the constant
/// data (gate matrices, scaled target) needed to evaluate assignments
/// exactly. Variable ids are allocated in a fixed order, so models are
/// deterministic for a given problem.
struct VariableMap {
    int num_gates = 0;
    int depth = 0;
    int dim = 0;
    bool all_real = false;
    int identity_index = -1;
    std::complex<double> phase{1.0, 0.0};

    std::vector<Unitary> gate_matrices;
    std::vector<std::string> gate_labels;
    std::vector<bool> gate_is_cnot;
    Unitary target_scaled;  // phase * target

    int parts() const { return all_real ? 1 : 2; }

    /// Gate-selection binary z[g,d]; d is 1-based.
    int z_var(int gate, int d) const;
    /// Cumulative-product entry for depth d in 1..D-1; part 0 = re, 1 = im.
    int ghat_var(int d, int part, int row, int col) const;
    /// McCormick auxiliary for depth d in 2..D pairing Ghat_{d-1}(row,k)
    /// with z[gate,d].
    int aux_var(int d, int part, int row, int k, int gate) const;

    int z_base = 0, ghat_base = 0, aux_base = 0, total_vars = 0;
};

struct MIPModel {
    std::vector<Variable> vars;
    std::vector<LinearRow> rows;
    std::vector<double> objective;  // dense, minimize
    bool objective_integral = true;
    bool pre_infeasible = false;  // detected before any solve (pigeonhole)
    VariableMap map;

    int num_binaries() const;
};

/// Full variable assignment realizing the given gate sequence (one catalog
/// gate index per depth slot): binaries, cumulative products, and exact
/// bilinear auxiliaries.
std::vector<double> assignment_from_sequence(const MIPModel& model,
                                             const std::vector<int>& sequence);

/// Selected gate per depth from an integral assignment; throws if any depth
/// has no or multiple selected binaries within `tol` of 1.
std::vector<int> sequence_from_assignment(const MIPModel& model,
                                          const std::vector<double>& x,
                                          double tol = 1e-6);

double objective_value(const MIPModel& model, const std::vector<double>& x);

/// Largest violation over all rows and variable bounds.
double max_violation(const MIPModel& model, const std::vector<double>& x);

}  // namespace qcs
