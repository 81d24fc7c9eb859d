#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qcsynth/mip_model.hpp"
#include "qcsynth/problem.hpp"

namespace qcs {

enum class SolveStatus { Optimal, Infeasible, TimeLimit };

std::string to_string(SolveStatus s);

/// A verified, human-readable synthesis result.
struct Decomposition {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<GateSpec> circuit;  // Identity slots dropped
    double objective = 0.0;
    int cnot_count = 0;
    int depth = 0;             // non-identity gate count of the circuit
    int compressed_depth = 0;  // after packing disjoint single-layer gates
    std::complex<double> phase{1.0, 0.0};
    double gap = 0.0;
    double lower_bound = 0.0;
    double runtime_seconds = 0.0;
    long nodes = 0;
    /// Max-norm distance of the re-multiplied circuit to phase * target.
    double verification_residual = 0.0;
    bool verified = false;
    std::vector<std::string> notes;
};

/// Selected gate per depth from an integral assignment, with Identity slots
/// dropped from the reported circuit. Throws on non-integral assignments or
/// depths with zero or multiple selections.
Decomposition extract_circuit(const MIPModel& model, const std::vector<double>& assignment,
                              const PresolvedProblem& p);

struct VerifyOutcome {
    bool ok = false;
    std::complex<double> phase{1.0, 0.0};
    double residual = 0.0;
};

/// Exact re-multiplication of the lifted circuit compared entrywise to each
/// phase candidate times the target; reports the best candidate.
VerifyOutcome verify_circuit(const std::vector<GateSpec>& circuit, const Unitary& target,
                             int num_qubits,
                             const std::vector<std::complex<double>>& phase_candidates,
                             double tol = kFeasTol);

/// Greedy left-packing: a gate joins the previous layer iff its qubit
/// support is disjoint from everything already there. Identity slots are
/// ignored.
int compressed_depth(const std::vector<GateSpec>& circuit, int num_qubits);

/// Machine-readable result document (JSON text).
std::string report_json(const Decomposition& d, const std::string& instance_name = "");

/// ASCII circuit diagram, one row per qubit.
std::string circuit_diagram(const std::vector<GateSpec>& circuit, int num_qubits);

/// Human-readable run summary including the diagram.
std::string report_summary(const Decomposition& d, int num_qubits);

}  // namespace qcs
