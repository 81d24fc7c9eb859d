#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcsynth/unitary.hpp"

namespace qcs {

enum class GateFamily {
    H, S, Sdagger, X, SX, SXdagger, Y, Z, T, Tdagger,
    Rx, Ry, Rz, U3,
    CNot, CV, CVdagger, CH, CZ, Swap, ISwap, Magic, GroverDiffusion,
    Sycamore, QFT2,
    Identity,
    KronProduct,
};

/// Number of qubits the family's small matrix acts on (0 for Identity,
/// which lifts to the full register, and for KronProduct, which derives it
/// from its components).
int family_qubit_count(GateFamily f);
/// Number of radian parameters (Rx/Ry/Rz: 1, U3: 3, others: 0).
int family_angle_count(GateFamily f);
/// Canonical family token used in labels ("CNot", "Sdagger", ...).
const std::string& family_name(GateFamily f);
std::optional<GateFamily> family_from_name(const std::string& name);

/// A named, angle-resolved native gate pattern: family + qubit slots +
/// angle parameters; KronProduct composes sub-specs.
struct GateSpec {
    GateFamily family = GateFamily::Identity;
    std::vector<int> qubits;      // 1-based; (control, target) for controlled gates
    std::vector<double> angles;   // radians
    std::vector<GateSpec> factors;  // KronProduct components, in qubit order

    /// Canonical label, e.g. "CNot_1_2", "U3_2(0,-1.5708,3.14159)",
    /// "H_1xT_2" for Kronecker composites.
    std::string label() const;

    /// All qubit indices touched (sorted, deduplicated).
    std::vector<int> support() const;

    bool operator==(const GateSpec& o) const;
};

/// Parse a gate label such as "H_1", "CNot_3_2", "Rx_1(1.5708)",
/// "U3_2(0,0,3.14159)", "Identity", or "H_1xT_2". Angle-parameterised
/// families may omit the argument list; the result then acts as a
/// discretization pattern (see discretize()).
GateSpec parse_gate_label(const std::string& label);

/// Standard small matrix (2x2 or 4x4) for a fully resolved spec.
/// U3 uses the half-angle convention
///   U3(t,p,l) = [[cos(t/2), -e^{il} sin(t/2)],
///                [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]].
Unitary build_small_unitary(const GateSpec& spec);

/// A native gate lifted to the full N-qubit space. Qubit 1 is the leftmost
/// Kronecker factor (most significant basis bit); CNot_1_2 on N=2
/// reproduces rows (1000,0100,0001,0010).
struct ElementaryGate {
    GateSpec spec;
    Unitary lifted;
    std::string label;
};

/// Kronecker-place a spec onto N qubits. Two-qubit gates on non-adjacent or
/// reversed qubit pairs are built from the projector form
/// P0 (x) I + P1 (x) U placed at the correct tensor slots.
ElementaryGate lift_to_circuit(const GateSpec& spec, int num_qubits);

/// Cartesian expansion of a pattern spec over the given angle grids; one
/// fully resolved GateSpec per combination. `pattern` carries the family and
/// qubit placement; grids.size() must equal the family's angle arity.
std::vector<GateSpec> discretize(const GateSpec& pattern,
                                 const std::vector<std::vector<double>>& grids);

struct PairFlags {
    bool commute = false;
    /// Index of a native gate W with U*V ~ W up to phase, or -1.
    int redundant_product_index = -1;
};

struct SingleFlags {
    bool involutory = false;  // U^2 ~ I up to global phase
    bool idempotent = false;  // U^2 ~ U
};

/// commute iff max-norm of UV - VU < tol; redundant_product_index is found
/// by scanning `natives` for a phase-equivalent of U*V.
PairFlags classify_pair(const Unitary& u, const Unitary& v,
                        const std::vector<Unitary>& natives, double tol = kUnitTol);
SingleFlags classify_single(const Unitary& u, double tol = kUnitTol);

}  // namespace qcs
