#include "qcsynth/problem.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qcs {

namespace {

using nlohmann::json;

std::vector<double> read_angle_list(const json& j, const std::string& key) {
    std::vector<double> out;
    for (const auto& v : j) {
        if (v.is_number()) {
            out.push_back(v.get<double>());
        } else if (v.is_string()) {
            // Reuse the gate-label angle grammar ("pi/2", "-pi", ...).
            GateSpec probe = parse_gate_label("Rx_1(" + v.get<std::string>() + ")");
            out.push_back(probe.angles[0]);
        } else {
            throw std::invalid_argument("angle grid '" + key + "': entries must be numbers or angle strings");
        }
    }
    return out;
}

Unitary target_from_json(const json& j, int num_qubits) {
    const int dim = 1 << num_qubits;
    if (j.is_string()) {
        const GateSpec spec = parse_gate_label(j.get<std::string>());
        return lift_to_circuit(spec, num_qubits).lifted;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw std::invalid_argument("target_gate: expected gate label or " + std::to_string(dim) +
                                    "x" + std::to_string(dim) + " matrix of [re,im] pairs");
    Eigen::MatrixXd re(dim, dim), im(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw std::invalid_argument("target_gate: row " + std::to_string(r) + " has wrong length");
        for (int c = 0; c < dim; ++c) {
            const auto& e = row[c];
            if (e.is_number()) {
                re(r, c) = e.get<double>();
                im(r, c) = 0.0;
            } else if (e.is_array() && e.size() == 2) {
                re(r, c) = e[0].get<double>();
                im(r, c) = e[1].get<double>();
            } else {
                throw std::invalid_argument("target_gate: entries must be numbers or [re,im] pairs");
            }
        }
    }
    return Unitary(std::move(re), std::move(im));
}

}  // namespace

std::vector<double> ProblemSpec::grid_for(const std::string& key) const {
    for (const auto& [k, v] : angle_grids)
        if (k == key) return v;
    return {};
}

ProblemSpec parse_spec(const std::string& document_text) {
    json j;
    try {
        j = json::parse(document_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("problem document: ") + e.what());
    }
    ProblemSpec spec;
    for (const char* key : {"num_qubits", "maximum_depth", "elementary_gates", "target_gate"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("problem document: missing required key \"") + key + "\"");

    spec.num_qubits = j.at("num_qubits").get<int>();
    if (spec.num_qubits < 1) throw std::invalid_argument("num_qubits must be >= 1");
    spec.maximum_depth = j.at("maximum_depth").get<int>();
    if (spec.maximum_depth < 2)
        throw std::invalid_argument("maximum_depth must be >= 2, got " + std::to_string(spec.maximum_depth));

    for (const auto& g : j.at("elementary_gates")) {
        if (!g.is_string()) throw std::invalid_argument("elementary_gates: entries must be labels");
        spec.elementary_gates.push_back(parse_gate_label(g.get<std::string>()));
    }
    if (spec.elementary_gates.empty())
        throw std::invalid_argument("elementary_gates must be non-empty");

    spec.target_gate = target_from_json(j.at("target_gate"), spec.num_qubits);
    if (j.at("target_gate").is_string()) spec.target_label = j.at("target_gate").get<std::string>();
    if (!spec.target_gate.is_unitary(kUnitTol))
        throw std::invalid_argument("target_gate is not unitary within tolerance");

    if (j.contains("objective")) {
        const std::string o = j.at("objective").get<std::string>();
        if (o == "minimize_depth") spec.objective = Objective::MinimizeDepth;
        else if (o == "minimize_cnot") spec.objective = Objective::MinimizeCnot;
        else throw std::invalid_argument("objective: expected minimize_depth or minimize_cnot");
    }
    if (j.contains("decomposition_type")) {
        const std::string t = j.at("decomposition_type").get<std::string>();
        if (t == "exact") spec.decomposition_type = DecompositionType::Exact;
        else if (t == "approximate") spec.decomposition_type = DecompositionType::Approximate;
        else throw std::invalid_argument("decomposition_type: expected exact or approximate");
    }
    if (j.contains("set_cnot_lower_bound")) {
        const int b = j.at("set_cnot_lower_bound").get<int>();
        if (b < 0) throw std::invalid_argument("set_cnot_lower_bound must be nonnegative");
        spec.cnot_lower_bound = b;
    }
    if (j.contains("input_circuit"))
        for (const auto& g : j.at("input_circuit"))
            spec.input_circuit.push_back(parse_gate_label(g.get<std::string>()));
    if (j.contains("phase_candidates")) {
        spec.phase_candidates.clear();
        for (const auto& c : j.at("phase_candidates")) {
            std::complex<double> v;
            if (c.is_number()) v = {c.get<double>(), 0.0};
            else if (c.is_array() && c.size() == 2) v = {c[0].get<double>(), c[1].get<double>()};
            else throw std::invalid_argument("phase_candidates: entries must be numbers or [re,im]");
            if (std::abs(std::abs(v) - 1.0) > kUnitTol)
                throw std::invalid_argument("phase_candidates: entries must have unit modulus");
            spec.phase_candidates.push_back(v);
        }
        if (spec.phase_candidates.empty())
            throw std::invalid_argument("phase_candidates must be non-empty");
    }
    if (j.contains("time_limit")) spec.time_limit = j.at("time_limit").get<double>();
    if (j.contains("rng_seed")) spec.rng_seed = j.at("rng_seed").get<unsigned long long>();

    for (const char* key : {"U3_theta", "U3_phi", "U3_lambda", "Rx", "Ry", "Rz"}) {
        const std::string full = std::string(key) + "_discretization";
        if (j.contains(full))
            spec.angle_grids.emplace_back(key, read_angle_list(j.at(full), full));
    }
    return spec;
}

ProblemSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

namespace {

std::vector<GateSpec> expand_pattern(const GateSpec& pattern, const ProblemSpec& spec) {
    const int arity = family_angle_count(pattern.family);
    if (arity == 0 || static_cast<int>(pattern.angles.size()) == arity)
        return {pattern};
    std::vector<std::vector<double>> grids;
    if (pattern.family == GateFamily::U3) {
        grids = {spec.grid_for("U3_theta"), spec.grid_for("U3_phi"), spec.grid_for("U3_lambda")};
    } else {
        grids = {spec.grid_for(family_name(pattern.family))};
    }
    for (const auto& g : grids)
        if (g.empty())
            throw std::invalid_argument("gate " + pattern.label() +
                                        " has unresolved angles and no discretization grid");
    return discretize(pattern, grids);
}

}  // namespace

bool PresolvedProblem::is_cnot_gate(int gate_index) const {
    return gates[gate_index].spec.family == GateFamily::CNot;
}

Unitary PresolvedProblem::product_of(const std::vector<int>& sequence) const {
    Unitary p = Unitary::identity(1 << num_qubits);
    for (int g : sequence) p = p * gates[g].lifted;
    return p;
}

ProblemSpec PresolvedProblem::as_spec() const {
    ProblemSpec spec;
    spec.num_qubits = num_qubits;
    spec.maximum_depth = depth;
    for (const auto& g : gates) spec.elementary_gates.push_back(g.spec);
    spec.target_gate = target;
    spec.objective = objective;
    spec.decomposition_type = decomposition_type;
    spec.cnot_lower_bound = cnot_lower_bound;
    spec.phase_candidates = phase_candidates;
    spec.time_limit = time_limit;
    spec.rng_seed = rng_seed;
    return spec;
}

PresolvedProblem presolve(const ProblemSpec& spec) {
    PresolvedProblem p;
    p.num_qubits = spec.num_qubits;
    p.depth = spec.maximum_depth;
    p.target = spec.target_gate;
    p.objective = spec.objective;
    p.decomposition_type = spec.decomposition_type;
    p.cnot_lower_bound = spec.cnot_lower_bound;
    p.phase_candidates = spec.phase_candidates;
    p.time_limit = spec.time_limit;
    p.rng_seed = spec.rng_seed;

    // Expand angle grids, lift, and deduplicate up to global phase keeping
    // the first representative in input order.
    std::vector<ElementaryGate> kept;
    for (const auto& pattern : spec.elementary_gates) {
        for (const auto& concrete : expand_pattern(pattern, spec)) {
            ElementaryGate gate = lift_to_circuit(concrete, spec.num_qubits);
            bool duplicate = false;
            for (const auto& k : kept) {
                if (equiv_up_to_phase(gate.lifted, k.lifted).equal) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) kept.push_back(std::move(gate));
        }
    }
    // Identity must be present for either objective to leave unused depth
    // slots free.
    const Unitary eye = Unitary::identity(1 << spec.num_qubits);
    bool has_identity = false;
    for (const auto& k : kept)
        if (equiv_up_to_phase(k.lifted, eye).equal) {
            has_identity = true;
            break;
        }
    if (!has_identity)
        kept.push_back(lift_to_circuit(GateSpec{GateFamily::Identity, {}, {}, {}}, spec.num_qubits));

    std::sort(kept.begin(), kept.end(),
              [](const ElementaryGate& a, const ElementaryGate& b) { return a.label < b.label; });
    p.gates = std::move(kept);

    for (size_t i = 0; i < p.gates.size(); ++i)
        if (p.gates[i].spec.family == GateFamily::Identity ||
            equiv_up_to_phase(p.gates[i].lifted, eye).equal)
            p.identity_index = static_cast<int>(i);

    // Compact real-only formulation applies when gates and target are all
    // real-valued.
    p.all_real = p.target.is_real(kUnitTol);
    for (const auto& g : p.gates)
        if (!g.lifted.is_real(kUnitTol)) p.all_real = false;

    // Algebraic flags feeding the valid inequalities.
    std::vector<Unitary> mats;
    for (const auto& g : p.gates) mats.push_back(g.lifted);
    const size_t n = p.gates.size();
    p.pair_flags.assign(n, std::vector<PairFlags>(n));
    p.single_flags.resize(n);
    for (size_t i = 0; i < n; ++i) {
        p.single_flags[i] = classify_single(mats[i]);
        for (size_t j = 0; j < n; ++j)
            if (i != j) p.pair_flags[i][j] = classify_pair(mats[i], mats[j], mats);
    }

    // Warm start: map the input circuit onto catalog gates, verify its
    // product against the target up to a known phase, pad with Identity.
    if (!spec.input_circuit.empty()) {
        std::optional<std::vector<int>> seq;
        std::string reject;
        if (static_cast<int>(spec.input_circuit.size()) > p.depth) {
            reject = "longer than maximum_depth";
        } else {
            std::vector<int> mapped;
            for (const auto& gs : spec.input_circuit) {
                const ElementaryGate lifted = lift_to_circuit(gs, spec.num_qubits);
                int found = -1;
                for (size_t i = 0; i < n; ++i) {
                    if (mats[i].max_abs_diff(lifted.lifted) < kUnitTol) {
                        found = static_cast<int>(i);
                        break;
                    }
                }
                if (found < 0) {
                    for (size_t i = 0; i < n; ++i)
                        if (equiv_up_to_phase(mats[i], lifted.lifted).equal) {
                            found = static_cast<int>(i);
                            break;
                        }
                }
                if (found < 0) {
                    reject = "gate " + gs.label() + " not in the native set";
                    break;
                }
                mapped.push_back(found);
            }
            if (reject.empty()) {
                while (static_cast<int>(mapped.size()) < p.depth)
                    mapped.push_back(p.identity_index);
                const Unitary prod = p.product_of(mapped);
                bool ok = false;
                for (const auto& c : p.phase_candidates)
                    if (prod.max_abs_diff(p.target * c) < kFeasTol) {
                        ok = true;
                        break;
                    }
                if (ok) seq = std::move(mapped);
                else reject = "product does not match the target up to a known phase";
            }
        }
        if (seq) {
            p.warm_start_sequence = std::move(seq);
            p.emphasize_optimality = true;
        } else {
            p.warnings.push_back("input_circuit rejected as warm start: " + reject);
        }
    }
    return p;
}

}  // namespace qcs
