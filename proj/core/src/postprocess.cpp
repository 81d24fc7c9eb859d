#include "qcsynth/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qcs {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::TimeLimit: return "time_limit";
    }
    return "unknown";
}

Decomposition extract_circuit(const MIPModel& model, const std::vector<double>& assignment,
                              const PresolvedProblem& p) {
    const std::vector<int> seq = sequence_from_assignment(model, assignment);
    Decomposition d;
    d.objective = objective_value(model, assignment);
    for (int g : seq) {
        if (g == model.map.identity_index) continue;
        d.circuit.push_back(p.gates[g].spec);
        if (model.map.gate_is_cnot[g]) ++d.cnot_count;
    }
    d.depth = static_cast<int>(d.circuit.size());
    d.compressed_depth = compressed_depth(d.circuit, p.num_qubits);
    d.phase = model.map.phase;
    return d;
}

VerifyOutcome verify_circuit(const std::vector<GateSpec>& circuit, const Unitary& target,
                             int num_qubits,
                             const std::vector<std::complex<double>>& phase_candidates,
                             double tol) {
    Unitary prod = Unitary::identity(1 << num_qubits);
    for (const auto& spec : circuit) prod = prod * lift_to_circuit(spec, num_qubits).lifted;
    VerifyOutcome out;
    out.residual = 1e30;
    for (const auto& c : phase_candidates) {
        const double r = prod.max_abs_diff(target * c);
        if (r < out.residual) {
            out.residual = r;
            out.phase = c;
        }
    }
    out.ok = out.residual <= tol;
    return out;
}

int compressed_depth(const std::vector<GateSpec>& circuit, int /*num_qubits*/) {
    std::vector<std::set<int>> layers;
    for (const auto& spec : circuit) {
        if (spec.family == GateFamily::Identity) continue;
        const auto sup = spec.support();
        // A gate may move left into the previous layer only if its support is
        // disjoint from every gate already in it; crossing further left would
        // reorder non-commuting neighbours.
        bool placed = false;
        if (!layers.empty()) {
            auto& prev = layers.back();
            bool disjoint = true;
            for (int q : sup)
                if (prev.count(q)) {
                    disjoint = false;
                    break;
                }
            if (disjoint) {
                prev.insert(sup.begin(), sup.end());
                placed = true;
            }
        }
        if (!placed) layers.push_back(std::set<int>(sup.begin(), sup.end()));
    }
    return static_cast<int>(layers.size());
}

std::string report_json(const Decomposition& d, const std::string& instance_name) {
    nlohmann::json j;
    if (!instance_name.empty()) j["instance"] = instance_name;
    j["status"] = to_string(d.status);
    if (d.status != SolveStatus::Infeasible || !d.circuit.empty()) {
        nlohmann::json circ = nlohmann::json::array();
        for (const auto& g : d.circuit) circ.push_back(g.label());
        j["circuit"] = circ;
        j["objective"] = d.objective;
        j["cnot_count"] = d.cnot_count;
        j["depth"] = d.depth;
        j["compressed_depth"] = d.compressed_depth;
        j["phase"] = {d.phase.real(), d.phase.imag()};
        j["verification_residual"] = d.verification_residual;
        j["verified"] = d.verified;
    }
    j["gap"] = std::isfinite(d.gap) ? d.gap : -1.0;
    j["lower_bound"] = std::isfinite(d.lower_bound) ? d.lower_bound : -1.0;
    j["nodes"] = d.nodes;
    j["runtime_seconds"] = d.runtime_seconds;
    if (!d.notes.empty()) j["notes"] = d.notes;
    return j.dump(2) + "\n";
}

namespace {

struct DiagramCell {
    std::string text;  // what to draw on this qubit row
    bool wire_down = false;
};

}  // namespace

std::string circuit_diagram(const std::vector<GateSpec>& circuit, int num_qubits) {
    // One column per reported gate, in depth order.
    std::vector<std::vector<DiagramCell>> cols;
    for (const auto& spec : circuit) {
        std::vector<DiagramCell> col(num_qubits);
        const bool controlled =
            spec.family == GateFamily::CNot || spec.family == GateFamily::CV ||
            spec.family == GateFamily::CVdagger || spec.family == GateFamily::CH ||
            spec.family == GateFamily::CZ;
        if (controlled) {
            const int c = spec.qubits[0], t = spec.qubits[1];
            col[c - 1].text = "*";
            std::string body = family_name(spec.family).substr(1);
            if (spec.family == GateFamily::CNot) body = "X";
            if (spec.family == GateFamily::CVdagger) body = "V'";
            col[t - 1].text = "[" + body + "]";
            for (int q = std::min(c, t); q < std::max(c, t); ++q) col[q - 1].wire_down = true;
        } else if (spec.family == GateFamily::Swap || spec.family == GateFamily::ISwap ||
                   spec.family == GateFamily::Magic || spec.family == GateFamily::GroverDiffusion ||
                   spec.family == GateFamily::Sycamore || spec.family == GateFamily::QFT2) {
            const int a = spec.qubits[0], b = spec.qubits[1];
            const std::string nm = family_name(spec.family);
            col[a - 1].text = "[" + nm + "]";
            col[b - 1].text = "[" + nm + "]";
            for (int q = std::min(a, b); q < std::max(a, b); ++q) col[q - 1].wire_down = true;
        } else if (spec.family == GateFamily::KronProduct) {
            for (const auto& f : spec.factors)
                for (int q : f.support()) col[q - 1].text = "[" + f.label() + "]";
        } else if (!spec.qubits.empty()) {
            std::string body = family_name(spec.family);
            const std::string lbl = spec.label();
            const size_t paren = lbl.find('(');
            if (paren != std::string::npos) body += lbl.substr(paren);
            col[spec.qubits[0] - 1].text = "[" + body + "]";
        }
        cols.push_back(std::move(col));
    }

    std::vector<size_t> widths(cols.size());
    for (size_t k = 0; k < cols.size(); ++k) {
        size_t w = 3;
        for (const auto& cell : cols[k]) w = std::max(w, cell.text.size() + 2);
        widths[k] = w;
    }

    auto rtrim = [](std::string s) {
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s;
    };

    std::ostringstream os;
    for (int q = 1; q <= num_qubits; ++q) {
        std::string line = "q" + std::to_string(q) + ": ";
        for (size_t k = 0; k < cols.size(); ++k) {
            const std::string text = cols[k][q - 1].text.empty() ? "-" : cols[k][q - 1].text;
            const size_t pad = widths[k] > text.size() ? widths[k] - text.size() : 0;
            line += std::string(pad / 2 + 1, '-') + text + std::string(pad - pad / 2 + 1, '-');
        }
        os << line << "\n";
        if (q < num_qubits) {
            std::string conn(line.size(), ' ');
            size_t off = 4;
            for (size_t k = 0; k < cols.size(); ++k) {
                const size_t cellw = widths[k] + 2;
                if (cols[k][q - 1].wire_down) conn[off + cellw / 2] = '|';
                off += cellw;
            }
            conn = rtrim(conn);
            if (!conn.empty()) os << conn << "\n";
        }
    }
    return os.str();
}

std::string report_summary(const Decomposition& d, int num_qubits) {
    std::ostringstream os;
    os << "status: " << to_string(d.status) << "\n";
    if (!d.circuit.empty() || d.status == SolveStatus::Optimal) {
        os << "objective: " << d.objective << "   depth: " << d.depth
           << "   compressed depth: " << d.compressed_depth << "   cnot count: " << d.cnot_count
           << "\n";
        os << "phase: (" << d.phase.real() << "," << d.phase.imag() << ")"
           << "   residual: " << d.verification_residual << "\n";
        os << "circuit:";
        for (const auto& g : d.circuit) os << " " << g.label();
        os << "\n" << circuit_diagram(d.circuit, num_qubits);
    }
    if (d.status != SolveStatus::Optimal)
        os << "gap: " << d.gap << "  lower bound: " << d.lower_bound << "\n";
    os << "nodes: " << d.nodes << "   runtime: " << d.runtime_seconds << " s\n";
    for (const auto& n : d.notes) os << "note: " << n << "\n";
    return os.str();
}

}  // namespace qcs
