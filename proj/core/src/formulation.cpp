#include "qcsynth/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qcs {

namespace {
constexpr double kCoefEps = 1e-12;  // drop exact-zero gate entries from rows

std::string part_tag(int part) { return part == 0 ? "re" : "im"; }
}  // namespace

int VariableMap::z_var(int gate, int d) const {
    return z_base + (d - 1) * num_gates + gate;
}

int VariableMap::ghat_var(int d, int part, int row, int col) const {
    const int per_depth = parts() * dim * dim;
    return ghat_base + (d - 1) * per_depth + (part * dim + row) * dim + col;
}

int VariableMap::aux_var(int d, int part, int row, int k, int gate) const {
    const int per_depth = parts() * dim * dim * num_gates;
    return aux_base + (d - 2) * per_depth +
           ((part * dim + row) * dim + k) * num_gates + gate;
}

int MIPModel::num_binaries() const {
    int n = 0;
    for (const auto& v : vars)
        if (v.kind == VarKind::Binary) ++n;
    return n;
}

MIPModel allocate_variables(const PresolvedProblem& p, std::complex<double> phase) {
    MIPModel model;
    VariableMap& m = model.map;
    m.num_gates = static_cast<int>(p.gates.size());
    m.depth = p.depth;
    m.dim = 1 << p.num_qubits;
    m.all_real = p.all_real;
    m.identity_index = p.identity_index;
    m.phase = phase;
    m.target_scaled = p.target * phase;
    for (const auto& g : p.gates) {
        m.gate_matrices.push_back(g.lifted);
        m.gate_labels.push_back(g.label);
        m.gate_is_cnot.push_back(g.spec.family == GateFamily::CNot);
    }

    const int D = m.depth, NG = m.num_gates, dim = m.dim, P = m.parts();

    m.z_base = 0;
    for (int d = 1; d <= D; ++d)
        for (int g = 0; g < NG; ++g)
            model.vars.push_back({VarKind::Binary, 0.0, 1.0,
                                  "z[" + m.gate_labels[g] + ",d" + std::to_string(d) + "]"});

    m.ghat_base = static_cast<int>(model.vars.size());
    for (int d = 1; d <= D - 1; ++d)
        for (int part = 0; part < P; ++part)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    model.vars.push_back({VarKind::Continuous, -1.0, 1.0,
                                          "G" + std::to_string(d) + "_" + part_tag(part) + "_" +
                                              std::to_string(i) + "_" + std::to_string(j)});

    m.aux_base = static_cast<int>(model.vars.size());
    for (int d = 2; d <= D; ++d)
        for (int part = 0; part < P; ++part)
            for (int i = 0; i < dim; ++i)
                for (int k = 0; k < dim; ++k)
                    for (int g = 0; g < NG; ++g)
                        model.vars.push_back({VarKind::Continuous, -1.0, 1.0,
                                              "w" + std::to_string(d) + "_" + part_tag(part) + "_" +
                                                  std::to_string(i) + "_" + std::to_string(k) + "_g" +
                                                  std::to_string(g)});
    m.total_vars = static_cast<int>(model.vars.size());
    model.objective.assign(model.vars.size(), 0.0);
    return model;
}

int build_selection_constraints(MIPModel& model) {
    const VariableMap& m = model.map;
    int added = 0;
    for (int d = 1; d <= m.depth; ++d) {
        LinearRow row;
        row.name = "sel_d" + std::to_string(d);
        row.sense = RowSense::Equal;
        row.rhs = 1.0;
        for (int g = 0; g < m.num_gates; ++g) row.terms.emplace_back(m.z_var(g, d), 1.0);
        model.rows.push_back(std::move(row));
        ++added;
    }
    return added;
}

namespace {

double gate_part(const Unitary& u, int part, int r, int c) {
    return part == 0 ? u.re(r, c) : u.im(r, c);
}

/// Four-row exact envelope for w ~ x*z with x in [-1,1], z in {0,1}:
///   w >= -z,  w <= z,  w >= x+z-1,  w <= x-z+1.
void add_envelope(MIPModel& model, int w, int x, int z, const std::string& tag) {
    model.rows.push_back({{{w, 1.0}, {z, 1.0}}, RowSense::GreaterEqual, 0.0, "mc1_" + tag});
    model.rows.push_back({{{w, 1.0}, {z, -1.0}}, RowSense::LessEqual, 0.0, "mc2_" + tag});
    model.rows.push_back({{{w, 1.0}, {x, -1.0}, {z, -1.0}}, RowSense::GreaterEqual, -1.0, "mc3_" + tag});
    model.rows.push_back({{{w, 1.0}, {x, -1.0}, {z, 1.0}}, RowSense::LessEqual, 1.0, "mc4_" + tag});
}

}  // namespace

int build_product_chain(MIPModel& model) {
    const VariableMap& m = model.map;
    const int D = m.depth, NG = m.num_gates, dim = m.dim, P = m.parts();
    const int before = static_cast<int>(model.rows.size());

    // Depth-1 seeding: Ghat_1 = G_0 * G_1 with G_0 = I, a purely linear tie
    // between Ghat_1 entries and the depth-1 binaries.
    for (int part = 0; part < P; ++part) {
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                LinearRow row;
                row.name = "def1_" + part_tag(part) + "_" + std::to_string(i) + "_" + std::to_string(j);
                row.sense = RowSense::Equal;
                row.rhs = 0.0;
                row.terms.emplace_back(m.ghat_var(1, part, i, j), 1.0);
                for (int g = 0; g < NG; ++g) {
                    const double c = gate_part(m.gate_matrices[g], part, i, j);
                    if (std::abs(c) > kCoefEps) row.terms.emplace_back(m.z_var(g, 1), -c);
                }
                model.rows.push_back(std::move(row));
            }
        }
    }

    // Envelopes: every Ghat_{d-1} entry-part paired with every depth-d binary.
    for (int d = 2; d <= D; ++d) {
        for (int part = 0; part < P; ++part)
            for (int i = 0; i < dim; ++i)
                for (int k = 0; k < dim; ++k)
                    for (int g = 0; g < NG; ++g) {
                        const std::string tag = std::to_string(d) + "_" + part_tag(part) + "_" +
                                                std::to_string(i) + "_" + std::to_string(k) + "_g" +
                                                std::to_string(g);
                        add_envelope(model, m.aux_var(d, part, i, k, g),
                                     m.ghat_var(d - 1, part, i, k), m.z_var(g, d), tag);
                    }
    }

    // Interior recursion Ghat_d = Ghat_{d-1} * G_d for d = 2..D-1, expanded
    // entrywise over the auxiliaries with complex multiplication
    // (re*re - im*im, re*im + im*re); imaginary rows vanish when all_real.
    auto product_terms = [&](LinearRow& row, int d, int part, int i, int j) {
        for (int k = 0; k < dim; ++k) {
            for (int g = 0; g < NG; ++g) {
                const double gre = m.gate_matrices[g].re(k, j);
                const double gim = m.gate_matrices[g].im(k, j);
                if (part == 0) {
                    if (std::abs(gre) > kCoefEps)
                        row.terms.emplace_back(m.aux_var(d, 0, i, k, g), gre);
                    if (P > 1 && std::abs(gim) > kCoefEps)
                        row.terms.emplace_back(m.aux_var(d, 1, i, k, g), -gim);
                } else {
                    if (std::abs(gre) > kCoefEps)
                        row.terms.emplace_back(m.aux_var(d, 1, i, k, g), gre);
                    if (std::abs(gim) > kCoefEps)
                        row.terms.emplace_back(m.aux_var(d, 0, i, k, g), gim);
                }
            }
        }
    };

    for (int d = 2; d <= D - 1; ++d) {
        for (int part = 0; part < P; ++part) {
            for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dim; ++j) {
                    LinearRow row;
                    row.name = "prod" + std::to_string(d) + "_" + part_tag(part) + "_" +
                               std::to_string(i) + "_" + std::to_string(j);
                    row.sense = RowSense::Equal;
                    row.rhs = 0.0;
                    row.terms.emplace_back(m.ghat_var(d, part, i, j), 1.0);
                    LinearRow prod;
                    product_terms(prod, d, part, i, j);
                    for (auto& [v, c] : prod.terms) row.terms.emplace_back(v, -c);
                    model.rows.push_back(std::move(row));
                }
            }
        }
    }

    // Terminal: Ghat_{D-1} * G_D = phase * target, entrywise.
    for (int part = 0; part < P; ++part) {
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                LinearRow row;
                row.name = "term_" + part_tag(part) + "_" + std::to_string(i) + "_" + std::to_string(j);
                row.sense = RowSense::Equal;
                row.rhs = gate_part(m.target_scaled, part, i, j);
                product_terms(row, D, part, i, j);
                model.rows.push_back(std::move(row));
            }
        }
    }
    return static_cast<int>(model.rows.size()) - before;
}

void build_objective(MIPModel& model, Objective which) {
    const VariableMap& m = model.map;
    std::fill(model.objective.begin(), model.objective.end(), 0.0);
    if (which == Objective::MinimizeCnot) {
        bool any = false;
        for (bool b : m.gate_is_cnot) any = any || b;
        if (!any)
            throw std::invalid_argument("minimize_cnot requires a CNot gate in the native set");
    }
    for (int d = 1; d <= m.depth; ++d) {
        for (int g = 0; g < m.num_gates; ++g) {
            const bool counted = which == Objective::MinimizeDepth
                                     ? g != m.identity_index
                                     : m.gate_is_cnot[g];
            if (counted) model.objective[m.z_var(g, d)] = 1.0;
        }
    }
    model.objective_integral = true;
}

int add_valid_inequalities(MIPModel& model, const PresolvedProblem& p) {
    const VariableMap& m = model.map;
    const int NG = m.num_gates, D = m.depth;
    // Forbidden adjacent ordered pairs (first, second), deduplicated.
    std::set<std::pair<int, int>> forbidden;

    for (int i = 0; i < NG; ++i) {
        for (int j = 0; j < NG; ++j) {
            if (i == j) continue;
            // Commuting pairs: keep the lexicographically-smaller-label-first
            // order, forbid the flipped one. Handled once per unordered pair.
            if (i < j && p.pair_flags[i][j].commute) {
                const bool i_first = m.gate_labels[i] < m.gate_labels[j];
                if (i_first)
                    forbidden.insert({j, i});
                else
                    forbidden.insert({i, j});
            }
            // Redundant pairs: product is itself native, so the adjacent
            // succession (i then j) is dominated. Identity pairs are
            // excluded; an Identity neighbour is exactly how unused depth
            // is spent.
            if (i != m.identity_index && j != m.identity_index &&
                p.pair_flags[i][j].redundant_product_index >= 0) {
                forbidden.insert({i, j});
            }
        }
    }
    for (int g = 0; g < NG; ++g) {
        if (g == m.identity_index) continue;
        if (p.single_flags[g].involutory || p.single_flags[g].idempotent)
            forbidden.insert({g, g});
    }

    int added = 0;
    for (const auto& [first, second] : forbidden) {
        for (int d = 1; d <= D - 1; ++d) {
            LinearRow row;
            row.name = "cut_" + m.gate_labels[first] + "_then_" + m.gate_labels[second] + "_d" +
                       std::to_string(d);
            row.sense = RowSense::LessEqual;
            row.rhs = 1.0;
            row.terms.emplace_back(m.z_var(first, d), 1.0);
            row.terms.emplace_back(m.z_var(second, d + 1), 1.0);
            model.rows.push_back(std::move(row));
            ++added;
        }
    }
    return added;
}

int add_cnot_bound(MIPModel& model, int bound) {
    if (bound < 0) throw std::invalid_argument("cnot lower bound must be nonnegative");
    if (bound == 0) return 0;
    const VariableMap& m = model.map;
    LinearRow row;
    row.name = "cnot_lb";
    row.sense = RowSense::GreaterEqual;
    row.rhs = bound;
    for (int d = 1; d <= m.depth; ++d)
        for (int g = 0; g < m.num_gates; ++g)
            if (m.gate_is_cnot[g]) row.terms.emplace_back(m.z_var(g, d), 1.0);
    model.rows.push_back(std::move(row));
    if (bound > m.depth) model.pre_infeasible = true;  // pigeonhole against Eq. (2b)
    return 1;
}

MIPModel build_model(const PresolvedProblem& p, const FormulationOptions& opts) {
    MIPModel model = allocate_variables(p, opts.phase);
    build_selection_constraints(model);
    build_product_chain(model);
    build_objective(model, opts.objective_override.value_or(p.objective));
    if (opts.valid_inequalities) add_valid_inequalities(model, p);
    if (p.cnot_lower_bound) add_cnot_bound(model, *p.cnot_lower_bound);
    return model;
}

std::vector<double> assignment_from_sequence(const MIPModel& model,
                                             const std::vector<int>& sequence) {
    const VariableMap& m = model.map;
    if (static_cast<int>(sequence.size()) != m.depth)
        throw std::invalid_argument("assignment_from_sequence: wrong sequence length");
    std::vector<double> x(model.vars.size(), 0.0);
    for (int d = 1; d <= m.depth; ++d) x[m.z_var(sequence[d - 1], d)] = 1.0;

    Unitary running = m.gate_matrices[sequence[0]];
    for (int d = 1; d <= m.depth - 1; ++d) {
        if (d >= 2) running = running * m.gate_matrices[sequence[d - 1]];
        for (int part = 0; part < m.parts(); ++part)
            for (int i = 0; i < m.dim; ++i)
                for (int j = 0; j < m.dim; ++j)
                    x[m.ghat_var(d, part, i, j)] =
                        part == 0 ? running.re(i, j) : running.im(i, j);
        // Auxiliaries at depth d+1 pair Ghat_d with the depth-(d+1) binary.
        const int g = sequence[d];
        for (int part = 0; part < m.parts(); ++part)
            for (int i = 0; i < m.dim; ++i)
                for (int k = 0; k < m.dim; ++k)
                    x[m.aux_var(d + 1, part, i, k, g)] =
                        part == 0 ? running.re(i, k) : running.im(i, k);
    }
    return x;
}

std::vector<int> sequence_from_assignment(const MIPModel& model,
                                          const std::vector<double>& x,
                                          double tol) {
    const VariableMap& m = model.map;
    std::vector<int> seq;
    for (int d = 1; d <= m.depth; ++d) {
        int chosen = -1;
        for (int g = 0; g < m.num_gates; ++g) {
            const double v = x[m.z_var(g, d)];
            if (v > 1.0 - tol) {
                if (chosen >= 0)
                    throw std::invalid_argument("assignment selects two gates at depth " +
                                                std::to_string(d));
                chosen = g;
            } else if (v > tol) {
                throw std::invalid_argument("assignment is not integral at depth " +
                                            std::to_string(d));
            }
        }
        if (chosen < 0)
            throw std::invalid_argument("assignment selects no gate at depth " + std::to_string(d));
        seq.push_back(chosen);
    }
    return seq;
}

double objective_value(const MIPModel& model, const std::vector<double>& x) {
    double v = 0.0;
    for (size_t i = 0; i < model.objective.size(); ++i) v += model.objective[i] * x[i];
    return v;
}

double max_violation(const MIPModel& model, const std::vector<double>& x) {
    double worst = 0.0;
    for (size_t j = 0; j < model.vars.size(); ++j) {
        worst = std::max(worst, model.vars[j].lb - x[j]);
        worst = std::max(worst, x[j] - model.vars[j].ub);
    }
    for (const auto& row : model.rows) {
        double lhs = 0.0;
        for (const auto& [v, c] : row.terms) lhs += c * x[v];
        switch (row.sense) {
            case RowSense::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
            case RowSense::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
            case RowSense::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
        }
    }
    return worst;
}

}  // namespace qcs
