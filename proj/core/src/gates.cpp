#include "qcsynth/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qcs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.7071067811865475244;

struct FamilyInfo {
    GateFamily family;
    const char* name;
    int qubits;
    int angles;
};

// KronProduct is handled structurally and has no row here.
constexpr std::array<FamilyInfo, 26> kFamilies{{
    {GateFamily::H, "H", 1, 0},
    {GateFamily::S, "S", 1, 0},
    {GateFamily::Sdagger, "Sdagger", 1, 0},
    {GateFamily::X, "X", 1, 0},
    {GateFamily::SX, "SX", 1, 0},
    {GateFamily::SXdagger, "SXdagger", 1, 0},
    {GateFamily::Y, "Y", 1, 0},
    {GateFamily::Z, "Z", 1, 0},
    {GateFamily::T, "T", 1, 0},
    {GateFamily::Tdagger, "Tdagger", 1, 0},
    {GateFamily::Rx, "Rx", 1, 1},
    {GateFamily::Ry, "Ry", 1, 1},
    {GateFamily::Rz, "Rz", 1, 1},
    {GateFamily::U3, "U3", 1, 3},
    {GateFamily::CNot, "CNot", 2, 0},
    {GateFamily::CV, "CV", 2, 0},
    {GateFamily::CVdagger, "CVdagger", 2, 0},
    {GateFamily::CH, "CH", 2, 0},
    {GateFamily::CZ, "CZ", 2, 0},
    {GateFamily::Swap, "Swap", 2, 0},
    {GateFamily::ISwap, "ISwap", 2, 0},
    {GateFamily::Magic, "Magic", 2, 0},
    {GateFamily::GroverDiffusion, "GroverDiffusion", 2, 0},
    {GateFamily::Sycamore, "Sycamore", 2, 0},
    {GateFamily::QFT2, "QFT2", 2, 0},
    {GateFamily::Identity, "Identity", 0, 0},
}};

const FamilyInfo& info(GateFamily f) {
    for (const auto& fi : kFamilies)
        if (fi.family == f) return fi;
    throw std::logic_error("unknown gate family");
}

using cd = std::complex<double>;

Unitary from_entries(int dim, std::initializer_list<cd> entries) {
    Eigen::MatrixXd re(dim, dim), im(dim, dim);
    auto it = entries.begin();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j, ++it) {
            re(i, j) = it->real();
            im(i, j) = it->imag();
        }
    return Unitary(std::move(re), std::move(im));
}

Unitary one_qubit_matrix(GateFamily f, const std::vector<double>& a) {
    const cd i1(0, 1);
    switch (f) {
        case GateFamily::H:
            return from_entries(2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
        case GateFamily::S:
            return from_entries(2, {1, 0, 0, i1});
        case GateFamily::Sdagger:
            return from_entries(2, {1, 0, 0, -i1});
        case GateFamily::X:
            return from_entries(2, {0, 1, 1, 0});
        case GateFamily::SX:
            return from_entries(2, {cd(0.5, 0.5), cd(0.5, -0.5), cd(0.5, -0.5), cd(0.5, 0.5)});
        case GateFamily::SXdagger:
            return from_entries(2, {cd(0.5, -0.5), cd(0.5, 0.5), cd(0.5, 0.5), cd(0.5, -0.5)});
        case GateFamily::Y:
            return from_entries(2, {0, -i1, i1, 0});
        case GateFamily::Z:
            return from_entries(2, {1, 0, 0, -1});
        case GateFamily::T:
            return from_entries(2, {1, 0, 0, std::polar(1.0, kPi / 4)});
        case GateFamily::Tdagger:
            return from_entries(2, {1, 0, 0, std::polar(1.0, -kPi / 4)});
        case GateFamily::Rx: {
            const double c = std::cos(a[0] / 2), s = std::sin(a[0] / 2);
            return from_entries(2, {c, cd(0, -s), cd(0, -s), c});
        }
        case GateFamily::Ry: {
            const double c = std::cos(a[0] / 2), s = std::sin(a[0] / 2);
            return from_entries(2, {c, -s, s, c});
        }
        case GateFamily::Rz: {
            return from_entries(2, {std::polar(1.0, -a[0] / 2), 0, 0, std::polar(1.0, a[0] / 2)});
        }
        case GateFamily::U3: {
            const double c = std::cos(a[0] / 2), s = std::sin(a[0] / 2);
            return from_entries(2, {c, -std::polar(1.0, a[2]) * s,
                                    std::polar(1.0, a[1]) * s,
                                    std::polar(1.0, a[1] + a[2]) * c});
        }
        case GateFamily::Identity:
            return Unitary::identity(2);
        default:
            throw std::logic_error("not a one-qubit family");
    }
}

Unitary controlled_4x4(const Unitary& u) {
    // (control, target) slot order: control is the more significant bit.
    Unitary m = Unitary::identity(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m.set(2 + i, 2 + j, u.at(i, j));
    return m;
}

Unitary two_qubit_matrix(GateFamily f) {
    const cd i1(0, 1);
    switch (f) {
        case GateFamily::CNot:
            return controlled_4x4(one_qubit_matrix(GateFamily::X, {}));
        case GateFamily::CV:
            return controlled_4x4(one_qubit_matrix(GateFamily::SX, {}));
        case GateFamily::CVdagger:
            return controlled_4x4(one_qubit_matrix(GateFamily::SXdagger, {}));
        case GateFamily::CH:
            return controlled_4x4(one_qubit_matrix(GateFamily::H, {}));
        case GateFamily::CZ:
            return controlled_4x4(one_qubit_matrix(GateFamily::Z, {}));
        case GateFamily::Swap:
            return from_entries(4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
        case GateFamily::ISwap:
            return from_entries(4, {1, 0, 0, 0, 0, 0, i1, 0, 0, i1, 0, 0, 0, 0, 0, 1});
        case GateFamily::Magic:
            // Hill-Wootters / Vatan-Williams magic basis.
            return from_entries(4, {kInvSqrt2, kInvSqrt2 * i1, 0, 0,
                                    0, 0, kInvSqrt2 * i1, kInvSqrt2,
                                    0, 0, kInvSqrt2 * i1, -kInvSqrt2,
                                    kInvSqrt2, -kInvSqrt2 * i1, 0, 0});
        case GateFamily::GroverDiffusion:
            // 2|s><s| - I over the two-qubit uniform state |s>.
            return from_entries(4, {-0.5, 0.5, 0.5, 0.5,
                                    0.5, -0.5, 0.5, 0.5,
                                    0.5, 0.5, -0.5, 0.5,
                                    0.5, 0.5, 0.5, -0.5});
        case GateFamily::Sycamore:
            // fSim(pi/2, pi/6).
            return from_entries(4, {1, 0, 0, 0,
                                    0, 0, -i1, 0,
                                    0, -i1, 0, 0,
                                    0, 0, 0, std::polar(1.0, -kPi / 6)});
        case GateFamily::QFT2: {
            Unitary m = Unitary::zero(4);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    m.set(r, c, 0.5 * std::polar(1.0, 2 * kPi * r * c / 4.0));
            return m;
        }
        default:
            throw std::logic_error("not a two-qubit family");
    }
}

std::string format_angle(double x) {
    if (x == 0.0) x = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

// Accepts "1.5708", "pi", "-pi/2", "0.5pi", "3pi/4", "2".
double parse_angle(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::invalid_argument("empty angle");
    double sign = 1.0;
    size_t pos = 0;
    if (t[pos] == '+' || t[pos] == '-') {
        if (t[pos] == '-') sign = -1.0;
        ++pos;
    }
    const size_t ppos = t.find("pi", pos);
    if (ppos == std::string::npos) {
        size_t used = 0;
        const double v = std::stod(t.substr(pos), &used);
        if (pos + used != t.size()) throw std::invalid_argument("bad angle: " + s);
        return sign * v;
    }
    double coef = 1.0;
    if (ppos > pos) coef = std::stod(t.substr(pos, ppos - pos));
    double denom = 1.0;
    size_t rest = ppos + 2;
    if (rest < t.size()) {
        if (t[rest] != '/') throw std::invalid_argument("bad angle: " + s);
        denom = std::stod(t.substr(rest + 1));
    }
    return sign * coef * kPi / denom;
}

std::vector<std::string> split_top_level(const std::string& s, char delim) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == delim && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

void validate(const GateSpec& spec) {
    if (spec.family == GateFamily::KronProduct) {
        if (spec.factors.size() < 2)
            throw std::invalid_argument("Kron: needs at least two factors");
        std::set<int> seen;
        for (const auto& f : spec.factors) {
            validate(f);
            for (int q : f.support())
                if (!seen.insert(q).second)
                    throw std::invalid_argument("Kron: overlapping qubit " + std::to_string(q));
        }
        return;
    }
    const auto& fi = info(spec.family);
    if (static_cast<int>(spec.qubits.size()) != fi.qubits)
        throw std::invalid_argument(std::string("gate ") + fi.name + ": expected " +
                                    std::to_string(fi.qubits) + " qubit indices");
    if (static_cast<int>(spec.angles.size()) != fi.angles)
        throw std::invalid_argument(std::string("gate ") + fi.name + ": expected " +
                                    std::to_string(fi.angles) + " angle parameters, got " +
                                    std::to_string(spec.angles.size()));
    if (spec.qubits.size() == 2 && spec.qubits[0] == spec.qubits[1])
        throw std::invalid_argument(std::string("gate ") + fi.name + ": duplicate qubit index");
    for (int q : spec.qubits)
        if (q < 1) throw std::invalid_argument("qubit indices are 1-based");
}

}  // namespace

int family_qubit_count(GateFamily f) {
    if (f == GateFamily::KronProduct) return 0;
    return info(f).qubits;
}

int family_angle_count(GateFamily f) {
    if (f == GateFamily::KronProduct) return 0;
    return info(f).angles;
}

const std::string& family_name(GateFamily f) {
    static std::map<GateFamily, std::string> names = [] {
        std::map<GateFamily, std::string> m;
        for (const auto& fi : kFamilies) m[fi.family] = fi.name;
        m[GateFamily::KronProduct] = "Kron";
        return m;
    }();
    return names.at(f);
}

std::optional<GateFamily> family_from_name(const std::string& name) {
    for (const auto& fi : kFamilies)
        if (name == fi.name) return fi.family;
    if (name == "I") return GateFamily::Identity;
    if (name == "Kron") return GateFamily::KronProduct;
    return std::nullopt;
}

std::string GateSpec::label() const {
    if (family == GateFamily::KronProduct) {
        std::string out = "Kron(";
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) out += ",";
            out += factors[i].label();
        }
        return out + ")";
    }
    std::string out = family_name(family);
    for (int q : qubits) out += "_" + std::to_string(q);
    if (!angles.empty()) {
        out += "(";
        for (size_t i = 0; i < angles.size(); ++i) {
            if (i) out += ",";
            out += format_angle(angles[i]);
        }
        out += ")";
    }
    return out;
}

std::vector<int> GateSpec::support() const {
    std::set<int> s;
    if (family == GateFamily::KronProduct) {
        for (const auto& f : factors)
            for (int q : f.support()) s.insert(q);
    } else {
        s.insert(qubits.begin(), qubits.end());
    }
    return {s.begin(), s.end()};
}

bool GateSpec::operator==(const GateSpec& o) const {
    return family == o.family && qubits == o.qubits && angles == o.angles &&
           factors == o.factors;
}

GateSpec parse_gate_label(const std::string& label) {
    std::string s = label;
    // Kronecker composite.
    if (s.rfind("Kron(", 0) == 0 && s.back() == ')') {
        GateSpec spec;
        spec.family = GateFamily::KronProduct;
        for (const auto& part : split_top_level(s.substr(5, s.size() - 6), ','))
            spec.factors.push_back(parse_gate_label(part));
        validate(spec);
        return spec;
    }
    // Optional "(a,b,c)" angle suffix.
    std::vector<double> angles;
    bool has_angles = false;
    const size_t paren = s.find('(');
    if (paren != std::string::npos) {
        if (s.back() != ')') throw std::invalid_argument("malformed gate label: " + label);
        for (const auto& part : split_top_level(s.substr(paren + 1, s.size() - paren - 2), ','))
            angles.push_back(parse_angle(part));
        has_angles = true;
        s = s.substr(0, paren);
    }
    // FAMILY[_q[_t]] with the family token before the first underscore that
    // is followed by a digit.
    std::vector<int> qubits;
    std::string fam = s;
    size_t us = s.find('_');
    if (us != std::string::npos) {
        fam = s.substr(0, us);
        for (const auto& part : split_top_level(s.substr(us + 1), '_')) {
            try {
                size_t used = 0;
                const int q = std::stoi(part, &used);
                if (used != part.size()) throw std::invalid_argument("");
                qubits.push_back(q);
            } catch (...) {
                throw std::invalid_argument("malformed gate label: " + label);
            }
        }
    }
    const auto f = family_from_name(fam);
    if (!f) throw std::invalid_argument("unknown gate family in label: " + label);
    GateSpec spec;
    spec.family = *f;
    spec.qubits = std::move(qubits);
    spec.angles = std::move(angles);
    if (!has_angles && family_angle_count(*f) > 0) {
        // Pattern form (angles to be filled by discretization); validate
        // qubit slots only.
        GateSpec probe = spec;
        probe.angles.assign(family_angle_count(*f), 0.0);
        validate(probe);
        return spec;
    }
    validate(spec);
    return spec;
}

namespace {

// Bit of qubit q (1-based) within basis index s; qubit 1 is the most
// significant of the N bits.
inline int qubit_bit(int s, int q, int n) { return (s >> (n - q)) & 1; }

Unitary place(const Unitary& small, const std::vector<int>& qubits, int n) {
    const int dim = 1 << n;
    Unitary out = Unitary::zero(dim);
    const int k = static_cast<int>(qubits.size());
    int touched_mask = 0;
    for (int q : qubits) touched_mask |= 1 << (n - q);
    for (int col = 0; col < dim; ++col) {
        for (int row = 0; row < dim; ++row) {
            if ((row & ~touched_mask) != (col & ~touched_mask)) continue;
            int i = 0, j = 0;
            for (int t = 0; t < k; ++t) {
                i = (i << 1) | qubit_bit(row, qubits[t], n);
                j = (j << 1) | qubit_bit(col, qubits[t], n);
            }
            out.set(row, col, small.at(i, j));
        }
    }
    return out;
}

}  // namespace

Unitary build_small_unitary(const GateSpec& spec) {
    validate(spec);
    if (spec.family == GateFamily::KronProduct) {
        // Composite matrix over the span of touched qubits; untouched span
        // qubits get implicit identities, and factors with non-adjacent
        // supports go through the same projector placement as lifting.
        const auto sup = spec.support();
        const int lo = sup.front(), hi = sup.back();
        const int span = hi - lo + 1;
        Unitary out = Unitary::identity(1 << span);
        for (const auto& f : spec.factors) {
            // Slot list in the factor's own index order (control before
            // target); nested composites occupy their whole span.
            std::vector<int> slots;
            if (f.family == GateFamily::KronProduct) {
                const auto fs = f.support();
                for (int q = fs.front(); q <= fs.back(); ++q) slots.push_back(q - lo + 1);
            } else {
                for (int q : f.qubits) slots.push_back(q - lo + 1);
            }
            out = out * place(build_small_unitary(f), slots, span);
        }
        return out;
    }
    const auto& fi = info(spec.family);
    if (fi.qubits == 2) return two_qubit_matrix(spec.family);
    return one_qubit_matrix(spec.family, spec.angles);
}

ElementaryGate lift_to_circuit(const GateSpec& spec, int num_qubits) {
    validate(spec);
    for (int q : spec.support()) {
        if (q < 1 || q > num_qubits)
            throw std::invalid_argument("qubit index " + std::to_string(q) +
                                        " out of range 1.." + std::to_string(num_qubits));
    }
    Unitary lifted;
    if (spec.family == GateFamily::Identity) {
        lifted = Unitary::identity(1 << num_qubits);
    } else if (spec.family == GateFamily::KronProduct) {
        lifted = Unitary::identity(1 << num_qubits);
        for (const auto& f : spec.factors)
            lifted = lifted * lift_to_circuit(f, num_qubits).lifted;
    } else {
        lifted = place(build_small_unitary(spec), spec.qubits, num_qubits);
    }
    return {spec, std::move(lifted), spec.label()};
}

std::vector<GateSpec> discretize(const GateSpec& pattern,
                                 const std::vector<std::vector<double>>& grids) {
    const int arity = family_angle_count(pattern.family);
    if (static_cast<int>(grids.size()) != arity)
        throw std::invalid_argument("discretize: family " + family_name(pattern.family) +
                                    " needs " + std::to_string(arity) + " angle grids");
    for (const auto& g : grids)
        if (g.empty()) throw std::invalid_argument("discretize: empty angle grid");
    std::vector<GateSpec> out;
    std::vector<size_t> idx(grids.size(), 0);
    while (true) {
        GateSpec s = pattern;
        s.angles.clear();
        for (size_t k = 0; k < grids.size(); ++k) s.angles.push_back(grids[k][idx[k]]);
        s.factors.clear();
        out.push_back(std::move(s));
        // Odometer increment, last grid fastest.
        int k = static_cast<int>(grids.size()) - 1;
        for (; k >= 0; --k) {
            if (++idx[k] < grids[k].size()) break;
            idx[k] = 0;
        }
        if (k < 0) break;
    }
    return out;
}

PairFlags classify_pair(const Unitary& u, const Unitary& v,
                        const std::vector<Unitary>& natives, double tol) {
    if (u.dim() != v.dim()) throw std::invalid_argument("classify_pair: dimension mismatch");
    PairFlags flags;
    flags.commute = (u * v).max_abs_diff(v * u) < tol;
    const Unitary prod = u * v;
    for (size_t j = 0; j < natives.size(); ++j) {
        if (equiv_up_to_phase(prod, natives[j], tol).equal) {
            flags.redundant_product_index = static_cast<int>(j);
            break;
        }
    }
    return flags;
}

SingleFlags classify_single(const Unitary& u, double tol) {
    SingleFlags flags;
    const Unitary sq = u * u;
    flags.involutory = equiv_up_to_phase(sq, Unitary::identity(u.dim()), tol).equal;
    flags.idempotent = sq.max_abs_diff(u) < tol;
    return flags;
}

}  // namespace qcs
