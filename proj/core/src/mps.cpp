#include "qcsynth/mps.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qcs {

namespace {

std::string row_id(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%07d", i);
    return buf;
}

std::string col_id(int j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%07d", j);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Classic two-entry data line: fields at columns 5, 15, 25, 40, 50 (1-based).
void data_line(std::ostream& os, const std::string& f2, const std::string& f3,
               const std::string& f4, const std::string& f5 = "",
               const std::string& f6 = "") {
    std::string line(4, ' ');
    line += f2;
    auto pad_to = [&line](size_t col) {
        if (line.size() < col) line.resize(col, ' ');
        else line += ' ';
    };
    pad_to(14);
    line += f3;
    pad_to(24);
    line += f4;
    if (!f5.empty()) {
        pad_to(39);
        line += f5;
        pad_to(49);
        line += f6;
    }
    os << line << "\n";
}

// Bound line: type at columns 2-3, set name at 5, column at 15, value at 25.
void bound_line(std::ostream& os, const std::string& type, const std::string& col,
                const std::string& value = "") {
    std::string line = " " + type;
    auto pad_to = [&line](size_t c) {
        if (line.size() < c) line.resize(c, ' ');
        else line += ' ';
    };
    pad_to(4);
    line += "BND";
    pad_to(14);
    line += col;
    if (!value.empty()) {
        pad_to(24);
        line += value;
    }
    os << line << "\n";
}

}  // namespace

std::string export_mps(const MIPModel& model, const std::string& name) {
    std::ostringstream os;
    os << "* Generated by qcsynth; minimization problem\n";
    os << "* Column map:\n";
    for (size_t j = 0; j < model.vars.size(); ++j)
        os << "*   " << col_id(static_cast<int>(j)) << " = " << model.vars[j].name << "\n";
    os << "* Row map:\n";
    for (size_t i = 0; i < model.rows.size(); ++i)
        os << "*   " << row_id(static_cast<int>(i)) << " = " << model.rows[i].name << "\n";
    os << "NAME          " << name << "\n";

    os << "ROWS\n";
    os << " N  COST\n";
    for (size_t i = 0; i < model.rows.size(); ++i) {
        char s = 'E';
        if (model.rows[i].sense == RowSense::LessEqual) s = 'L';
        if (model.rows[i].sense == RowSense::GreaterEqual) s = 'G';
        os << " " << s << "  " << row_id(static_cast<int>(i)) << "\n";
    }

    // Column-major entries.
    std::vector<std::vector<std::pair<int, double>>> cols(model.vars.size());
    for (size_t i = 0; i < model.rows.size(); ++i)
        for (const auto& [v, c] : model.rows[i].terms)
            cols[v].emplace_back(static_cast<int>(i), c);

    os << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (size_t j = 0; j < model.vars.size(); ++j) {
        const bool want_int = model.vars[j].kind == VarKind::Binary;
        if (want_int != in_int) {
            data_line(os, "MARKER" + std::to_string(marker++), "'MARKER'",
                      want_int ? "'INTORG'" : "'INTEND'");
            in_int = want_int;
        }
        std::vector<std::pair<std::string, double>> entries;
        if (model.objective[j] != 0.0) entries.emplace_back("COST", model.objective[j]);
        for (const auto& [r, c] : cols[j]) entries.emplace_back(row_id(r), c);
        for (size_t k = 0; k < entries.size(); k += 2) {
            if (k + 1 < entries.size())
                data_line(os, col_id(static_cast<int>(j)), entries[k].first, num(entries[k].second),
                          entries[k + 1].first, num(entries[k + 1].second));
            else
                data_line(os, col_id(static_cast<int>(j)), entries[k].first, num(entries[k].second));
        }
        if (entries.empty())  // keep the column declared
            data_line(os, col_id(static_cast<int>(j)), "COST", "0");
    }
    if (in_int) data_line(os, "MARKER" + std::to_string(marker++), "'MARKER'", "'INTEND'");

    os << "RHS\n";
    for (size_t i = 0; i < model.rows.size(); ++i)
        if (model.rows[i].rhs != 0.0)
            data_line(os, "RHS", row_id(static_cast<int>(i)), num(model.rows[i].rhs));

    os << "BOUNDS\n";
    for (size_t j = 0; j < model.vars.size(); ++j) {
        const auto& v = model.vars[j];
        if (v.kind == VarKind::Binary && v.lb == 0.0 && v.ub == 1.0) {
            bound_line(os, "BV", col_id(static_cast<int>(j)));
            continue;
        }
        bound_line(os, "LO", col_id(static_cast<int>(j)), num(v.lb));
        bound_line(os, "UP", col_id(static_cast<int>(j)), num(v.ub));
    }
    os << "ENDATA\n";
    return os.str();
}

void write_mps_file(const MIPModel& model, const std::string& path, const std::string& name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write MPS file: " + path);
    out << export_mps(model, name);
}

}  // namespace qcs
