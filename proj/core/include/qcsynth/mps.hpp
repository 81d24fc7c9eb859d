#pragma once

#include <string>

#include "qcsynth/mip_model.hpp"

namespace qcs {

/// Fixed-format MPS document for the model. Row and column names are
/// deterministic 8-character ids (R0000001, C0000001, ...); the mapping to
/// the model's gate-labelled variable and row names is embedded as comment
/// lines at the top of the file.
std::string export_mps(const MIPModel& model, const std::string& name = "QCSYNTH");

void write_mps_file(const MIPModel& model, const std::string& path,
                    const std::string& name = "QCSYNTH");

}  // namespace qcs
