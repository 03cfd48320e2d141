#pragma once

#include <filesystem>
#include <string>

#include "llbcs/harness.hpp"

namespace llbcs {

/// Sweep table, one row per (SINR, method):
/// `sinr_db,method,rmse_eq28_s,rmse_std_s,trials,k`.
std::string sweep_csv_text(const SweepResult& sweep);

/// Sidecar with the resolved config and one record per trial (seed, true and
/// estimated delays, convergence). Timing is deliberately absent so repeated
/// runs produce identical bytes.
std::string sweep_json_text(const SweepResult& sweep);

/// Writes sweep.csv, sweep_records.json and resolved_config.json.
void write_sweep_outputs(const std::filesystem::path& dir,
                         const SweepResult& sweep);

}  // namespace llbcs
