#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llbcs/config.hpp"

namespace llbcs {

/// Command-line overrides applied on top of the loaded (or default) config.
struct CliOverrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::vector<std::string>> methods;
  std::optional<double> sinr_db;
  std::optional<std::vector<double>> sinr_list_db;
  std::optional<double> sgnr_db;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  bool trace = false;
};

/// Loads the config (defaults when no path is given), applies overrides and
/// validates. Throws ConfigError on any problem.
ExperimentConfig resolve_config(const CliOverrides& o);

/// One realization, every requested method on the same channel and noise.
/// Writes received/waveform/channel CSVs, per-method spectra and a JSON
/// summary into <output_dir>/simulate-seed<seed>. Returns the exit status.
int cmd_simulate(const CliOverrides& o);

/// Monte Carlo sweep over the SINR list; writes CSV + JSON sidecar into
/// <output_dir>/sweep-seed<seed>.
int cmd_sweep(const CliOverrides& o);

/// Parses and validates only; prints derived sizes (I, N, M, d).
int cmd_validate(const CliOverrides& o);

}  // namespace llbcs
