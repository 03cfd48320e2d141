#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "llbcs/baselines.hpp"
#include "llbcs/noise.hpp"
#include "llbcs/solver.hpp"

namespace llbcs {

/// Raised by config loading/validation; message lists one line per offending
/// field, prefixed with its dotted path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SignalConfig {
  double f_start_hz = 6000.0;
  double f_end_hz = 7000.0;
  double duration_s = 0.05;
  double sample_rate_hz = 20000.0;
};

struct GridConfig {
  double grid_rate_hz = 2000.0;
  double tau_max_s = 0.02;
};

struct ChannelConfig {
  int k = 4;
  std::vector<int> pinned_indices;  // optional; when set, length must equal k
};

struct NoiseSection {
  GmmSpec gmm{{0.9, 0.07, 0.03}, {1.0, 10.0, 100.0}};
  double sgnr_db = 20.0;
  double sinr_db = -10.0;
  std::vector<double> sinr_list_db = {-20, -15, -10, -5, 0, 5, 10, 15, 20};
};

struct L1Config {
  double penalty = 0.0;       // 0 selects the universal-threshold default
  double penalty_scale = 1.0; // multiplier on the auto rule
  double eps_min = 1e-6;
  int max_iter = 2000;
};

struct IterConfig {
  double eps_min = 1e-3;
  int max_iter = 1000;
};

struct SolverSection {
  SolverOptions ll_bcs;
  IterConfig l_bcs;
  IterConfig bcs;
  L1Config l1;
};

struct RunConfig {
  std::vector<Method> methods = {Method::LlBcs, Method::LBcs, Method::Bcs,
                                 Method::L1};
  int trials = 250;
  std::uint64_t base_seed = 1;
  std::string output_dir = "runs";
  int workers = 0;  // 0 = available parallelism
  bool trace = false;
};

/// Full experiment description; defaults reproduce the reference scenario
/// (6-7 kHz chirp over 50 ms at 20 kHz, 2 kHz grid over 20 ms, K = 4,
/// three-component impulsive mixture, SGNR 20 dB).
struct ExperimentConfig {
  SignalConfig signal;
  GridConfig grid;
  ChannelConfig channel;
  NoiseSection noise;
  SolverSection solver;
  RunConfig run;

  /// Throws ConfigError with field-path messages when any section is
  /// inconsistent. Checks every module-level precondition reachable from
  /// the config (grid ratio, Nyquist bounds, mixture weights, ...).
  void validate() const;
};

/// Sizes implied by a config: waveform length, grid bins, matrix rows and
/// the samples-per-bin shift.
struct DerivedSizes {
  long waveform_len = 0;  // I
  int n_bins = 0;         // N
  long m_rows = 0;        // M
  int shift = 0;          // d
};

DerivedSizes derived_sizes(const ExperimentConfig& cfg);

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

}  // namespace llbcs
