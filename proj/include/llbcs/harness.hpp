#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "llbcs/baselines.hpp"
#include "llbcs/config.hpp"
#include "llbcs/noise.hpp"
#include "llbcs/signal_model.hpp"
#include "llbcs/solver.hpp"

namespace llbcs {

/// One trial: the true channel against one method's estimate.
struct TrialResult {
  std::string method;
  std::vector<double> true_delays_s;  // sorted ascending
  std::vector<double> est_delays_s;   // sorted ascending, length k
  DelaySpectrum spectrum;
  std::uint64_t seed = 0;
  bool converged = false;
  int iterations = 0;
  double wall_time_s = 0.0;  // diagnostics only, never serialized
};

/// Both normalizations of the aggregate delay error over a trial set:
/// eq-mean uses 1/(trials*k) outside the square root, conventional the usual
/// root-mean-square. conventional = sqrt(trials*k) * flat.
struct RmseValue {
  double flat = 0.0;          // (1 / (trials*k)) * sqrt(sum of squares)
  double conventional = 0.0;  // sqrt(mean of squares)
};

/// RMSE over trials of one method at one noise level; trials must all share
/// the same number of paths. Estimated and true delays are paired in sorted
/// order within each trial.
RmseValue rmse(const std::vector<TrialResult>& trials);

/// k spectrum peaks as delays in seconds, sorted ascending. Local maxima
/// (strictly above both neighbors, boundaries against the single neighbor)
/// are preferred, largest first; when fewer than k exist the largest
/// remaining bins fill the rest. Ties break toward the lower index.
std::vector<double> pick_peaks(const DelaySpectrum& spectrum, int k);

/// Immutable per-config state shared by every trial: waveform, grid and
/// sensing matrix. Safe for concurrent read-only use.
struct Workspace {
  Waveform waveform;
  TimeGrid grid;
  SensingMatrix a;
};

Workspace make_workspace(const ExperimentConfig& cfg);

/// Channel / clean / received realization for one trial. All randomness
/// comes from substreams of the given trial stream ("channel", "noise"),
/// so two methods given the same seed see the same realization.
struct Scene {
  SparseChannel channel;
  Eigen::VectorXd clean;
  Eigen::VectorXd received;
  std::vector<double> true_delays_s;
};

Scene make_scene(const Workspace& ws, const ExperimentConfig& cfg,
                 std::uint64_t seed);

/// Solves one already-generated scene with the named method.
TrialResult solve_scene(const Workspace& ws, const ExperimentConfig& cfg,
                        Method method, const Scene& scene, std::uint64_t seed);

/// Full single-trial pipeline: draw channel, synthesize, add noise, solve,
/// pick peaks. Deterministic in (config, method, seed).
TrialResult run_trial(const ExperimentConfig& cfg, Method method,
                      std::uint64_t seed);

/// run_trial against a prebuilt workspace (used by sweeps).
TrialResult run_trial_in(const Workspace& ws, const ExperimentConfig& cfg,
                         Method method, std::uint64_t seed);

/// Per-cell aggregate of a Monte Carlo sweep.
struct SweepCell {
  double sinr_db = 0.0;
  Method method = Method::LlBcs;
  RmseValue rmse;
};

struct SweepResult {
  std::vector<double> sinr_db;
  std::vector<Method> methods;
  std::vector<SweepCell> cells;      // sinr-major, then method order
  std::vector<TrialResult> records;  // task order: (sinr, method, trial)
  int trials = 0;
  ExperimentConfig config;

  const SweepCell& cell(std::size_t sinr_index, std::size_t method_index) const;
};

/// Factorial Monte Carlo over (SINR, method, trial). Each trial's seed is
/// derived only from (base_seed, sinr index, method, trial index), so the
/// result is identical for any worker count or execution order.
SweepResult run_sweep(const ExperimentConfig& cfg,
                      const std::vector<Method>& methods, int trials,
                      std::uint64_t base_seed, int workers);

}  // namespace llbcs
